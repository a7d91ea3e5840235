"""Time the numba kernels against their numpy twins, then a full free-energy
evaluation under each backend (``LIFSHITZ_NUMBA=1`` vs ``0``).

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call compiles (or loads the on-disk cache), so it is made once
before timing. Each row also reports the max relative disagreement between the
two flavours on the benchmark inputs.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from lifshitz import kernels

FULL_RUN = """
import time
from lifshitz import PlanarScenario, free_energy, kernels
from lifshitz.dielectric import Drude, Vacuum
from lifshitz.quantities import ev_to_rad_s
sc = PlanarScenario(Drude(ev_to_rad_s(9.0), ev_to_rad_s(0.035)), Vacuum(), 1e-6, 300.0)
free_energy(sc, 1e-8)
t0 = time.perf_counter()
res = free_energy(sc, 1e-8)
print(kernels.BACKEND, time.perf_counter() - t0, repr(float(res.value)))
"""


def cases():
    rng = np.random.default_rng(7)
    t = np.sort(rng.uniform(1e-4, 60.0, 200_000))
    y = -np.logspace(-6, 2, 200_000)
    kappa = np.logspace(2, 8, 400)
    xi = np.logspace(9, 15, 400)
    wp, gamma = 1.37e16, 5.3e13
    return [
        ("planar_lnd (TM finite)", lambda: kernels.planar_lnd_nb(t, 3.7, 12.0, kernels.TM_FINITE),
         lambda: kernels.planar_lnd_np(t, 3.7, 12.0, kernels.TM_FINITE)),
        ("screened_sum", lambda: kernels.screened_sum_nb(y), lambda: kernels.screened_sum_np(y)),
        ("resonance_terms", lambda: kernels.resonance_terms_nb(1e-3, 200_000, 0.3),
         lambda: kernels.resonance_terms_np(1e-3, 200_000, 0.3)),
        ("offaxis_grid", lambda: kernels.offaxis_grid_nb(kappa, xi, wp, gamma, 1e-6, 299792458.0, 1.0),
         lambda: kernels.offaxis_grid_np(kappa, xi, wp, gamma, 1e-6, 299792458.0, 1.0)),
    ]


def _max_rel(a, b):
    a, b = np.atleast_1d(*(np.concatenate([np.ravel(x) for x in v]) if isinstance(v, tuple) else v
                           for v in (a, b)))
    scale = np.maximum(np.abs(a), np.abs(b))
    mask = scale > 0
    return float(np.max(np.abs(a - b)[mask] / scale[mask])) if mask.any() else 0.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.numba is None:
        sys.exit("numba is not importable; nothing to compare")

    print(f"{'kernel':<26}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max rel diff':>14}")
    for name, nb, npf in cases():
        nb()  # compile or load cache
        t_nb = min(timeit.repeat(nb, number=1, repeat=args.repeat))
        t_np = min(timeit.repeat(npf, number=1, repeat=args.repeat))
        print(f"{name:<26}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>10.1f}{_max_rel(nb(), npf()):>14.1e}")

    print("\nfull free_energy(Drude gold, 1 um, 300 K, tol 1e-8), second call:")
    for flag in ("1", "0"):
        env = dict(os.environ, LIFSHITZ_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", FULL_RUN], env=env, capture_output=True, text=True, check=True)
        backend, secs, value = out.stdout.split()
        print(f"  LIFSHITZ_NUMBA={flag} ({backend:<5}) {1e3 * float(secs):9.1f} ms  F = {value} J/m^2")


if __name__ == "__main__":
    main()
