"""Command-line front end.

    lifshitz free-energy scenario.ini --out curve.csv --json curve.json
    lifshitz sweep scenario.ini --threads 8 --pressure
    lifshitz selftest

Every subcommand except ``selftest`` reads a scenario file (see
:mod:`lifshitz.scenario`). CSV numbers are written with ``%.15e``; the same
scenario always yields the same bytes regardless of ``--threads``.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import __version__
from .dielectric import DivergentStaticLimit, PoleError
from .engine import EnergyResult, extra_term, free_energy, free_energy_zero_T
from .planar_kernel import BranchTrackingError, PlanarScenario
from .plasma_gap import (DEMO_DISCLAIMER, PlasmaGapParams, n0_term, nuclear_demo, screened_expansion,
                         screened_free_energy, vacuum_gap_expansion, vacuum_gap_free_energy)
from .quadrature import ConvergenceError
from .quantities import FM, MEV, Dimension, UnitSystem, convert, ev_to_rad_s, quantity, thermal_x
from .resonance import (PolarizabilityModel, ResonanceQuery, resonance_closed_form, resonance_n0,
                        resonance_series)
from .scenario import ScenarioError, ScenarioFile, load_scenario, material, separation, sweep, temperature

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3

FLOAT_FORMAT = "%.15e"
DEFAULT_TOL = 1e-8

L, E_A, E, TEMP, P, K = (Dimension.LENGTH, Dimension.ENERGY_PER_AREA, Dimension.ENERGY,
                         Dimension.TEMPERATURE, Dimension.PRESSURE, Dimension.WAVENUMBER)

_UNIT_TOKEN = {"m": "m", "J/m^2": "J_m2", "J": "J", "K": "K", "Pa": "Pa", "1/m": "per_m", "rad/s": "rad_s",
               "fm": "fm", "MeV/fm^2": "MeV_fm2", "MeV": "MeV", "MeV/fm^3": "MeV_fm3", "1/fm": "per_fm"}


@dataclass
class CurveRecord:
    """One sweep point of a free-energy curve."""

    sweep_var: str
    sweep_value: float
    d: float
    T: float
    value: float
    abs_error: float
    n_terms: int
    quad_evals: int
    te: float = 0.0
    tm: float = 0.0
    converged: bool = True
    diagnostics: dict = field(default_factory=dict, repr=False)


# force post-processing

def _poly_derivative(d, f, i, npts=5):
    """dF/dd at d[i] from the degree npts-1 polynomial through the npts nearest samples."""
    lo = min(max(i - npts // 2, 0), len(d) - npts)
    x, y = d[lo:lo + npts], f[lo:lo + npts]
    scale = x[-1] - x[0]
    coef = np.polynomial.polynomial.polyfit((x - d[i]) / scale, y, npts - 1)
    return coef[1] / scale


def force_from_energy(curve: Sequence) -> List[tuple]:
    """Pressure -dF/dd from a free-energy curve, as ``(d, pressure, error)`` rows.

    Interior points use the non-uniform central stencil, the ends one-sided
    second-order stencils (``np.gradient`` with ``edge_order=2``). The error
    column is twice the distance to a five-point local-polynomial derivative
    plus the propagated energy errors. Curves shorter than five points use the
    distance to the first-order one-sided difference instead, which overstates
    the error.

    Parameters
    ----------
    curve
        ``CurveRecord`` objects or ``(d, F[, abs_error])`` tuples sorted by d.
    """
    rows = [(r.d, r.value, r.abs_error) if isinstance(r, CurveRecord) else tuple(r) for r in curve]
    if len(rows) < 3:
        raise ValueError("force_from_energy needs at least 3 points")
    d = np.array([r[0] for r in rows], dtype=float)
    f = np.array([r[1] for r in rows], dtype=float)
    ferr = np.array([r[2] if len(r) > 2 else 0.0 for r in rows], dtype=float)
    if np.any(np.diff(d) <= 0):
        raise ValueError("separations must be strictly increasing (unsorted or duplicate d)")
    dfdd = np.gradient(f, d, edge_order=2)
    h = np.diff(d)
    if len(d) >= 5:
        fine = np.array([_poly_derivative(d, f, i) for i in range(len(d))])
        trunc = 2.0 * np.abs(dfdd - fine)
    else:
        fwd = np.diff(f) / h
        trunc = np.abs(dfdd - np.concatenate((fwd, [fwd[-1]])))
    span = np.concatenate(([h[0] + h[1]], h[:-1] + h[1:], [h[-1] + h[-2]]))
    nb = np.concatenate(([ferr[1]], np.maximum(ferr[:-2], ferr[2:]), [ferr[-2]]))
    prop = 2.0 * (ferr + nb) / span
    return [(float(a), float(-b), float(c)) for a, b, c in zip(d, dfdd, trunc + prop)]


# table output

@dataclass
class Table:
    columns: List[tuple]  # (name, Dimension or None)
    rows: List[list] = field(default_factory=list)
    diagnostics: List[dict] = field(default_factory=list)
    failed: bool = False
    notes: List[str] = field(default_factory=list)

    def header(self, units: UnitSystem) -> List[str]:
        out = []
        for name, dim in self.columns:
            if dim is None:
                out.append(name)
            else:
                out.append(f"{name}_{_UNIT_TOKEN[quantity(0.0, dim, units).label]}")
        return out

    def converted(self, units: UnitSystem) -> List[list]:
        out = []
        for row in self.rows:
            conv = []
            for (name, dim), v in zip(self.columns, row):
                if dim is not None and isinstance(v, float):
                    v = convert(quantity(v, dim), units).value
                conv.append(v)
            out.append(conv)
        return out


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return FLOAT_FORMAT % float(v)


def render_csv(table: Table, units: UnitSystem) -> str:
    buf = io.StringIO()
    buf.write(",".join(table.header(units)) + "\n")
    for row in table.converted(units):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


# per-point evaluators

def _energy_diagnostics(res: EnergyResult) -> dict:
    diag = {"n_terms": res.n_terms_used, "quad_evals": res.quad_evals}
    if res.grid is not None:
        diag["n_max"] = res.grid.n_max
        diag["tail_estimate"] = res.grid.tail_estimate
    if res.breakdown:
        diag["terms"] = [[b.n, b.xi, b.te, b.tm, b.error] for b in res.breakdown]
    return diag


def _energy_point(halfspace, gap, d, T, tol, sweep_var, sweep_value) -> CurveRecord:
    sc = PlanarScenario(halfspace, gap, d, T)
    converged = True
    try:
        res = free_energy(sc, tol) if T > 0 else free_energy_zero_T(sc, tol)
    except ConvergenceError as exc:
        res, converged = exc.partial, False
        if res is None:
            res = EnergyResult(math.nan, math.inf, 0, 0)
    te = res.te if res.breakdown else 0.0
    tm = res.tm if res.breakdown else 0.0
    return CurveRecord(sweep_var, sweep_value, d, T, res.value, res.abs_error, res.n_terms_used,
                       res.quad_evals, te, tm, converged, _energy_diagnostics(res))


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    """Evaluate ``fn`` on every item; results come back in input order."""
    if threads <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _points(sc: ScenarioFile, require_T=True):
    """(sweep_var, [(d, T), ...]) from [geometry]/[thermal] and an optional [sweep]."""
    d0, T0 = separation(sc), temperature(sc)
    sw = sweep(sc)
    if sw is None:
        if d0 is None:
            raise ScenarioError("[geometry] needs a separation (d_m, d_um, d_nm or d_fm)", None, sc.path)
        if T0 is None and require_T:
            raise ScenarioError("[thermal] needs T_K", None, sc.path)
        return "d", [(d0, T0)]
    if sw.variable == "d":
        if T0 is None and require_T:
            raise ScenarioError("[thermal] needs T_K for a separation sweep", None, sc.path)
        return "d", [(float(v), T0) for v in sw.values]
    if d0 is None:
        raise ScenarioError("[geometry] needs a separation for a temperature sweep", None, sc.path)
    return "T", [(d0, float(v)) for v in sw.values]


_ENERGY_COLUMNS = [("d", L), ("T", TEMP), ("F", E_A), ("abs_error", E_A), ("F_te", E_A), ("F_tm", E_A),
                   ("n_terms", None), ("quad_evals", None), ("converged", None)]


def cmd_energy(sc: ScenarioFile, args, pressure=False) -> Table:
    halfspace, gap = material(sc, "halfspace"), material(sc, "gap")
    var, pts = _points(sc)
    tol = _tol(sc, args)

    def one(p):
        d, T = p
        return _energy_point(halfspace, gap, d, T, tol, var, d if var == "d" else T)

    records = _map(one, pts, args.threads)
    table = Table(list(_ENERGY_COLUMNS))
    for r in records:
        table.rows.append([r.d, r.T, r.value, r.abs_error, r.te, r.tm, r.n_terms, r.quad_evals, r.converged])
        table.diagnostics.append({"d": r.d, "T": r.T, **r.diagnostics})
        table.failed |= not r.converged
    if pressure:
        if var != "d":
            raise ScenarioError("--pressure needs a sweep over d", None, sc.path)
        forces = force_from_energy(records)
        table.columns += [("pressure", P), ("pressure_error", P)]
        for row, (_, pr, pe) in zip(table.rows, forces):
            row += [pr, pe]
    return table


def cmd_extra_term(sc: ScenarioFile, args) -> Table:
    halfspace, gap = material(sc, "halfspace"), material(sc, "gap")
    var, pts = _points(sc)
    tol = _tol(sc, args, default=1e-6)
    n_cap = args.n_cap if args.n_cap is not None else sc.get("output", "n_cap_count", 10)

    def one(p):
        d, T = p
        return extra_term(PlanarScenario(halfspace, gap, d, T), tol=tol, n_cap=n_cap)

    results = _map(one, pts, args.threads)
    table = Table([("d", L), ("T", TEMP), ("value_real", E_A), ("value_imag_part", E_A), ("abs_error", E_A),
                   ("remainder_estimate", E_A), ("n_series_terms", None), ("pv_lo", Dimension.FREQUENCY),
                   ("pv_hi", Dimension.FREQUENCY), ("pv_converged", None)])
    for (d, T), r in zip(pts, results):
        lo, hi = r.pv_windows[0] if r.pv_windows else (0.0, 0.0)
        table.rows.append([d, T, r.value_real, r.value_imag_part, r.abs_error, r.remainder_estimate,
                           r.n_series_terms, float(lo), float(hi), r.pv_converged])
        table.diagnostics.append({"d": d, "T": T, "per_n": r.per_n, "pv_windows": r.pv_windows})
        if not r.pv_converged:
            table.notes.append(f"principal-value window did not settle at d={d!r}, T={T!r}")
    return table


def _kappa(sc: ScenarioFile) -> Optional[float]:
    per_m, per_fm = sc.get("plasma", "kappa_per_m"), sc.get("plasma", "kappa_per_fm")
    if per_m is not None and per_fm is not None:
        raise sc.error("give kappa_per_m or kappa_per_fm, not both", "plasma", "kappa_per_fm")
    if per_fm is not None:
        return per_fm / FM
    return per_m


def cmd_plasma_gap(sc: ScenarioFile, args) -> Table:
    var, pts = _points(sc)
    tol = _tol(sc, args, default=1e-10)
    kappa = _kappa(sc)

    def one(p):
        d, T = p
        params = PlasmaGapParams.build(d, T, kappa)
        vac = vacuum_gap_free_energy(d, T, tol)
        scr = screened_free_energy(params, tol)
        return params, vac, scr

    table = Table([("d", L), ("T", TEMP), ("kappa", K), ("F_vacuum", E_A), ("F_vacuum_error", E_A),
                   ("F_screened", E_A), ("F_screened_error", E_A), ("F_screened_n0", E_A),
                   ("casimir", E_A), ("thermal_t3", E_A), ("thermal_t4", E_A),
                   ("term_n0", E_A), ("term_n_pos", E_A), ("n_terms", None)])
    for (d, T), (params, vac, scr) in zip(pts, _map(one, pts, args.threads)):
        cas, t3, t4 = vacuum_gap_expansion(d, T)
        n0, npos = screened_expansion(params)
        table.rows.append([d, T, params.kappa_pl, vac.value, vac.abs_error, scr.value, scr.abs_error,
                           n0_term(scr), cas, t3, t4, n0, npos, scr.n_terms_used])
        table.diagnostics.append({"d": d, "T": T, "kappa_source": params.kappa_source, "eta": params.eta,
                                  "rho": params.rho, "rho_star": params.rho_star, "x": thermal_x(d, T)})
    return table


def cmd_resonance(sc: ScenarioFile, args) -> Table:
    var, pts = _points(sc)
    if var != "d":
        raise ScenarioError("resonance sweeps run over d", None, sc.path)
    alpha0 = sc.get("resonance", "alpha0_m3")
    if alpha0 is None:
        raise ScenarioError("[resonance] needs alpha0_m3", None, sc.path)
    omega0 = sc.get("resonance", "omega0_eV")
    sign_word = sc.get("resonance", "sign", "+")
    if sign_word not in ("+", "-"):
        raise sc.error("sign must be + or -", "resonance", "sign")
    sign = 1 if sign_word == "+" else -1
    try:
        if omega0 is None:
            pol = PolarizabilityModel(alpha0)
        else:
            pol = PolarizabilityModel.london(alpha0, ev_to_rad_s(omega0))
    except ValueError as exc:
        raise sc.error(str(exc), "resonance", "alpha0_m3") from None
    tol = _tol(sc, args, default=1e-13)

    def one(p):
        d, T = p
        q = ResonanceQuery(d, T, sign)
        return (resonance_series(q, pol, tol), resonance_closed_form(q, alpha0), resonance_n0(d, T, alpha0, sign), q.x)

    table = Table([("d", L), ("U_series", E), ("U_closed", E), ("U_n0", E), ("x", None)])
    for (d, T), (us, uc, un, x) in zip(pts, _map(one, pts, args.threads)):
        table.rows.append([d, us, uc, un, x])
    return table


def cmd_nuclear_demo(sc: ScenarioFile, args) -> Table:
    d = separation(sc)
    T = temperature(sc)
    if d is None or T is None:
        raise ScenarioError("nuclear-demo needs [geometry] d_fm and [thermal] T_K", None, sc.path)
    kappa = _kappa(sc)
    rep = nuclear_demo(d / FM, T, None if kappa is None else kappa * FM)
    table = Table([("d", L), ("kT", Dimension.TEMPERATURE), ("kappa", K), ("term_n0", E), ("term_n_pos", E),
                   ("term_n0_per_area", E_A), ("term_n_pos_per_area", E_A)])
    per_area = MEV / FM**2
    table.rows.append([d, T, rep.kappa_per_fm / FM, rep.term_n0_MeV * MEV, rep.term_n_pos_MeV * MEV,
                       rep.term_n0_MeV_per_fm2 * per_area, rep.term_n_pos_MeV_per_fm2 * per_area])
    table.diagnostics.append(asdict(rep))
    table.notes.extend(rep.lines())
    return table


# driver

def _tol(sc: ScenarioFile, args, default=DEFAULT_TOL) -> float:
    if args.tol is not None:
        return args.tol
    return sc.get("output", "tol_rel", default)


def _units(sc: Optional[ScenarioFile], args) -> UnitSystem:
    word = args.units or (sc.get("output", "units") if sc is not None else None) or "si"
    try:
        return UnitSystem(word)
    except ValueError:
        raise ScenarioError(f"units must be si or natural, got {word!r}", None,
                            sc.path if sc is not None else "<args>") from None


COMMANDS = {
    "free-energy": lambda sc, a: cmd_energy(sc, a),
    "sweep": lambda sc, a: cmd_energy(sc, a, pressure=a.pressure),
    "extra-term": cmd_extra_term,
    "plasma-gap": cmd_plasma_gap,
    "resonance": cmd_resonance,
    "nuclear-demo": cmd_nuclear_demo,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lifshitz", description="Finite-temperature Casimir-Lifshitz free energies.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["selftest"]:
        s = sub.add_parser(name)
        if name != "selftest":
            s.add_argument("scenario", help="scenario file")
        s.add_argument("--out", help="CSV output path (default: stdout)")
        s.add_argument("--json", help="JSON sidecar path with full diagnostics")
        s.add_argument("--tol", type=float, help="relative tolerance")
        s.add_argument("--units", choices=["si", "natural"])
        s.add_argument("--threads", type=int, default=1)
        if name == "sweep":
            s.add_argument("--pressure", action="store_true", help="append -dF/dd columns")
        if name == "extra-term":
            s.add_argument("--n-cap", type=int, dest="n_cap", help="number of sine-series terms")
        if name == "nuclear-demo":
            s.add_argument("--demo-acknowledge", action="store_true", dest="demo_acknowledge")
    return p


def _selftest(args, out) -> int:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line(), file=out)
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed", file=out)
    return EXIT_OK if ok else EXIT_FAILED_CHECK


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    if args.tol is not None and not 1e-14 < args.tol < 1e-2:
        parser.error("--tol must lie in (1e-14, 1e-2)")
    if args.command == "selftest":
        return _selftest(args, stdout)
    if args.command == "nuclear-demo" and not args.demo_acknowledge:
        print(f"nuclear-demo prints MeV figures that are an {DEMO_DISCLAIMER}; "
              "rerun with --demo-acknowledge", file=stderr)
        return EXIT_USAGE
    try:
        sc = load_scenario(args.scenario)
        units = UnitSystem.NaturalNuclear if args.command == "nuclear-demo" and args.units is None \
            else _units(sc, args)
        table = COMMANDS[args.command](sc, args)
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ValueError, TypeError, DivergentStaticLimit, PoleError, BranchTrackingError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE

    text = render_csv(table, units)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    for note in table.notes:
        print(note, file=stderr if args.out is None else stdout)
    if args.json:
        sidecar = {
            "version": __version__,
            "command": args.command,
            "scenario": sc.as_dict(),
            "units": units.value,
            "tol": args.tol,
            "columns": table.header(units),
            "rows": table.converted(units),
            "diagnostics": table.diagnostics,
            "converged": not table.failed,
            "notes": table.notes,
        }
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(_jsonable(sidecar), fh, sort_keys=True, indent=1)
            fh.write("\n")
    if table.failed:
        print("error: convergence failure; rows with converged=0 hold partial sums", file=stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
