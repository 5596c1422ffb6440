"""Command-line front end.

Exit codes: 0 success, 2 bad configuration, 3 no twin / classical / compatible
system, 4 interface conditions failed or partial coverage, 5 invariant check
failed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .crossing import (
    annotate_branches, build_system, check_conditions, normal_curves, solve_branches,
)
from .errors import BadParams, CrossTwinError, Degenerate, NoClassical, NoTwin
from .interface import classical_interface
from .invariants import inject_fault, run_invariants
from .output import branches_csv, dumps_report, normals_csv, write_text
from .twinning import TwinType, pick, solve_twin
from .variants import LatticeParams, make_variants, variant_map

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_SOLUTION = 3
EXIT_CONDITIONS = 4
EXIT_CHECK = 5

MID_EIG_CHECK_TOL = -1e-12

NUMBERING = ("U1,U2: beta along z; U3,U4: beta along y; U5,U6: beta along x; "
             "odd index has +(alpha-gamma)/2 off-diagonal, even index -(alpha-gamma)/2")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="key = value config file")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--variants", nargs=4, type=int, metavar=("A", "B", "A'", "B'"))
    parser.add_argument("--grid", type=int, metavar="N", help="number of Lambda grid points")
    parser.add_argument("--tol-mid", type=float, help="tolerance on the middle eigenvalue")
    parser.add_argument("--json", action="store_true", help="machine-readable stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosstwin",
        description="Austenite interfaces with crossing Type-II/compound twins "
                    "(cubic-to-orthorhombic martensite).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("variants", help="print the six transformation stretch matrices")
    _common(p)
    p = sub.add_parser("twins", help="solve the twinning equation for a variant pair")
    _common(p)
    p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    p = sub.add_parser("classical", help="classical austenite / Type-II laminate interface")
    _common(p)
    p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    p = sub.add_parser("nonclassical", help="branches and habit normals for crossing twins")
    _common(p)
    p.add_argument("--out-branches", metavar="PATH")
    p.add_argument("--out-normals", metavar="PATH")
    p.add_argument("--out-svg", metavar="PATH")
    p.add_argument("--workers", type=int, default=1, help="threads for the normal computation")
    p = sub.add_parser("check", help="run the invariant suite")
    _common(p)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
        "grid_n": args.grid, "tol_mid": args.tol_mid,
        "out_branches": getattr(args, "out_branches", None),
        "out_normals": getattr(args, "out_normals", None),
        "out_svg": getattr(args, "out_svg", None),
    }
    if args.variants:
        overrides.update(zip(("A", "B", "Aprime", "Bprime"), args.variants))
    return load_config(args.config, overrides)


def _pair(args, cfg: RunConfig) -> tuple[int, int]:
    pair = tuple(args.pair) if getattr(args, "pair", None) else (cfg.A, cfg.B)
    i, j = pair
    if i == j:
        raise ConfigError(f"pair indices must differ, got ({i}, {j})")
    for k in pair:
        if not 1 <= k <= 6:
            raise ConfigError(f"pair index must be in 1..6, got {k}")
    return pair


def _vec(v) -> list[float]:
    return [float(x) for x in np.ravel(v)]


def _mat(M) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(M)]


def _emit(data: dict, args, text_lines: list[str], out) -> None:
    if args.json:
        out.write(dumps_report(data) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def cmd_variants(cfg: RunConfig, args, out) -> int:
    vs = make_variants(LatticeParams(*cfg.lattice))
    data = {
        "lattice": {"alpha": cfg.alpha, "beta": cfg.beta, "gamma": cfg.gamma},
        "numbering": NUMBERING,
        "variants": [
            {"index": v.index, "U": _mat(v.U), "det": float(np.linalg.det(v.U))} for v in vs
        ],
    }
    lines = [f"alpha={cfg.alpha!r} beta={cfg.beta!r} gamma={cfg.gamma!r}"]
    for v in vs:
        lines.append(f"U{v.index} (det {float(np.linalg.det(v.U)):.12g}):")
        lines.extend("  " + " ".join(f"{x: .12f}" for x in row) for row in v.U)
    _emit(data, args, lines, out)
    return EXIT_OK


def _twin_dict(s, Ui, Uj) -> dict:
    return {
        "type": s.twin_type.value if s.twin_type else None,
        "R": _mat(s.R), "b": _vec(s.b), "n": _vec(s.n),
        "residual": s.residual(Ui, Uj),
    }


def cmd_twins(cfg: RunConfig, args, out) -> int:
    i, j = _pair(args, cfg)
    U = variant_map(LatticeParams(*cfg.lattice))
    sols = solve_twin(U[i], U[j], i, j)
    data = {"pair": [i, j], "solutions": [_twin_dict(s, U[i], U[j]) for s in sols]}
    lines = [f"twins for ({i}, {j}):"]
    for s in sols:
        kind = s.twin_type.value if s.twin_type else "unclassified"
        lines.append(f"  {kind:9s} n = {np.array2string(s.n, precision=8)}"
                     f"  b = {np.array2string(s.b, precision=8)}")
    _emit(data, args, lines, out)
    return EXIT_OK


def cmd_classical(cfg: RunConfig, args, out) -> int:
    i, j = _pair(args, cfg)
    U = variant_map(LatticeParams(*cfg.lattice))
    twin = pick(solve_twin(U[i], U[j], i, j), TwinType.TYPE_II)
    ci = classical_interface(U[i], twin, cfg.tol_mid)
    normals = [
        {"lambda": lam, "sign": "+" if s.sign > 0 else "-", "m": _vec(s.m), "b": _vec(s.b),
         "mid_eigenvalue": float(s.eigs[1]), "mid_residual": abs(float(s.eigs[1]) - 1.0)}
        for lam, s in ci.solutions
    ]
    data = {"pair": [i, j], "a0": ci.a0, "a1": ci.a1, "lambda_star": ci.lambda_star,
            "one_minus_lambda_star": 1.0 - ci.lambda_star, "normals": normals}
    lines = [f"classical interface for Type-II pair ({i}, {j})",
             f"  lambda* = {ci.lambda_star!r}", f"  1 - lambda* = {1.0 - ci.lambda_star!r}"]
    for nrm in normals:
        lines.append(f"  lambda={nrm['lambda']:.12f} {nrm['sign']} m = "
                     + " ".join(f"{x: .12f}" for x in nrm["m"]))
    _emit(data, args, lines, out)
    return EXIT_OK


def nonclassical_run(cfg: RunConfig, workers: int = 1):
    """Everything ``nonclassical`` computes, as a report dict plus the raw results."""
    U = variant_map(LatticeParams(*cfg.lattice))
    system = build_system(*cfg.roles, U)
    cond = check_conditions(system.coeffs)
    branches = annotate_branches(system, solve_branches(system.coeffs, cfg.grid_n))
    curves = normal_curves(system, branches, cfg.tol_mid, workers=workers)
    try:
        classical = [classical_interface(system.U_A, system.sol_ab, cfg.tol_mid),
                     classical_interface(system.U_Ap, system.sol_apbp, cfg.tol_mid)]
    except NoClassical:
        classical = []
    lambda_star = classical[0].lambda_star if classical else None

    check_min = min((p.mid_eig_check for p in branches), default=float("nan"))
    middle_eigenvalue_ok = bool(len(branches)) and check_min >= MID_EIG_CHECK_TOL
    ok = cond.all_hold and middle_eigenvalue_ok and branches.full_coverage
    c = system.coeffs
    report = {
        "lattice": {"alpha": cfg.alpha, "beta": cfg.beta, "gamma": cfg.gamma},
        "variants": {"A": cfg.A, "B": cfg.B, "Aprime": cfg.Aprime, "Bprime": cfg.Bprime},
        "coefficients": {"a0": c.a0, "a1": c.a1, "a2": c.a2, "a3": c.a3},
        "eta": system.eta,
        "lambda_star": lambda_star,
        "conditions": {
            "denominator_ok": cond.denominator_ok, "nondegenerate": cond.nondegenerate,
            "branches_meet": cond.branches_meet, "not_tangent": cond.not_tangent,
            "middle_eigenvalue_ok": middle_eigenvalue_ok, "degenerate": cond.degenerate,
            "a1_over_a3": cond.a1_over_a3, "meet_ratio": cond.meet_ratio,
        },
        "coverage": {"intervals": [list(iv) for iv in branches.coverage()],
                     "full": branches.full_coverage},
        "counts": {"grid_points": len(branches.grid), "branch_points": len(branches),
                   "normal_curves": len(curves),
                   "normal_points": sum(len(cv.points) for cv in curves)},
        "max_residuals": {
            "g": max((abs(p.g_residual) for p in branches), default=0.0),
            "compatibility": system.compat_residual,
            "eta_relation": system.eta_residual,
            "mid_eigenvalue": max((abs(p.mid_eig - 1.0) for p in branches), default=0.0),
        },
        "min_mid_eig_check": check_min,
        "status": "ok" if ok else "conditions-failed",
    }
    return report, system, branches, curves, classical, ok


def cmd_nonclassical(cfg: RunConfig, args, out) -> int:
    report, _, branches, curves, classical, ok = nonclassical_run(cfg, max(1, args.workers))
    if cfg.out_branches:
        write_text(cfg.out_branches, branches_csv(branches))
    if cfg.out_normals:
        write_text(cfg.out_normals, normals_csv(curves))
    if cfg.out_svg:
        from .plotting import render_svg

        normals = [m for ci in classical for m in ci.normals()]
        render_svg(cfg.out_svg, branches, curves, normals, report["lambda_star"])
    report["files"] = {"branches": cfg.out_branches, "normals": cfg.out_normals,
                       "svg": cfg.out_svg}
    c = report["coefficients"]
    lines = [
        f"a0={c['a0']!r} a1={c['a1']!r} a2={c['a2']!r} a3={c['a3']!r}",
        f"eta={report['eta']!r} lambda*={report['lambda_star']!r}",
        "conditions: " + " ".join(f"{k}={v}" for k, v in report["conditions"].items()
                                  if isinstance(v, bool)),
        f"coverage: {report['coverage']['intervals']} "
        f"({report['counts']['branch_points']} branch points, "
        f"{report['counts']['normal_curves']} normal curves)",
        f"status: {report['status']}",
    ]
    _emit(report, args, lines, out)
    return EXIT_OK if ok else EXIT_CONDITIONS


def cmd_check(cfg: RunConfig, args, out) -> int:
    U = variant_map(LatticeParams(*cfg.lattice))
    try:
        system = build_system(*cfg.roles, U)
    except (Degenerate, NoTwin) as exc:
        data = {"status": "skipped", "reason": f"no twin system: {exc}", "checks": []}
        _emit(data, args, [f"SKIP no twin system: {exc}"], out)
        return EXIT_OK
    except CrossTwinError as exc:
        data = {"status": "failed", "first_failure": "build_system", "reason": str(exc),
                "checks": []}
        _emit(data, args, [f"FAIL build_system: {exc}"], out)
        return EXIT_CHECK
    if getattr(args, "inject_fault", False):
        system = inject_fault(system)
    results = run_invariants(system)
    failed = [r for r in results if not r.passed]
    data = {
        "status": "passed" if not failed else "failed",
        "first_failure": failed[0].name if failed else None,
        "checks": [{"name": r.name, "max_residual": r.residual, "tol": r.tol,
                    "passed": r.passed} for r in results],
    }
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name:34s} max_residual={r.residual:.3e} "
             f"tol={r.tol:.0e}" for r in results]
    lines.append(f"first failing invariant: {failed[0].name}" if failed else "all invariants pass")
    _emit(data, args, lines, out)
    return EXIT_CHECK if failed else EXIT_OK


COMMANDS = {
    "variants": cmd_variants,
    "twins": cmd_twins,
    "classical": cmd_classical,
    "nonclassical": cmd_nonclassical,
    "check": cmd_check,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
    except BadParams as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg, args, out)
    except BadParams as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except CrossTwinError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_NO_SOLUTION


if __name__ == "__main__":
    sys.exit(main())
