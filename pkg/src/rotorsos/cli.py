"""Command-line entry point.

Every command prints a JSON report with sorted keys (or a plain table with
``--table``) and optionally writes it to ``--output``.  Exit codes: 0 on
success, 2 for invalid input, 3 when a solver or eigensolver fails to
converge.  Commands that sample random numbers require ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import bounds, oracle, polysphere, relax, rounding
from .bov import alpha_bov
from .instance import InstanceError, load_instance
from .montecarlo import McConfig
from .phasespace import PhasePoly, angular_momentum, star
from .sdpcore import Infeasible, NotConverged

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3

DEFAULT_MC_SAMPLES = 100_000


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _table(report: dict, prefix: str = "") -> list[str]:
    rows = []
    for key in sorted(report):
        val = report[key]
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            rows.extend(_table(val, name + "."))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for i, item in enumerate(val):
                rows.extend(_table(item, f"{name}[{i}]."))
        else:
            rows.append(f"{name:<40} {val}")
    return rows


def _emit(report: dict, args) -> None:
    report = _jsonable(report)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    if args.table:
        sys.stdout.write("\n".join(_table(report)) + "\n")
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return load_instance(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _solve_reduced(inst, args):
    try:
        return relax.solve_reduced(inst, time_reversal=not args.no_time_reversal, tol=args.tol,
                                   gap_tol=args.gap_tol)
    except NotConverged as exc:
        raise CliError(f"SDP solver did not converge: {exc}", EXIT_NOT_CONVERGED) from exc
    except Infeasible as exc:
        raise CliError(f"SDP reported {exc.kind} infeasibility: {exc}", EXIT_NOT_CONVERGED) from exc


def cmd_solve(args) -> dict:
    inst = _load(args.instance)
    report = {"command": "solve", "instance": inst.to_dict()}
    if args.full:
        try:
            sol, fm = relax.solve_full(inst, tol=args.tol, gap_tol=args.gap_tol)
        except NotConverged as exc:
            raise CliError(f"SDP solver did not converge: {exc}", EXIT_NOT_CONVERGED) from exc
        report.update(formulation="full", bound=sol.primal_value, dual_bound=sol.dual_value,
                      iterations=sol.iterations, residuals=sol.residuals)
        return report
    sol, rm = _solve_reduced(inst, args)
    report.update(
        formulation="reduced",
        bound=rm.objective(inst),
        solver_value=sol.primal_value,
        dual_bound=sol.dual_value,
        iterations=sol.iterations,
        residuals=sol.residuals,
        K=rm.K,
        L=rm.L,
        blocks={f"{v},{w}": b for (v, w), b in sorted(rm.B.items())},
        min_eigenvalue=rm.min_eigenvalue(),
    )
    return report


def cmd_round(args) -> dict:
    inst = _load(args.instance)
    _, rm = _solve_reduced(inst, args)
    rep = rounding.rounded_value(inst, rm, McConfig(args.mc_samples, args.seed), args.kinetic_mode)
    out = {"command": "round", "seed": args.seed, "mc_samples": args.mc_samples}
    out.update(rep.to_dict())
    return out


def cmd_oracle(args) -> dict:
    inst = _load(args.instance)
    try:
        res = oracle.ground_energy(oracle.hamiltonian_k2(inst, args.truncation))
    except (oracle.DimensionOverflow, ValueError) as exc:
        raise CliError(str(exc)) from exc
    except oracle.OracleError as exc:
        raise CliError(str(exc), EXIT_NOT_CONVERGED) from exc
    prod = oracle.product_state_k2(inst, args.truncation, args.restarts, args.seed)
    res.product_energy = prod.value
    out = {"command": "oracle", "seed": args.seed, "restarts": args.restarts}
    out.update(res.to_dict())
    out["product_energy_converged"] = prod.converged
    out["product_energy_note"] = "upper bound from a heuristic optimizer"
    return out


def cmd_ratio(args) -> dict:
    mc = McConfig(args.mc_samples, args.seed)
    report = {"command": "ratio", "seed": args.seed, "mc_samples": args.mc_samples}
    report.update(rounding.alpha(args.k, mc, args.grid_size, args.c_pot))
    if args.C:
        report["prod_ratio"] = [
            dict(zip(("C", "ratio", "a_star"), (C, *bounds.prod_ratio(args.k, C, args.c_pot)))) for C in args.C
        ]
    if args.csv:
        est = alpha_bov(args.k, args.grid_size, args.mc_samples, args.seed, args.c_pot)
        buf = io.StringIO()
        buf.write(f"# k={args.k} samples={args.mc_samples} seed={args.seed} c_pot={args.c_pot!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "g", "std_err"])
        for t, gv, se in zip(est.ts, est.g, est.g_std_err):
            w.writerow([repr(float(t)), repr(float(gv)), repr(float(se))])
        with open(args.csv, "w") as fh:
            fh.write(buf.getvalue())
        report["csv"] = args.csv
    return report


def cmd_verify(args) -> dict:
    if args.what == "algebra":
        reports = polysphere.check_all(args.k, args.degree)
        if args.include_uncorrected:
            reports += [polysphere.check_relation(r, args.k, args.degree) for r in polysphere.UNCORRECTED_RELATIONS]
        return {
            "command": "verify",
            "what": "algebra",
            "k": args.k,
            "degree": args.degree,
            "lines": [r.to_line() for r in reports],
            "all_pass": all(r.holds for r in reports if r.relation_id in polysphere.RELATIONS),
        }
    k = max(args.k, 2)
    L = angular_momentum(k, 1, 2)
    lhs = star(L, L)
    rhs = L * L - PhasePoly.constant(k, Fraction(1, 2))
    return {"command": "verify", "what": "moyal", "k": k, "holds": lhs == rhs,
            "star_minus_square_constant": str((lhs - L * L).constant_term())}


def cmd_certify(args) -> dict:
    out = {"command": "certify", "kind": args.kind}
    if args.kind == "bloch":
        try:
            state = [complex(s) for s in args.state.split(",")]
        except ValueError as exc:
            raise CliError(f"cannot parse --state: {exc}") from exc
        out.update(bounds.bloch_certificate(np.array(state)).to_dict())
    elif args.kind == "heisenberg":
        mom = {"x": args.x, "p": args.p, "x2": args.x2, "p2": args.p2, "re_xp": args.re_xp}
        out.update(bounds.heisenberg_certificate(mom).to_dict())
    else:
        if args.seed is None:
            raise CliError("--seed is required for spherical certificates")
        held, worst_eig, worst_margin = 0, np.inf, np.inf
        for s in range(args.count):
            w = oracle.random_wavefunction_moments(2, args.truncation, args.seed + s)
            cert = bounds.spherical_certificate(2, w.t, w.spherical)
            held += cert.holds
            worst_eig = min(worst_eig, *cert.min_eigenvalues)
            worst_margin = min(worst_margin, w.laplacian - cert.bound)
        out.update(k=2, seed=args.seed, count=args.count, holds=held, fails=args.count - held,
                   min_block_eigenvalue=worst_eig, min_kinetic_margin=worst_margin)
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotorsos", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="also write the JSON report to this path")
    common.add_argument("--table", action="store_true", help="print a key/value table instead of JSON")
    sdp = argparse.ArgumentParser(add_help=False)
    sdp.add_argument("--tol", type=float, default=relax.DEFAULT_TOL, help="residual tolerance")
    sdp.add_argument("--gap-tol", type=float, default=relax.DEFAULT_GAP_TOL, help="duality gap tolerance")
    sdp.add_argument("--no-time-reversal", action="store_true", help="keep K_v free in the reduced SDP")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common, sdp], help="level-1 SDP lower bound")
    p.add_argument("instance")
    p.add_argument("--full", action="store_true", help="solve the unreduced moment matrix")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("round", parents=[common, sdp], help="Gaussian rounding of the reduced SDP")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mc-samples", type=int, default=DEFAULT_MC_SAMPLES)
    p.add_argument("--kinetic-mode", choices=rounding.KINETIC_MODES)
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("oracle", parents=[common], help="exact k = 2 ground energy and product bound")
    p.add_argument("instance")
    p.add_argument("--truncation", type=int, default=16, help="Fourier cutoff M (modes -M..M)")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ratio", parents=[common], help="rounding ratio alpha_k and product ratios")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mc-samples", type=int, default=DEFAULT_MC_SAMPLES)
    p.add_argument("--grid-size", type=int, default=201)
    p.add_argument("--c-pot", type=float, default=2.0)
    p.add_argument("--C", type=float, action="append", help="saturation constant for prod_ratio (repeatable)")
    p.add_argument("--csv", help="write the t,g,std_err curve here")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("verify", parents=[common], help="exact operator identities")
    p.add_argument("what", choices=("algebra", "moyal"))
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--include-uncorrected", action="store_true",
                   help="also report the uncorrected forms of R3 and R6")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", parents=[common], help="uncertainty certificates")
    p.add_argument("kind", choices=("bloch", "heisenberg", "spherical"))
    p.add_argument("--state", default="1,0", help="bloch: comma-separated complex amplitudes")
    for name in ("x", "p"):
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--x2", type=float, default=0.5)
    p.add_argument("--p2", type=float, default=0.5)
    p.add_argument("--re-xp", type=float, default=0.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--truncation", type=int, default=8)
    p.set_defaults(func=cmd_certify)
    return parser


def _validate(args) -> None:
    if getattr(args, "mc_samples", 1) < 1:
        raise CliError("--mc-samples must be positive")
    if getattr(args, "k", 2) < 2:
        raise CliError("--k must be >= 2")
    if getattr(args, "truncation", 1) < 1:
        raise CliError("--truncation must be >= 1")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INVALID
    try:
        _validate(args)
        report = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InstanceError as exc:
        print(f"error: invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(report, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
