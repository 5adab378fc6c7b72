"""Command-line entry point: ``necroswap <subcommand> [flags]``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error,
3 search exhausted (a partial report is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from importlib import resources

import numpy as np

from . import claims as claims_mod
from .complexity import (
    GateSet,
    SearchConfig,
    inequality_audit,
    prep_complexity,
    relative_complexity,
    swap_complexity,
    triangle_audit,
)
from .duality import (
    DistinguisherSpec,
    build_swapper,
    conjugate_pair,
    distinguish_bias,
    hadamard_spec,
    optimal_theta,
    swap_overlaps,
)
from .statevec import CircuitError, load_circuit, load_state
from .tightness import (
    EtaFamily,
    TightnessParams,
    build_instance,
    haar_overlap_montecarlo,
    optimize_restricted_bias,
    verify_instance,
)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3
BIAS_TOL = 1e-10


class UsageError(Exception):
    pass


def _c(z):
    return [float(z.real), float(z.imag)]


def _pair(text):
    """``left:right`` where each side is shorthand (0,1,+,-) or a JSON file."""
    if ":" not in text:
        raise UsageError(f"pair {text!r} must look like A:B")
    left, right = text.split(":", 1)
    return load_state(left), load_state(right)


def _states(text):
    return [load_state(t) for t in text.split(",")]


def _gates(args, width):
    try:
        return GateSet.load(args.gates, width)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"bad gate set {args.gates!r}: {exc}") from exc


def _config(args, phase=None):
    return SearchConfig(epsilon=args.epsilon, max_depth=args.max_depth,
                        n_ancillas=args.ancillas, strategy=args.strategy,
                        phase=phase or args.phase or "symmetric",
                        threads=args.threads, max_witnesses=args.max_witnesses)


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".necroswap-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _to_csv(report):
    rows = report.get("rows")
    buf = io.StringIO()
    if rows:
        keys = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v
                        for k, v in r.items()})
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in report.items():
            w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
    return buf.getvalue()


def emit(report, args):
    text = (_to_csv(report) if args.format == "csv"
            else json.dumps(report, indent=2, sort_keys=True) + "\n")
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _report(name, /, **fields):
    return {"schema": f"necroswap.{name}", "schema_version": SCHEMA_VERSION, **fields}


# Subcommands -------------------------------------------------------------

def cmd_distinguish(args):
    U = load_circuit(args.swap_unitary)
    x, y = _pair(args.pair)
    ov = swap_overlaps(U, x, y)
    theta = optimal_theta(ov) if args.theta is None else args.theta
    psi, phi = conjugate_pair(x, y)
    rep = distinguish_bias(hadamard_spec(U, theta), psi, phi)
    predicted = (ov.bias if args.theta is None
                 else ((ov.a + ov.b) * complex(math.cos(theta), math.sin(theta))).real / 2)
    passed = abs(rep.bias - predicted) <= BIAS_TOL
    out = _report("distinguish", a=_c(ov.a), b=_c(ov.b), theta=theta,
                  bias=rep.bias, p_psi=rep.p_psi, p_phi=rep.p_phi,
                  predicted_bias=predicted, tolerance=BIAS_TOL, **{"pass": passed})
    return out, EXIT_OK if passed else EXIT_FAIL


def cmd_swap_from_distinguisher(args):
    A = load_circuit(args.distinguisher)
    x, y = _pair(args.pair)
    spec = DistinguisherSpec(A, args.flag_qubit, args.accept_on, args.data_offset)
    psi, phi = conjugate_pair(x, y)
    rep = distinguish_bias(spec, psi, phi)
    swapper = build_swapper(spec)
    ov = swap_overlaps(swapper, x, y)
    signed = (ov.a + ov.b).real / 2
    passed = abs(signed - rep.bias) <= BIAS_TOL and abs(ov.bias - abs(rep.bias)) <= BIAS_TOL
    if args.emit_circuit:
        _atomic_write(args.emit_circuit, swapper.to_json() + "\n")
    out = _report("swap-from-distinguisher", a=_c(ov.a), b=_c(ov.b), bias=ov.bias,
                  p_psi=rep.p_psi, p_phi=rep.p_phi, distinguisher_bias=rep.bias,
                  swapper=swapper.to_dict(), tolerance=BIAS_TOL, **{"pass": passed})
    return out, EXIT_OK if passed else EXIT_FAIL


def cmd_search(args):
    phase = args.phase
    if args.zero_error:
        args.epsilon = 0.0
        phase = phase or "exact"
    if args.objective == "prep":
        if not args.target:
            raise UsageError("--objective prep needs --target")
        target = load_state(args.target)
        n = target.n_qubits
        cfg = _config(args, phase)
        res = prep_complexity(target, cfg, _gates(args, n + args.ancillas))
    else:
        if not args.pair:
            raise UsageError(f"--objective {args.objective} needs --pair")
        x, y = _pair(args.pair)
        n = x.n_qubits
        cfg = _config(args, phase)
        gs = _gates(args, n + args.ancillas)
        search = relative_complexity if args.objective == "relative" else swap_complexity
        res = search(x, y, cfg, gs)
    if args.emit_witness and res.witness is not None:
        _atomic_write(args.emit_witness, res.witness.to_json() + "\n")
    out = _report("search", objective=args.objective, epsilon=cfg.epsilon,
                  phase=cfg.phase, strategy=cfg.strategy, gate_set=args.gates,
                  **res.to_dict(all_witnesses=args.all_witnesses))
    if args.expect_size is not None:
        out["expected_size"] = args.expect_size
        out["pass"] = res.size == args.expect_size
    if not res.found:
        return out, EXIT_EXHAUSTED
    return out, EXIT_OK if out.get("pass", True) else EXIT_FAIL


def _tightness_row(a, b, etas, optimize, grid_steps):
    inst = build_instance(TightnessParams(a, b), etas)
    ov = verify_instance(inst)
    psi, phi = conjugate_pair(inst.x, inst.y)
    bias = distinguish_bias(hadamard_spec(inst.U, optimal_theta(ov)), psi, phi).bias
    tol = 1e-10 + inst.residual_bound * (etas.mode == "haar")
    row = {"a": a, "b": b, "c": inst.params.c, "a_measured": _c(ov.a),
           "b_measured": _c(ov.b), "bias": bias, "residual_bound": inst.residual_bound,
           "max_eta_overlap": etas.max_overlap()}
    ok = abs(ov.a - a) <= tol and abs(ov.b - b) <= tol and abs(bias - (a + b) / 2) <= tol
    if optimize:
        opt = optimize_restricted_bias(inst, grid_steps)
        row.update(restricted_max=opt.max_value,
                   argmax_beta=list(opt.argmax.beta),
                   argmax_theta=list(opt.argmax.theta))
        ok &= abs(opt.max_value - (a + b)) <= 1e-6 and opt.max_value <= a + b + 1e-9
    row["pass"] = bool(ok)
    return row


def cmd_tightness(args):
    etas = (EtaFamily.basis(max(3, args.inner_qubits)) if args.inner_mode == "basis"
            else EtaFamily.haar(args.inner_qubits, args.seed))
    if args.grid:
        vals = np.linspace(0.0, 1.0, args.grid)
        pairs = [(float(a), float(b)) for a in vals for b in vals if b <= a]
    else:
        if args.a is None or args.b is None:
            raise UsageError("tightness needs --a and --b, or --grid")
        pairs = [(args.a, args.b)]
    try:
        rows = [_tightness_row(a, b, etas, args.optimize, args.phase_steps) for a, b in pairs]
    except CircuitError as exc:
        raise UsageError(str(exc)) from exc
    passed = all(r["pass"] for r in rows)
    out = _report("tightness", inner_qubits=etas.inner_qubits, inner_mode=etas.mode,
                  seed=args.seed, rows=rows, **{"pass": passed})
    return out, EXIT_OK if passed else EXIT_FAIL


def cmd_haar(args):
    try:
        mc = haar_overlap_montecarlo(args.n, args.eps, args.samples, args.seed)
    except CircuitError as exc:
        raise UsageError(str(exc)) from exc
    passed = mc.sigmas <= 3
    out = _report("haar", n=args.n, eps=args.eps, samples=args.samples, seed=args.seed,
                  fraction=mc.fraction, stderr=mc.stderr, expected=mc.expected,
                  sigmas=mc.sigmas, **{"pass": passed})
    return out, EXIT_OK if passed else EXIT_FAIL


def cmd_audit(args):
    if args.kind == "inequality":
        if not args.pair:
            raise UsageError("inequality audit needs --pair")
        x, y = _pair(args.pair)
        res = inequality_audit(x, y, _config(args), _gates(args, x.n_qubits + args.ancillas))
        body = res.to_dict()
        passed = res.complete and res.left_holds and res.right_holds
        code = EXIT_OK if passed else (EXIT_EXHAUSTED if not res.complete else EXIT_FAIL)
    else:
        if not args.states:
            raise UsageError("triangle audit needs --states A,B,C")
        states = _states(args.states)
        res = triangle_audit(states, args.which, _config(args),
                             _gates(args, states[0].n_qubits + args.ancillas))
        body = res.to_dict()
        # a failing triangle is a finding, not an error
        passed = res.complete
        code = EXIT_OK if passed else EXIT_EXHAUSTED
    out = _report("audit", kind=args.kind, result=body, **{"pass": bool(passed)})
    return out, code


def cmd_reproduce_all(args):
    only = None
    if args.only:
        only = [c for part in args.only for c in part.split(",") if c]
    try:
        reports = claims_mod.reproduce_all(args.seed, only, args.negative_control,
                                           args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for r in reports:
        print(f"[{'PASS' if r.passed else 'FAIL'}] #{r.criterion} {r.claim_id}",
              file=sys.stderr)
    passed = all(r.passed for r in reports)
    rows = [r.to_dict() for r in reports]
    out = _report("reproduce-all", seed=args.seed, negative_control=args.negative_control,
                  rows=rows, **{"pass": passed})
    return out, EXIT_OK if passed else EXIT_FAIL


# Parser ------------------------------------------------------------------

def _common(defaults):
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--threads", type=int, default=d(os.cpu_count() or 1))
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--out", default=d(None), help="output file (default stdout)")
    return p


def _search_flags(p):
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--gates", default="default",
                   help="default | hxcnot | clifford | path to a JSON gate set")
    p.add_argument("--ancillas", type=int, default=0)
    p.add_argument("--strategy", choices=("forward-bfs", "meet-in-the-middle"),
                   default="forward-bfs")
    p.add_argument("--phase", choices=("symmetric", "exact"), default=None)
    p.add_argument("--max-witnesses", type=int, default=256)


def build_parser():
    parser = argparse.ArgumentParser(prog="necroswap", parents=[_common(True)],
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("distinguish", parents=[common],
                       help="controlled-U interferometer bias for a swap unitary")
    p.add_argument("--swap-unitary", required=True, help="circuit JSON")
    p.add_argument("--pair", required=True, help="x:y states")
    p.add_argument("--theta", type=float, default=None, help="default: optimal")
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("swap-from-distinguisher", parents=[common],
                       help="build A^dag Z A and report its swap overlaps")
    p.add_argument("--distinguisher", required=True, help="circuit JSON")
    p.add_argument("--pair", required=True, help="x:y states")
    p.add_argument("--flag-qubit", type=int, default=0)
    p.add_argument("--accept-on", type=int, choices=(0, 1), default=0)
    p.add_argument("--data-offset", type=int, default=0,
                   help="leading work qubits of A prepared in |0>")
    p.add_argument("--emit-circuit", default=None)
    p.set_defaults(func=cmd_swap_from_distinguisher)

    p = sub.add_parser("search", parents=[common], help="minimal circuit search")
    p.add_argument("--objective", choices=("relative", "swap", "prep"), required=True)
    p.add_argument("--pair", help="x:y states")
    p.add_argument("--target", help="state for --objective prep")
    p.add_argument("--zero-error", action="store_true",
                   help="epsilon 0 and, unless --phase is given, exact phase")
    p.add_argument("--emit-witness", default=None)
    p.add_argument("--all-witnesses", action="store_true")
    p.add_argument("--expect-size", type=int, default=None)
    _search_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("tightness", parents=[common], help="eight-branch instance checks")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--inner-qubits", type=int, default=4)
    p.add_argument("--inner-mode", choices=("haar", "basis"), default="haar")
    p.add_argument("--grid", type=int, default=0, help="N for an N x N (a, b) grid")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--phase-steps", type=int, default=16)
    p.set_defaults(func=cmd_tightness)

    p = sub.add_parser("haar", parents=[common], help="Haar overlap tail Monte Carlo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("audit", parents=[common], help="inequality or triangle audit")
    p.add_argument("--kind", choices=("inequality", "triangle"), default="inequality")
    p.add_argument("--pair")
    p.add_argument("--states", help="A,B,C")
    p.add_argument("--which", choices=("relative", "swap"), default="swap")
    _search_flags(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("reproduce-all", parents=[common], help="run every claim")
    p.add_argument("--only", action="append", default=[],
                   help=f"claim id(s); one of {', '.join(claims_mod.CLAIMS)}")
    p.add_argument("--negative-control", choices=claims_mod.NEGATIVE_CONTROLS,
                   default=None)
    p.set_defaults(func=cmd_reproduce_all)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        report, code = args.func(args)
    except (UsageError, CircuitError, OSError, json.JSONDecodeError) as exc:
        print(f"necroswap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(report, args)
    return code


def schema_path(kind):
    return resources.files("necroswap") / "schemas" / f"{kind}.v{SCHEMA_VERSION}.json"


if __name__ == "__main__":
    sys.exit(main())
