"""Command-line front end: ``qgcd {gcd,dist,circuit,verify}``.

Exit codes: 0 success, 1 failed verification, 2 usage/domain error,
3 resource limit, 4 protocol failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

import numpy as np

from . import circuit as circ
from . import qpe
from .numerics import DomainError, ProblemInstance, RangeError
from .statevector import ResourceError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_PROTOCOL = 4


class ProtocolFailure(Exception):
    pass


def _t_arg(value: str):
    if value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"t must be an integer or 'auto', got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgcd", description="Quantum GCD via phase estimation of modular addition.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_xr=True, t=True):
        if need_xr:
            p.add_argument("--x", type=int, required=True)
            p.add_argument("--r", type=int, required=True)
        if t:
            p.add_argument("--t", type=_t_arg, default="auto")
        p.add_argument("--epsilon", type=float, default=qpe.DEFAULT_EPSILON)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="-", help="output path, '-' for stdout")

    p = sub.add_parser("gcd", help="run protocol a or b end to end")
    common(p, t=False)
    p.add_argument("--protocol", choices=["a", "b"], default="a")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--method", choices=list(qpe.METHODS), default="statevector")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("dist", help="write the outcome distribution as CSV or JSON")
    common(p)
    p.add_argument("--method", choices=list(qpe.METHODS), default="exact")
    p.add_argument("--shots", type=int, default=100000)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("circuit", help="emit the circuit text and a resource report")
    common(p)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("verify", help="run the small-instance invariant suite")
    p.add_argument("--quick", action="store_true", help="restrict to r <= 24")
    p.add_argument("--inject-fault", choices=["phase-sign"], default=None, help=argparse.SUPPRESS)
    p.add_argument("--out", default="-")
    return parser


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _resolve_t(args) -> int:
    if args.t == "auto":
        return qpe.choose_t(args.r, args.epsilon)[0]
    return args.t


def _check_xr(args) -> ProblemInstance:
    if args.x < 1 or args.r < 2:
        raise DomainError("need x >= 1 and r >= 2")
    return ProblemInstance(args.x, args.r)


def cmd_gcd(args) -> int:
    inst = _check_xr(args)
    if args.protocol == "a":
        rec = qpe.protocol_a(inst.x, inst.r, args.epsilon, args.reps, args.seed, args.method)
    else:
        rec = qpe.protocol_b(inst.x, inst.r, args.epsilon, args.seed, args.max_iters, args.method)
    if rec.success and (inst.x % rec.claimed_gcd or inst.r % rec.claimed_gcd):
        raise ProtocolFailure(f"claimed gcd {rec.claimed_gcd} does not divide both inputs")
    with _output(args.out) as out:
        if args.format == "json":
            out.write(json.dumps(rec.to_dict(), indent=2) + "\n")
        else:
            out.write(_render_record(rec))
    if not rec.success:
        print(f"protocol {args.protocol} failed for x={inst.x}, r={inst.r} (seed {args.seed})", file=sys.stderr)
        return EXIT_PROTOCOL
    return EXIT_OK


def _render_record(rec: qpe.RunRecord) -> str:
    inst = rec.instance
    lines = [f"x = {inst.x}, r = {inst.r}, protocol {rec.protocol}, seed {rec.seed}"]
    if inst.trivial:
        lines.append("r divides x: no simulation needed")
    elif rec.protocol == "a":
        lines.append(f"t = {rec.t}, repetitions = {rec.reps}, method = {rec.method}")
        for i, (s, f) in enumerate(zip(rec.samples, rec.recoveries)):
            lines.append(f"  rep {i}: m = {s.m_out}, p = {f.p}, s/N = {f.reduced}")
    else:
        for i, step in enumerate(rec.iterations):
            frac = "-" if step.s_over_N is None else str(step.s_over_N)
            lines.append(
                f"  iter {i}: x_i = {step.x_i}, r_i = {step.r_i}, s/N = {frac}, "
                f"candidate = {step.candidate}, draws = {step.draws} {step.note}".rstrip()
            )
    if rec.N_hat is not None:
        lines.append(f"N = {rec.N_hat}")
    lines.append(f"gcd = {rec.claimed_gcd}")
    return "\n".join(lines) + "\n"


def _format_prob(p: float) -> str:
    return f"{p:.12g}"


def cmd_dist(args) -> int:
    inst = _check_xr(args)
    t = _resolve_t(args)
    x = inst.addend or inst.r
    if args.method == "exact":
        probs = qpe.exact_distribution(x, inst.r, t)
    elif args.method == "statevector":
        probs = qpe.empirical_distribution(qpe.run_statevector_qpe(inst.addend, inst.r, t, args.shots, args.seed), t)
    else:
        probs = qpe.empirical_distribution(qpe.run_kitaev_qpe(inst.addend, inst.r, t, args.shots, args.seed), t)
    with _output(args.out) as out:
        if args.format == "json":
            doc = {
                "x": inst.x, "r": inst.r, "t": t, "method": args.method,
                "shots": None if args.method == "exact" else args.shots,
                "seed": args.seed,
                "probability": [float(_format_prob(p)) for p in probs],
            }
            out.write(json.dumps(doc) + "\n")
        else:
            out.write("m,probability\n")
            out.write("".join(f"{m},{_format_prob(p)}\n" for m, p in enumerate(probs)))
    return EXIT_OK


def cmd_circuit(args) -> int:
    inst = _check_xr(args)
    t = _resolve_t(args)
    c = circ.build_qpe_circuit(inst.x, inst.r, t, args.epsilon)
    report = circ.resource_report(c, args.epsilon)
    with _output(args.out) as out:
        if args.format == "json":
            doc = {
                "circuit": circ.emit_text(c).splitlines(),
                "report": {
                    "t": report.t, "L": report.L, "t_this": report.t_this, "t_shor": report.t_shor,
                    "hadamards": report.hadamards, "cphases": report.cphases, "swaps": report.swaps,
                    "measurements": report.measurements, "modadd_macros": report.modadd_macros,
                    "modadd_elementary_estimate": report.modadd_elementary_estimate,
                    "smallest_phase_angle": circ.format_angle(report.smallest_phase),
                },
            }
            out.write(json.dumps(doc, indent=2) + "\n")
        else:
            out.write(circ.emit_text(c))
            out.write("".join(f"# {line}\n" for line in report.lines()))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(quick=args.quick, fault=args.inject_fault)
    width = max(len(name) for name, _, _ in results)
    with _output(args.out) as out:
        for name, ok, detail in results:
            out.write(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}\n")
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {"gcd": cmd_gcd, "dist": cmd_dist, "circuit": cmd_circuit, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except circ.TrivialInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, RangeError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ProtocolFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (DomainError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
