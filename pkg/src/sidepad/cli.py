"""Command-line interface.

Exit codes, uniformly: 0 success (feasible / verified / built / decoded),
1 semantic failure (infeasible, verification failed, off-support event,
no deterministic scheme), 2 malformed input (documents, labels, argument
values), 3 capability refusal (exact-search size caps, search budget).

Every subcommand takes ``--json`` for a machine-readable report in which
all rationals are printed exactly as "numerator/denominator" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .construction import (
    Scheme,
    build_scheme,
    find_deterministic_scheme,
    row_value_multisets_equal,
)
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    InfeasibleError,
    InputError,
    OffSupportError,
    UnverifiedSchemeError,
)
from .feasibility import check_feasible
from .formats import (
    parse_instance,
    parse_scheme,
    serialize_instance,
    serialize_scheme,
)
from .model import Instance, conditional_y_given_x, make_instance
from .runtime import RandomSource, decode, encode, simulate
from .verification import (
    CheckResult,
    feasibility_oracle,
    necessity_audit,
    verify_scheme,
)


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(_jsonable(v) for v in value)
    return value


def _emit_json(payload: dict) -> None:
    print(json.dumps(_jsonable(payload), indent=2))


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def _load_scheme(path: str) -> Scheme:
    return parse_scheme(_read(path))


def _fmt_witness(witness: dict) -> str:
    parts = []
    for key, value in witness.items():
        if isinstance(value, Fraction):
            value = str(value)
        elif isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        parts.append(f"{key}={value}")
    return " ".join(parts)


def _check_line(name: str, result: CheckResult) -> str:
    if result.ok:
        return f"{name}: pass"
    return f"{name}: FAIL ({_fmt_witness(result.witness or {})})"


def _scheme_payload(scheme: Scheme) -> dict:
    return {
        "n": scheme.n,
        "m": scheme.m,
        "p": scheme.p,
        "x_labels": list(scheme.x_labels),
        "y_labels": list(scheme.y_labels),
        "z_labels": list(scheme.z_labels),
        "px": list(scheme.px),
        "weights": list(scheme.weights),
        "assignments": [
            [None if col is None else col + 1 for col in sigma]
            for sigma in scheme.assignments
        ],
    }


def _label_index(labels: tuple[str, ...], label: str, kind: str) -> int:
    try:
        return labels.index(label)
    except ValueError:
        known = " ".join(labels)
        raise InputError(f"unknown {kind} label {label!r} (have: {known})") from None


def _infeasible_detail(inst: Instance, exc: InfeasibleError) -> str:
    names = ", ".join(inst.y_labels[j] for j in exc.violations)
    return f"infeasible: column sum exceeds 1 at {names}"


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    report = check_feasible(inst)
    sc = report.shannon_case
    if args.json:
        _emit_json(
            {
                "kind": "feasibility",
                "feasible": report.feasible,
                "column_sums": list(report.column_sums),
                "violations": [inst.y_labels[j] for j in report.violations],
                "shannon": {
                    "independent": sc.independent,
                    "y_uniform": sc.y_uniform,
                    "applies": sc.applies,
                    "n": sc.n,
                    "m": sc.m,
                    "feasible_by_count": sc.feasible_by_count,
                },
            }
        )
    else:
        sums = " ".join(
            f"{label}={value}"
            for label, value in zip(inst.y_labels, report.column_sums)
        )
        print(f"column sums: {sums}")
        if report.violations:
            bad = " ".join(inst.y_labels[j] for j in report.violations)
            print(f"violated columns: {bad}")
        if sc.applies:
            verdict = "n <= m" if sc.feasible_by_count else "n > m"
            print(
                f"independent uniform case: n={sc.n} states, m={sc.m} values ({verdict})"
            )
        print(f"feasible: {'yes' if report.feasible else 'no'}")
    return 0 if report.feasible else 1


def cmd_build(args) -> int:
    inst = _load_instance(args.instance)
    try:
        scheme = build_scheme(inst)
    except InfeasibleError as exc:
        print(_infeasible_detail(inst, exc), file=sys.stderr)
        return 1
    document = serialize_scheme(scheme)
    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
    if args.json:
        _emit_json({"kind": "scheme", **_scheme_payload(scheme)})
    elif args.output:
        print(f"wrote scheme ({scheme.p} signals) to {args.output}")
    else:
        print(document, end="")
    return 0


def cmd_verify(args) -> int:
    scheme = _load_scheme(args.scheme)
    inst = _load_instance(args.against)
    report = verify_scheme(scheme, inst)
    audit = necessity_audit(scheme) if report.all_ok else None
    ok = report.all_ok and (audit is None or audit.ok)
    if args.json:
        payload = {
            "kind": "verification",
            "verified": ok,
            "consistency": {
                "ok": report.consistency.ok,
                "witness": report.consistency.witness,
            },
            "informativeness": {
                "ok": report.informativeness.ok,
                "witness": report.informativeness.witness,
            },
            "secrecy": {
                "ok": report.secrecy.ok,
                "witness": report.secrecy.witness,
            },
            "q_z": list(report.q_z),
            "q_xz": [list(row) for row in report.q_xz],
            "q_yz": [list(row) for row in report.q_yz],
            "q_xy": [list(row) for row in report.q_xy],
            "necessity_audit": None
            if audit is None
            else {
                "ok": audit.ok,
                "triple_bound_ok": audit.triple_bound_ok,
                "disjoint_ok": audit.disjoint_ok,
                "column_mass_ok": audit.column_mass_ok,
                "column_mass": list(audit.column_mass),
                "witness": audit.witness,
            },
        }
        _emit_json(payload)
    else:
        print(_check_line("consistency", report.consistency))
        print(_check_line("informativeness", report.informativeness))
        print(_check_line("secrecy", report.secrecy))
        if audit is None:
            print("necessity audit: skipped")
        elif audit.ok:
            masses = [v for v in audit.column_mass if v is not None]
            top = max(masses) if masses else Fraction(0)
            print(f"necessity audit: pass (max column mass {top})")
        else:
            print(f"necessity audit: FAIL ({_fmt_witness(audit.witness or {})})")
        print(f"verified: {'yes' if ok else 'no'}")
    return 0 if ok else 1


def cmd_encode(args) -> int:
    scheme = _load_scheme(args.scheme)
    x = _label_index(scheme.x_labels, args.x, "x")
    y = _label_index(scheme.y_labels, args.y, "y")
    z = encode(scheme, x, y, RandomSource(args.seed))
    if args.json:
        _emit_json({"kind": "encode", "z": scheme.z_labels[z]})
    else:
        print(scheme.z_labels[z])
    return 0


def cmd_decode(args) -> int:
    scheme = _load_scheme(args.scheme)
    y = _label_index(scheme.y_labels, args.y, "y")
    z = _label_index(scheme.z_labels, args.z, "z")
    x = decode(scheme, y, z)
    if args.json:
        _emit_json({"kind": "decode", "x": scheme.x_labels[x]})
    else:
        print(scheme.x_labels[x])
    return 0


def cmd_simulate(args) -> int:
    scheme = _load_scheme(args.scheme)
    inst = _load_instance(args.against)
    report = simulate(
        scheme,
        inst,
        args.samples,
        args.seed,
        shards=args.shards,
        min_count=args.min_count,
        allow_unverified=args.allow_unverified,
    )
    if args.json:
        _emit_json(
            {
                "kind": "simulation",
                "samples": report.samples,
                "decode_success": report.decode_success,
                "empirical_qz": list(report.empirical_qz),
                "tv_secrecy": list(report.tv_secrecy),
                "max_tv": report.max_tv,
                "min_count": report.min_count,
                "shards": report.shards,
                "seed": report.seed,
            }
        )
    else:
        print(f"samples: {report.samples}")
        print(f"decode success: {report.decode_success:.6f}")
        qz = " ".join(
            f"{label}={value:.6f}"
            for label, value in zip(scheme.z_labels, report.empirical_qz)
        )
        print(f"empirical Q_Z: {qz}")
        tv = " ".join(
            f"{label}={'n/a' if value is None else format(value, '.6f')}"
            for label, value in zip(scheme.z_labels, report.tv_secrecy)
        )
        print(f"TV from P_X by signal (min count {report.min_count}): {tv}")
        print(f"max TV: {report.max_tv:.6f}")
    return 0


def cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    report = feasibility_oracle(inst)
    if args.json:
        _emit_json(
            {
                "kind": "oracle",
                "feasible": report.feasible,
                "support": None
                if report.support is None
                else [
                    {"weight": weight, "perm": [j + 1 for j in perm]}
                    for weight, perm in report.support
                ],
            }
        )
    elif report.feasible:
        print(f"oracle: feasible (mixture of {len(report.support)} permutations)")
    else:
        print("oracle: infeasible")
    return 0 if report.feasible else 1


def cmd_shannon(args) -> int:
    if args.n < 1 or args.m < 1:
        raise InputError("state and value counts must be >= 1")
    mass = Fraction(1, args.n * args.m)
    inst = make_instance(
        [f"x{i+1}" for i in range(args.n)],
        [f"y{j+1}" for j in range(args.m)],
        [[mass] * args.m for _ in range(args.n)],
    )
    document = serialize_instance(inst)
    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
    if args.json:
        _emit_json(
            {
                "kind": "instance",
                "n": inst.n,
                "m": inst.m,
                "x_labels": list(inst.x_labels),
                "y_labels": list(inst.y_labels),
                "p_xy": [list(row) for row in inst.p_xy],
            }
        )
    elif args.output:
        print(f"wrote instance to {args.output}")
    else:
        print(document, end="")
    return 0


def cmd_deterministic(args) -> int:
    inst = _load_instance(args.instance)
    try:
        outcome = find_deterministic_scheme(inst, limit=args.limit)
    except InfeasibleError as exc:
        print(_infeasible_detail(inst, exc), file=sys.stderr)
        return 1
    condition = row_value_multisets_equal(conditional_y_given_x(inst))
    if args.json:
        _emit_json(
            {
                "kind": "deterministic-search",
                "status": outcome.status,
                "nodes": outcome.nodes,
                "row_multisets_equal": condition,
                "scheme": None
                if outcome.scheme is None
                else _scheme_payload(outcome.scheme),
            }
        )
        return {"found": 0, "none_found": 1, "budget_exhausted": 3}[outcome.status]
    if outcome.status == "found":
        document = serialize_scheme(outcome.scheme)
        if args.output:
            Path(args.output).write_text(document, encoding="utf-8")
            print(f"row value multisets equal: {'yes' if condition else 'no'}")
            print(f"wrote deterministic scheme to {args.output}")
        else:
            # Bare document on stdout so the result pipes into verify.
            print(document, end="")
        return 0
    print(f"row value multisets equal: {'yes' if condition else 'no'}")
    if outcome.status == "none_found":
        print(f"no deterministic scheme exists (searched {outcome.nodes} nodes)")
        return 1
    print(f"search budget exhausted after {outcome.nodes} nodes (inconclusive)")
    return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sidepad",
        description=(
            "Decide, build, verify, and exercise schemes that reveal a "
            "state through a public signal to holders of side information "
            "while leaking nothing to everyone else."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p = sub.add_parser("check", help="decide feasibility from the column sums")
    p.add_argument("instance", help="INSTANCE v1 file")
    add_json(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("build", help="construct a scheme for a feasible instance")
    p.add_argument("instance", help="INSTANCE v1 file")
    p.add_argument("-o", "--output", help="write the SCHEME v1 document here")
    add_json(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check a scheme against an instance")
    p.add_argument("scheme", help="SCHEME v1 file")
    p.add_argument("--against", required=True, help="INSTANCE v1 file")
    add_json(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("encode", help="draw the public signal for one event")
    p.add_argument("scheme", help="SCHEME v1 file")
    p.add_argument("--x", required=True, help="state label")
    p.add_argument("--y", required=True, help="side-information label")
    p.add_argument("--seed", required=True, type=int, help="RNG seed")
    add_json(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover the state from (y, z)")
    p.add_argument("scheme", help="SCHEME v1 file")
    p.add_argument("--y", required=True, help="side-information label")
    p.add_argument("--z", required=True, help="signal label")
    add_json(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo the whole loop")
    p.add_argument("scheme", help="SCHEME v1 file")
    p.add_argument("--against", required=True, help="INSTANCE v1 file")
    p.add_argument("-n", "--samples", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument(
        "--min-count",
        type=int,
        default=1000,
        help="signals observed fewer times get no TV estimate",
    )
    p.add_argument("--allow-unverified", action="store_true")
    add_json(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "oracle", help="brute-force feasibility over all m! permutations"
    )
    p.add_argument("instance", help="INSTANCE v1 file")
    add_json(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser(
        "shannon", help="emit the uniform independent instance (n states, m values)"
    )
    p.add_argument("-n", required=True, type=int, dest="n")
    p.add_argument("-m", required=True, type=int, dest="m")
    p.add_argument("-o", "--output")
    add_json(p)
    p.set_defaults(func=cmd_shannon)

    p = sub.add_parser(
        "deterministic", help="search for a randomness-free encoder"
    )
    p.add_argument("instance", help="INSTANCE v1 file")
    p.add_argument("--limit", type=int, default=1_000_000, help="node budget")
    p.add_argument("-o", "--output", help="write the scheme here if found")
    add_json(p)
    p.set_defaults(func=cmd_deterministic)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except (InputError, DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleError, OffSupportError, UnverifiedSchemeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
