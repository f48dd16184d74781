"""Command line front end.

Exit codes: 0 verified, 1 invariant violation or refutation, 2 fuel
exhausted, 3 usage / configuration / I/O error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import instances
from .geometry import GeometryError, rat, rat_str
from .represented import (
    FuelExhausted,
    IntervalSeq,
    NatNeg,
    NegSet,
    real_of_rat,
    seq_from_records,
    stream_record,
)
from .vct0 import STRATEGIES, EliminationResult, Status, check_elimination, eliminate
from .vitalize import vitalize

EXIT_OK, EXIT_VIOLATION, EXIT_FUEL, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_count(text: str) -> int:
    """Accept 1000, 10^6, 1e6."""
    t = text.strip()
    try:
        if "^" in t:
            base, _, exp = t.partition("^")
            value = int(base) ** int(exp)
        elif re.fullmatch(r"\d+[eE]\d+", t):
            mant, _, exp = t.lower().partition("e")
            value = int(mant) * 10 ** int(exp)
        else:
            value = int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def parse_nat_set(text: str) -> NatNeg:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise UsageError(f"expected a finite set like {{5}} or {{1,4}}, got {text!r}")
    inner = body[1:-1].strip()
    try:
        members = [int(p) for p in inner.split(",")] if inner else []
    except ValueError:
        raise UsageError(f"malformed set {text!r}") from None
    if not members or any(m < 0 for m in members):
        raise UsageError("A must be a nonempty set of naturals")
    return NatNeg.from_members(members)


_GADGET = re.compile(r'^gadget:\{\s*A\s*:\s*"(?P<A>\{[^}]*\})"\s*,\s*inner\s*:\s*(?P<inner>.+)\}$')


def resolve(spec: str):
    """Instance spec -> IntervalSeq or NegSet."""
    spec = spec.strip()
    m = _GADGET.match(spec)
    if m:
        from .reductions import cn_vct2_K

        return cn_vct2_K(parse_nat_set(m.group("A")), as_seq(resolve(m.group("inner"))))
    name, _, param = spec.partition(":")
    if name == "full_cover":
        return instances.full_cover()
    if name == "dyadic_cover":
        return instances.dyadic_cover()
    if name == "fat_cantor":
        return instances.fat_cantor()
    if name == "empty":
        return instances.empty()
    if name == "rationals_cover":
        if not param:
            raise UsageError("rationals_cover needs a parameter, e.g. rationals_cover:1/4")
        return instances.rationals_cover(rat(param))
    if name == "act_demo":
        try:
            return instances.act_demo(int(param or "1"))
        except ValueError:
            raise UsageError(f"act_demo needs an integer k, got {param!r}") from None
    if name == "file":
        path = Path(param)
        with path.open() as fh:
            records = [json.loads(line) for line in fh if line.strip()]
        return seq_from_records(records, name=f"file:{path}")
    raise UsageError(f"unknown instance {spec!r}")


def as_seq(obj) -> IntervalSeq:
    return obj.complement if isinstance(obj, NegSet) else obj


def as_negset(obj, ambient: str = "unit") -> NegSet:
    return obj if isinstance(obj, NegSet) else NegSet(ambient, obj)


def parse_oracle(text: str):
    try:
        return real_of_rat(rat(text))
    except GeometryError:
        pass
    path = Path(text)
    if not path.exists():
        raise UsageError(f"oracle answer is neither a rational nor a file: {text!r}")
    data = json.loads(path.read_text())
    return real_of_rat(rat(data["x"] if isinstance(data, dict) else data))


def write_output(args, payload: Any, text_lines: Optional[list[str]] = None) -> None:
    if args.format == "text" and text_lines is not None:
        out = "\n".join(text_lines) + "\n"
    else:
        out = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def write_jsonl(args, seq: IntervalSeq, prefix: int) -> None:
    lines = [json.dumps(stream_record(n, iv, origin), ensure_ascii=False) for n, iv, origin in seq.entries(prefix)]
    out = "".join(line + "\n" for line in lines)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _approx(q: Fraction) -> str:
    return f"~{float(q):.6g}"


def cmd_eliminate(args) -> int:
    seq = as_seq(resolve(args.instance))
    result = eliminate(seq, args.stages, args.fuel, args.strategy)
    report = check_elimination(result, seq)
    lines = [f"status: {result.status.value}"]
    for st in result.stages:
        lines.append(
            f"stage {st.index}: chose {len(st.chosen)}, residual {rat_str(st.residual_measure)} "
            f"({_approx(st.residual_measure)}, approximate), closed={st.closed}, via {st.strategy}"
        )
    lines.append(f"checks: {'ok' if report['ok'] else 'VIOLATIONS ' + json.dumps(report['violations'])}")
    write_output(args, {"result": result.to_json(), "check": report}, lines)
    if not report["ok"]:
        return EXIT_VIOLATION
    if result.status is Status.FUEL_EXHAUSTED:
        return EXIT_FUEL
    return EXIT_OK


def cmd_verify(args) -> int:
    data = json.loads(Path(args.result).read_text())
    result = EliminationResult.from_json(data.get("result", data))
    seq = as_seq(resolve(args.instance))
    report = check_elimination(result, seq)
    write_output(args, report, [f"checks: {'ok' if report['ok'] else 'VIOLATIONS'}"] + [json.dumps(v) for v in report["violations"]])
    return EXIT_OK if report["ok"] else EXIT_VIOLATION


def cmd_emit(args) -> int:
    write_jsonl(args, as_seq(resolve(args.instance)), args.prefix)
    return EXIT_OK


def cmd_vitalize(args) -> int:
    write_jsonl(args, vitalize(as_seq(resolve(args.instance))), args.prefix)
    return EXIT_OK


def cmd_instances(args) -> int:
    write_output(args, instances.GENERATORS, [f"{k:32s} {v}" for k, v in instances.GENERATORS.items()])
    return EXIT_OK


def _reduce_input(w, args):
    from . import reductions as R

    if w.name == "cn×vct2→vct2":
        if not args.A:
            raise UsageError("cn×vct2→vct2 needs --A")
        return parse_nat_set(args.A), as_seq(resolve(args.instance))
    if w.name == "star→act":
        return args.k, as_negset(resolve(args.instance))
    if w.name == "pc01→vct1":
        return as_negset(resolve(args.instance))
    return as_seq(resolve(args.instance))


def _structural(w, x, prefix: int) -> list[dict]:
    from . import reductions as R

    if w.name == "pc01→vct1":
        return R.check_pc01_to_vct1(x, prefix)
    if w.name == "vct2→pcr":
        return R.check_vct2_to_pcr(x, prefix)
    if w.name == "cn×vct2→vct2":
        return R.check_gadget(w.K(x), prefix)
    if w.name == "star→act":
        return R.check_act_instance(w.K(x), prefix, x[0])
    if w.name == "act→star":
        i, j, k = R.find_overlap(x, 10**6)
        if not R.overlap_measure(x.at(i), x.at(j)) > Fraction(1, 2**k):
            return [{"check": "overlap", "i": i, "j": j, "k": k}]
    return []


def cmd_reduce(args) -> int:
    from . import reductions as R

    try:
        w = R.witness(args.witness)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    x = _reduce_input(w, args)
    z = parse_oracle(args.oracle)
    report = R.verify_reduction(w, x, z, args.fuel)
    try:
        violations = _structural(w, x, args.prefix)
    except FuelExhausted as exc:
        violations = [{"check": "fuel", "error": str(exc)}]
    report["structural"] = {"prefix": args.prefix, "violations": violations}
    ok = not report["refuted"] and not violations
    report["ok"] = ok
    lines = [
        f"witness: {w.name}",
        f"oracle check: {report['oracle_check']['verdict']}",
        f"H(z): {json.dumps(report['H'], ensure_ascii=False)}",
        f"solution check: {(report['solution_check'] or {}).get('verdict', 'n/a')}",
        f"structural violations: {len(violations)}",
        f"result: {'not refuted' if ok else 'REFUTED / VIOLATION'}",
    ]
    write_output(args, report, lines)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vitali", description="Vitali covering constructions over exact rationals")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("--instance", required=True, help="generator spec, e.g. full_cover or rationals_cover:1/4")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("eliminate", help="run the elimination algorithm and check it")
    common(p)
    p.add_argument("--stages", type=parse_count, default=8)
    p.add_argument("--fuel", type=parse_count, default=10**5)
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("verify", help="re-check a saved elimination result")
    p.add_argument("result", help="JSON written by `eliminate`")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit", help="write a stream prefix as JSONL")
    common(p)
    p.add_argument("--prefix", type=parse_count, default=100)
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("vitalize", help="write a prefix of the vitalized stream as JSONL")
    common(p)
    p.add_argument("--prefix", type=parse_count, default=100)
    p.set_defaults(func=cmd_vitalize)

    p = sub.add_parser("instances", help="list instance generators")
    common(p, instance=False)
    p.set_defaults(func=cmd_instances)

    p = sub.add_parser("reduce", help="verify a reduction witness against an injected oracle answer")
    p.add_argument("witness")
    common(p)
    p.add_argument("--oracle", required=True, help="rational point p/q or a JSON file {\"x\": \"p/q\"}")
    p.add_argument("--A", help="finite set A for C_N, e.g. {5}")
    p.add_argument("--k", type=parse_count, default=1, help="measure exponent for star→act")
    p.add_argument("--fuel", type=parse_count, default=10**4)
    p.add_argument("--prefix", type=parse_count, default=1000, help="prefix for structural checks")
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, GeometryError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"vitali: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
