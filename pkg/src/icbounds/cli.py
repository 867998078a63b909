"""Command-line interface with machine-readable output.

Subcommands: ``bound``, ``classify``, ``prbox decompose|bias|violation|maxbias``,
``families``, ``oracle-check``.  Exit codes: 0 success, 2 argument errors,
3 computation refusals (exhaustive search too large, census mismatch),
1 oracle-check deviation beyond tolerance.  All numeric output carries nine
decimal places; configuration comes from flags only, so invocations are
reproducible from regression logs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .boolfn import (
    Disjointness,
    Equality,
    Index,
    InnerProduct,
    InputDistribution,
    KIntersect,
    build_family,
    load_truth_table,
)
from .classify import census_table, hierarchy_check
from .errors import (
    ArgumentError,
    CensusMismatchError,
    ExhaustiveSearchRefusal,
    HierarchyViolationError,
    IcboundsError,
)
from .icbound import (
    Asymmetric,
    Deterministic,
    Ordering,
    Symmetric,
    compute_bound,
    make_ordering,
    oracle_check,
)
from .infocalc import TOLERANCE
from .prbox import decompose, max_bias, success_probability, violation_check

_FAMILIES = {
    "index": Index,
    "ip": InnerProduct,
    "disj": Disjointness,
    "eq": Equality,
    "kint": KIntersect,
}


def _fmt(value: float) -> str:
    return f"{value:.9f}"


def _rounded(obj):
    """Round every float to nine decimals for stable JSON output."""
    if isinstance(obj, float):
        return round(obj, 9)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(_rounded(payload), indent=2) + "\n")


def _emit_csv(rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _emit_text(lines) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Flag resolution
# ---------------------------------------------------------------------------


def _family_from_args(args):
    cls = _FAMILIES[args.family]
    if args.n is None:
        raise ArgumentError(f"--family {args.family} requires --n")
    if cls is KIntersect:
        if args.k is None:
            raise ArgumentError("--family kint requires --k")
        return cls(args.n, args.k)
    return cls(args.n)


def _resolve_function(args):
    """Returns (function, name, parameters) from --family/--table flags."""
    if getattr(args, "table", None):
        text = Path(args.table).read_text(encoding="utf-8")
        f = load_truth_table(text)
        return f, f"table:{args.table}", {"x_size": f.x_size, "y_size": f.y_size}
    family = _family_from_args(args)
    params = family.describe()
    name = params.pop("family")
    return build_family(family), name, params


def _resolve_channel(args):
    if args.channel == "det":
        return Deterministic()
    if args.channel == "sym":
        if args.eps is None:
            raise ArgumentError("--channel sym requires --eps")
        return Symmetric(args.eps)
    if args.eps1 is None or args.eps2 is None:
        raise ArgumentError("--channel asym requires --eps1 and --eps2")
    return Asymmetric(args.eps1, args.eps2)


def _resolve_distribution(args, x_size: int) -> InputDistribution:
    spec = args.dist
    if spec == "uniform":
        return InputDistribution.uniform(x_size)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        return InputDistribution.from_json(
            Path(path).read_text(encoding="utf-8"), label=f"file:{path}"
        )
    raise ArgumentError(f"--dist must be 'uniform' or 'file:PATH', got {spec!r}")


def _resolve_ordering(args, f, dist, channel):
    spec = args.ordering
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, list):
            raise ArgumentError("ordering file must be a JSON array of y indices")
        return Ordering(tuple(int(v) for v in data), strategy=f"file:{path}")
    return make_ordering(
        spec,
        f,
        dist,
        channel,
        k=args.k,
        threads=args.threads,
        allow_big_exhaustive=args.allow_big_exhaustive,
    )


def _parse_biases(spec: str) -> list:
    try:
        return [float(part) for part in spec.split(",") if part != ""]
    except ValueError as exc:
        raise ArgumentError(f"--bias expects comma-separated numbers, got {spec!r}") from exc


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def _handle_bound(args) -> int:
    f, name, params = _resolve_function(args)
    channel = _resolve_channel(args)
    dist = _resolve_distribution(args, f.x_size)
    ordering = _resolve_ordering(args, f, dist, channel)
    report = compute_bound(f, dist, ordering, channel)
    payload = {
        "function": name,
        "parameters": {**params, "distribution": dist.label},
        "channel": channel.describe(),
        "ordering": {"strategy": report.ordering_strategy, "perm": list(report.ordering)},
        "terms": list(report.terms),
        "total": report.total,
        "tolerance": TOLERANCE,
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        rows = [["record", "index", "value"]]
        rows += [["term", str(i), _fmt(t)] for i, t in enumerate(report.terms)]
        rows.append(["total", "", _fmt(report.total)])
        _emit_csv(rows)
    else:
        lines = [
            f"function: {name} {params}",
            f"channel: {channel.describe()}",
            f"ordering: {report.ordering_strategy} {list(report.ordering)}",
            f"distribution: {dist.label}",
            "terms:",
        ]
        lines += [f"  [{i}] {_fmt(t)}" for i, t in enumerate(report.terms)]
        lines.append(f"total: {_fmt(report.total)}")
        _emit_text(lines)
    return 0


def _handle_classify(args) -> int:
    table = census_table(threads=args.threads)
    checks = hierarchy_check()
    payload = {
        "class_count": len(table),
        "total_functions": sum(count for _, count, _ in table),
        "classes": [
            {"label": label, "count": count, "representative": rep.bits()}
            for label, count, rep in table
        ],
        "hierarchy": [
            {"source": c.source, "target": c.target, "passed": c.passed} for c in checks
        ],
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        rows = [["label", "count", "representative"]]
        rows += [[label, str(count), rep.bits()] for label, count, rep in table]
        _emit_csv(rows)
    else:
        lines = [f"classes: {payload['class_count']}  (functions: {payload['total_functions']})"]
        lines += [f"  {label:>4}: {count:6d}  rep={rep.bits()}" for label, count, rep in table]
        lines += [f"hierarchy {c.source}->{c.target}: ok" for c in checks]
        _emit_text(lines)
    return 0


def _monomial_name(subset) -> str:
    return "1" if not subset else "*".join(f"y{i}" for i in subset)


def _handle_prbox_decompose(args) -> int:
    f, name, params = _resolve_function(args)
    dec = decompose(f)
    ordered = sorted(dec.coefficients, key=lambda s: (len(s), s))
    payload = {
        "function": name,
        "parameters": params,
        "box_count": dec.box_count,
        "message_term": "".join(str(b) for b in dec.message_term),
        "coefficients": [
            {
                "monomial": _monomial_name(s),
                "positions": list(s),
                "bits": "".join(str(b) for b in dec.coefficients[s]),
                "constant": len(set(dec.coefficients[s])) == 1,
            }
            for s in ordered
        ],
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        rows = [["monomial", "bits", "constant"]]
        rows += [
            [_monomial_name(s), "".join(str(b) for b in dec.coefficients[s]),
             str(len(set(dec.coefficients[s])) == 1).lower()]
            for s in ordered
        ]
        _emit_csv(rows)
    else:
        lines = [f"function: {name} {params}", f"box count: {dec.box_count}"]
        lines += [
            f"  c[{_monomial_name(s)}] = {''.join(str(b) for b in dec.coefficients[s])}"
            for s in ordered
        ]
        _emit_text(lines)
    return 0


def _expand_biases(biases, count: int):
    if len(biases) == 1 and count > 1:
        return biases * count
    return biases


def _handle_prbox_bias(args) -> int:
    f, name, params = _resolve_function(args)
    dec = decompose(f)
    biases = _expand_biases(_parse_biases(args.bias), dec.box_count)
    p = success_probability(dec, biases)
    payload = {
        "function": name,
        "parameters": params,
        "biases": list(biases),
        "box_count": dec.box_count,
        "success_probability": p,
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        _emit_csv([["box_count", "success_probability"], [str(dec.box_count), _fmt(p)]])
    else:
        _emit_text([
            f"function: {name} {params}",
            f"biases: {list(biases)}",
            f"success probability: {_fmt(p)}",
        ])
    return 0


def _handle_prbox_violation(args) -> int:
    family = _family_from_args(args)
    probe = decompose(build_family(family))
    biases = _expand_biases(_parse_biases(args.bias), probe.box_count)
    report = violation_check(family, biases, args.m)
    payload = {
        "function": family.name,
        "parameters": {k: v for k, v in family.describe().items() if k != "family"},
        "biases": list(biases),
        "message_bits": args.m,
        "success_probability": report.success_probability,
        "epsilon": report.epsilon,
        "bound_total": report.bound_total,
        "violated": report.violated,
        "no_signal": report.no_signal,
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        _emit_csv([
            ["success_probability", "bound_total", "message_bits", "violated", "no_signal"],
            [_fmt(report.success_probability), _fmt(report.bound_total), str(args.m),
             str(report.violated).lower(), str(report.no_signal).lower()],
        ])
    else:
        status = "NO SIGNAL" if report.no_signal else ("VIOLATED" if report.violated else "ok")
        _emit_text([
            f"function: {family.name} {payload['parameters']}",
            f"success probability: {_fmt(report.success_probability)}",
            f"bound: {_fmt(report.bound_total)} vs m = {args.m}",
            f"status: {status}",
        ])
    return 0


def _handle_prbox_maxbias(args) -> int:
    family = _family_from_args(args)
    threshold = max_bias(family, args.m)
    payload = {
        "function": family.name,
        "parameters": {k: v for k, v in family.describe().items() if k != "family"},
        "message_bits": args.m,
        "max_bias": threshold,
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        _emit_csv([["message_bits", "max_bias"], [str(args.m), _fmt(threshold)]])
    else:
        _emit_text([
            f"function: {family.name} {payload['parameters']}",
            f"max bias at m = {args.m}: {_fmt(threshold)}",
        ])
    return 0


_FAMILY_HELP = [
    ("index", "f(x, y) = x_y", "n >= 1", "x_size = 2^n, y_size = n", "natural"),
    ("ip", "XOR_i x_i y_i", "n >= 1", "x_size = y_size = 2^n", "unit-first"),
    ("disj", "[no common 1-position]", "n >= 1", "x_size = y_size = 2^n", "unit-first"),
    ("eq", "[x = y]", "n >= 1", "x_size = y_size = 2^n", "natural"),
    ("kint", "[at least k common 1s]", "n >= 1, 1 <= k <= n/2", "x_size = y_size = 2^n",
     "kint-proof"),
]


def _handle_families(args) -> int:
    payload = {
        "families": [
            {"name": n, "definition": d, "parameters": p, "sizes": s, "standard_ordering": o}
            for n, d, p, s, o in _FAMILY_HELP
        ]
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        rows = [["name", "definition", "parameters", "sizes", "standard_ordering"]]
        rows += [list(entry) for entry in _FAMILY_HELP]
        _emit_csv(rows)
    else:
        _emit_text([
            f"{n:>6}: {d}  ({p}; {s}; standard ordering {o})" for n, d, p, s, o in _FAMILY_HELP
        ])
    return 0


def _handle_oracle_check(args) -> int:
    result = oracle_check(cases=args.cases, seed=args.seed, max_size=args.max_size)
    payload = {
        "cases": result.cases,
        "seed": result.seed,
        "max_size": result.max_size,
        "max_deviation": result.max_deviation,
        "tolerance": TOLERANCE,
        "ok": result.ok,
    }
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        _emit_csv([["cases", "max_deviation", "ok"],
                   [str(result.cases), f"{result.max_deviation:.3e}", str(result.ok).lower()]])
    else:
        _emit_text([
            f"cases: {result.cases} (seed {result.seed}, sizes <= {result.max_size})",
            f"max deviation: {result.max_deviation:.3e}",
            f"ok: {result.ok}",
        ])
    return 0 if result.ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def _add_function_source(p: argparse.ArgumentParser, with_table: bool = True) -> None:
    p.add_argument("--family", choices=sorted(_FAMILIES))
    if with_table:
        p.add_argument("--table", metavar="PATH", help="truth-table JSON file")
    p.add_argument("--n", type=int, help="family size parameter")
    p.add_argument("--k", type=int, help="threshold for kint (also kint-proof ordering)")


def _check_function_source(args, parser, with_table: bool = True) -> None:
    has_family = args.family is not None
    has_table = with_table and getattr(args, "table", None) is not None
    if has_family == has_table:
        parser.error("exactly one of --family or --table is required")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icbounds",
        description="Information-causality lower bounds on one-way communication complexity",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="evaluate the information lower bound")
    _add_function_source(p_bound)
    p_bound.add_argument("--channel", choices=("det", "sym", "asym"), default="det")
    p_bound.add_argument("--eps", type=float)
    p_bound.add_argument("--eps1", type=float)
    p_bound.add_argument("--eps2", type=float)
    p_bound.add_argument(
        "--ordering",
        default="natural",
        help="natural|unit-first|kint-proof|greedy|exhaustive|file:PATH",
    )
    p_bound.add_argument("--dist", default="uniform", help="uniform|file:PATH")
    p_bound.add_argument("--threads", type=int, default=1)
    p_bound.add_argument("--allow-big-exhaustive", action="store_true")
    _add_common(p_bound)
    p_bound.set_defaults(handler=_handle_bound, needs_source=True)

    p_classify = sub.add_parser("classify", help="census of the equivalence classes")
    p_classify.add_argument("--threads", type=int, default=1)
    _add_common(p_classify)
    p_classify.set_defaults(handler=_handle_classify)

    p_prbox = sub.add_parser("prbox", help="PR-box protocol analysis")
    prbox_sub = p_prbox.add_subparsers(dest="prbox_command", required=True)

    p_dec = prbox_sub.add_parser("decompose", help="ANF-over-y coefficients and box count")
    _add_function_source(p_dec)
    _add_common(p_dec)
    p_dec.set_defaults(handler=_handle_prbox_decompose, needs_source=True)

    p_bias = prbox_sub.add_parser("bias", help="success probability under biased boxes")
    _add_function_source(p_bias)
    p_bias.add_argument("--bias", required=True, help="comma-separated biases (one broadcasts)")
    _add_common(p_bias)
    p_bias.set_defaults(handler=_handle_prbox_bias, needs_source=True)

    p_viol = prbox_sub.add_parser("violation", help="check a protocol against the m-bit bound")
    _add_function_source(p_viol, with_table=False)
    p_viol.add_argument("--bias", required=True)
    p_viol.add_argument("--m", type=int, required=True, help="message bits")
    _add_common(p_viol)
    p_viol.set_defaults(handler=_handle_prbox_violation, needs_source=True, table=None)

    p_max = prbox_sub.add_parser("maxbias", help="largest bias the m-bit bound tolerates")
    _add_function_source(p_max, with_table=False)
    p_max.add_argument("--m", type=int, required=True, help="message bits")
    _add_common(p_max)
    p_max.set_defaults(handler=_handle_prbox_maxbias, needs_source=True, table=None)

    p_fam = sub.add_parser("families", help="list built-in families")
    _add_common(p_fam)
    p_fam.set_defaults(handler=_handle_families)

    p_oracle = sub.add_parser("oracle-check", help="compare evaluator against direct oracle")
    p_oracle.add_argument("--cases", type=int, default=100)
    p_oracle.add_argument("--seed", type=int, default=1783)
    p_oracle.add_argument("--max-size", type=int, default=16)
    _add_common(p_oracle)
    p_oracle.set_defaults(handler=_handle_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "needs_source", False):
            _check_function_source(args, parser, with_table=hasattr(args, "table"))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ExhaustiveSearchRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except (CensusMismatchError, HierarchyViolationError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3
    except IcboundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
