"""Command line interface.

Every command prints a single self-describing document to stdout (or to
--output FILE) in json, csv or text form.  JSON is the canonical format:
keys are sorted, exact rationals appear as numerator/denominator strings,
enclosure bounds as decimal strings, so identical configurations produce
byte-identical output.

Exit codes: 0 success, 1 a verification identity failed, 2 invalid input,
3 the requested exact count exceeds the enumeration budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from decimal import Decimal
from fractions import Fraction
from io import StringIO
from math import inf, isfinite
from pathlib import Path

from .arith import sieve_primes
from .coprime import (
    DEFAULT_BUDGET,
    BudgetError,
    ConstraintError,
    ConstraintVector,
    count_tuples,
)
from .density import (
    DEFAULT_PRECISION,
    DEFAULT_PRIME_LIMIT,
    constraint_factor,
    kwise_coprime_probability,
    limiting_density,
    mobius_ratio_identity,
)
from .recursion import verify_recursion
from .stats import convergence_table, monte_carlo

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: flag defaults applied, moduli parsed."""

    command: str
    format: str
    output: str | None
    s: int | None = None
    k: int | None = None
    u: tuple[int, ...] | None = None
    n: int | None = None
    prime_limit: int | None = None
    precision: int | None = None
    strategy: str | None = None
    threads: int | None = None
    budget: int | None = None
    range_n: int | None = None
    samples: int | None = None
    seed: int | None = None
    streams: int | None = None
    grid: tuple[int, ...] | None = None
    u_max: int | None = None
    n_max: int | None = None
    limit: int | None = None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kwise",
        description="Exact densities and counts for k-wise coprime integer tuples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--format", choices=("json", "csv", "text"), default="json")
    out.add_argument("--output", metavar="FILE", help="write the document to FILE instead of stdout")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--s", type=int, required=True, help="tuple length")
    shape.add_argument("--k", type=int, help="coprimality order; implied by --u")
    shape.add_argument("--u", help="comma-separated moduli u_1,...,u_{k-1}")

    work = argparse.ArgumentParser(add_help=False)
    work.add_argument("--threads", type=int, help="worker processes (default: all cores)")
    work.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max n**s cells")

    dens = argparse.ArgumentParser(add_help=False)
    dens.add_argument("--prime-limit", type=int, default=DEFAULT_PRIME_LIMIT)
    dens.add_argument("--precision", type=int, default=DEFAULT_PRECISION)

    p = sub.add_parser("density", parents=[out, shape, dens], help="limiting density enclosure")

    p = sub.add_parser("count", parents=[out, shape, work], help="exact count over [1,n]^s")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("signature", "naive"), default="signature")

    p = sub.add_parser("mc", parents=[out, shape], help="Monte Carlo density estimate")
    p.add_argument("--range", dest="range_n", type=int, required=True, help="sample box [1, RANGE]")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--streams", type=int, default=1)

    p = sub.add_parser(
        "converge", parents=[out, shape, dens, work], help="exact counts vs prediction over a grid"
    )
    p.add_argument("--grid", required=True, help="comma-separated n values")

    p = sub.add_parser(
        "verify-lemma4",
        parents=[out],
        help="check the Mobius-sum route to the constraint factors",
    )
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--u-max", type=int, default=100, help="sweep moduli u = 1..U")

    p = sub.add_parser(
        "verify-recursion",
        parents=[out, shape, work],
        help="check the last-coordinate counting recursion",
    )
    p.add_argument("--n-max", type=int, required=True, help="verify every n = 1..N")

    p = sub.add_parser("primes", parents=[out], help="list primes up to a bound")
    p.add_argument("--limit", type=int, required=True)

    return parser


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _resolve_constraint(args: argparse.Namespace) -> ConstraintVector:
    u = getattr(args, "u", None)
    k = getattr(args, "k", None)
    if u is not None:
        constraint = ConstraintVector(_parse_int_list(u, "--u"))
        if k is not None and k != constraint.k:
            raise ValueError(
                f"--k {k} conflicts with --u of length {len(constraint.moduli)}, "
                f"which implies k = {constraint.k}"
            )
        return constraint
    if k is None:
        raise ValueError("either --k or --u is required")
    return ConstraintVector.trivial(k)


def _config_from_args(args: argparse.Namespace) -> tuple[RunConfig, ConstraintVector | None]:
    command = args.command
    fields: dict = {"command": command, "format": args.format, "output": args.output}
    constraint = None
    if command in ("density", "count", "mc", "converge", "verify-recursion"):
        constraint = _resolve_constraint(args)
        fields["s"] = args.s
        fields["k"] = constraint.k
        fields["u"] = constraint.moduli
    if command == "density":
        fields["prime_limit"] = args.prime_limit
        fields["precision"] = args.precision
    elif command == "count":
        fields["n"] = args.n
        fields["strategy"] = args.strategy
        fields["threads"] = args.threads or os.cpu_count() or 1
        fields["budget"] = args.budget
    elif command == "mc":
        fields["range_n"] = args.range_n
        fields["samples"] = args.samples
        fields["seed"] = args.seed
        fields["streams"] = args.streams
    elif command == "converge":
        fields["grid"] = _parse_int_list(args.grid, "--grid")
        fields["prime_limit"] = args.prime_limit
        fields["precision"] = args.precision
        fields["threads"] = args.threads or os.cpu_count() or 1
        fields["budget"] = args.budget
    elif command == "verify-lemma4":
        fields["s"] = args.s
        fields["k"] = args.k
        fields["u_max"] = args.u_max
    elif command == "verify-recursion":
        fields["n_max"] = args.n_max
        fields["threads"] = args.threads or os.cpu_count() or 1
        fields["budget"] = args.budget
    elif command == "primes":
        fields["limit"] = args.limit
    return RunConfig(**fields), constraint


def _enclosure_doc(enc) -> dict:
    return {
        "lower": enc.lower,
        "upper": enc.upper,
        "point": enc.point,
        "width": enc.width,
        "tail_bound": enc.tail_bound,
        "prime_limit": enc.prime_limit,
    }


def _run_density(cfg: RunConfig, constraint: ConstraintVector) -> tuple[dict, int]:
    trivial = all(u == 1 for u in constraint.moduli)
    if trivial:
        enc = kwise_coprime_probability(cfg.s, cfg.k, cfg.prime_limit, cfg.precision)
        result = _enclosure_doc(enc)
    else:
        enc = limiting_density(cfg.s, constraint, cfg.prime_limit, cfg.precision)
        result = _enclosure_doc(enc)
        result["constraint_factors"] = [
            {"i": i, "u": u, "factor": constraint_factor(cfg.s, cfg.k, i, u)}
            for i, u in enumerate(constraint.moduli, start=1)
        ]
    return {"result": result}, 0


def _run_count(cfg: RunConfig, constraint: ConstraintVector) -> tuple[dict, int]:
    count = count_tuples(
        cfg.s,
        constraint,
        cfg.n,
        strategy=cfg.strategy,
        threads=cfg.threads,
        budget=cfg.budget,
    )
    return {"result": {"n": cfg.n, "count": count}}, 0


def _run_mc(cfg: RunConfig, constraint: ConstraintVector) -> tuple[dict, int]:
    est = monte_carlo(cfg.s, constraint, cfg.range_n, cfg.samples, cfg.seed, cfg.streams)
    return {"result": asdict(est)}, 0


def _run_converge(cfg: RunConfig, constraint: ConstraintVector) -> tuple[dict, int]:
    rows = convergence_table(
        cfg.s,
        constraint,
        cfg.grid,
        prime_limit=cfg.prime_limit,
        precision=cfg.precision,
        threads=cfg.threads,
        budget=cfg.budget,
    )
    return {"result": {"rows": [asdict(r) for r in rows]}}, 0


def _run_verify_lemma4(cfg: RunConfig, _: None) -> tuple[dict, int]:
    cells = 0
    failed = []
    for u in range(1, cfg.u_max + 1):
        for i, lhs, rhs, equal in mobius_ratio_identity(cfg.s, cfg.k, u):
            cells += 1
            if not equal:
                failed.append({"i": i, "u": u, "lhs": lhs, "rhs": rhs})
    result = {"cells": cells, "failures": len(failed), "failed": failed}
    return {"result": result}, 1 if failed else 0


def _run_verify_recursion(cfg: RunConfig, constraint: ConstraintVector) -> tuple[dict, int]:
    reports = []
    failures = 0
    for n in range(1, cfg.n_max + 1):
        rep = verify_recursion(cfg.s, constraint, n, threads=cfg.threads, budget=cfg.budget)
        reports.append(
            {
                "n": rep.n,
                "lhs": rep.lhs,
                "rhs_reduced": rep.rhs_reduced,
                "rhs_raw": rep.rhs_raw,
                "passed": rep.passed,
            }
        )
        if not rep.passed:
            failures += 1
    result = {"cells": len(reports), "failures": failures, "reports": reports}
    return {"result": result}, 1 if failures else 0


def _run_primes(cfg: RunConfig, _: None) -> tuple[dict, int]:
    primes = sieve_primes(cfg.limit)
    return {"result": {"count": len(primes), "primes": primes}}, 0


_RUNNERS = {
    "density": _run_density,
    "count": _run_count,
    "mc": _run_mc,
    "converge": _run_converge,
    "verify-lemma4": _run_verify_lemma4,
    "verify-recursion": _run_verify_recursion,
    "primes": _run_primes,
}


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"numerator": str(value.numerator), "denominator": str(value.denominator)}
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, float):
        return value if isfinite(value) else str(value)
    if isinstance(value, dict):
        return {key: _jsonable(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _scalar(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _csv_table(doc: dict) -> tuple[list[str], list[list]]:
    result = doc["result"]
    command = doc["command"]
    if command in ("density",):
        header = ["lower", "upper", "point", "width", "tail_bound", "prime_limit"]
        return header, [[result[h] for h in header]]
    if command == "count":
        return ["n", "count"], [[result["n"], result["count"]]]
    if command == "mc":
        header = ["samples", "hits", "estimate", "std_error", "seed", "range_n", "streams"]
        return header, [[result[h] for h in header]]
    if command == "converge":
        header = ["n", "count", "predicted", "abs_error", "normalized_error"]
        return header, [[row[h] for h in header] for row in result["rows"]]
    if command == "verify-lemma4":
        return ["cells", "failures"], [[result["cells"], result["failures"]]]
    if command == "verify-recursion":
        header = ["n", "lhs", "rhs_reduced", "rhs_raw", "passed"]
        return header, [[row[h] for h in header] for row in result["reports"]]
    if command == "primes":
        return ["p"], [[p] for p in result["primes"]]
    raise ValueError(f"no csv layout for command {command!r}")


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if fmt == "csv":
        header, rows = _csv_table(doc)
        buf = StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_scalar(v) for v in row) + "\n")
        return buf.getvalue()
    lines = [f"command: {doc['command']}"]
    for key, value in doc["inputs"].items():
        lines.append(f"  {key} = {_scalar(value) if not isinstance(value, tuple) else value}")
    lines.append("result:")
    header, rows = _csv_table(doc)
    if len(rows) == 1:
        for name, value in zip(header, rows[0]):
            lines.append(f"  {name} = {_scalar(value)}")
    else:
        lines.append("  " + "\t".join(header))
        for row in rows:
            lines.append("  " + "\t".join(_scalar(v) for v in row))
    extra = doc["result"].get("constraint_factors") if isinstance(doc["result"], dict) else None
    if extra:
        for item in extra:
            lines.append(f"  factor[i={item['i']}, u={item['u']}] = {_scalar(item['factor'])}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg, constraint = _config_from_args(args)
        doc, code = _RUNNERS[cfg.command](cfg, constraint)
        doc["command"] = cfg.command
        doc["inputs"] = {
            key: value
            for key, value in asdict(cfg).items()
            if value is not None and key not in ("command", "format", "output")
        }
        payload = _render(doc, cfg.format)
    except BudgetError as exc:
        print(f"error[budget]: {exc}", file=sys.stderr)
        return 3
    except (ConstraintError, ArithmeticError, ValueError, TypeError) as exc:
        print(f"error[validation]: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        Path(cfg.output).write_bytes(payload.encode("utf-8"))
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
