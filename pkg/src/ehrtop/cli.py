"""Command-line front end.

`ehrtop top problem.json` computes the top step-polynomial coefficients
of a problem file; `ehrtop bench` runs the random-lattice-simplex
timing harness.  Exit codes: 0 ok, 2 parse error, 3 infeasible input,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .engine import (
    EhrhartTopResult,
    leading_is_integral,
    top_coefficients,
    top_coefficients_multi,
)
from .errors import ConesRequiredError, EhrtopError, NotFullDimensionalError
from .oracle import verify_top
from .polytope import PowerLinearWeight, SimplePolytope
from .rat import format_rat, parse_rat
from .steppoly import StepPolynomial

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_MISMATCH = 4


class ProblemError(ValueError):
    pass


def load_problem(path: str):
    """Parse a problem file into (polytope, weights, default k0)."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemError(f"cannot read problem file: {exc}") from exc
    if not isinstance(data, dict):
        raise ProblemError("problem file must be a JSON object")
    try:
        dim = int(data["dim"])
        vertices = [
            tuple(parse_rat(str(x)) for x in vertex) for vertex in data["vertices"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemError(f"bad polytope data: {exc}") from exc
    cones = None
    if "cones" in data and data["cones"] is not None:
        try:
            cones = tuple(
                tuple(tuple(int(x) for x in gen) for gen in per_vertex)
                for per_vertex in data["cones"])
        except (TypeError, ValueError) as exc:
            raise ProblemError(f"bad cone data: {exc}") from exc
    raw_weight = data.get("weight", {"ell": ["0"] * dim, "M": 0})
    if isinstance(raw_weight, dict):
        raw_weight = [raw_weight]
    try:
        weights = [
            PowerLinearWeight(
                ell=tuple(parse_rat(str(x)) for x in w["ell"]),
                power=int(w["M"]))
            for w in raw_weight
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemError(f"bad weight data: {exc}") from exc
    if any(len(w.ell) != dim for w in weights):
        raise ProblemError("weight dimension mismatch")
    k0 = int(data.get("k0", 2))
    try:
        polytope = SimplePolytope(dim, tuple(vertices), cones)
    except (ConesRequiredError, NotFullDimensionalError):
        raise
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc
    return polytope, weights, k0


def result_to_json_dict(result: EhrhartTopResult) -> dict:
    coeffs = []
    for m in sorted(result.coeffs, reverse=True):
        poly = result.coeffs[m]
        terms = []
        for factors, coef in sorted(poly.terms.items(),
                                    key=lambda kv: (-sum(e for _, e in kv[0]), kv[0])):
            terms.append({
                "coef": format_rat(coef),
                "factors": [
                    {"zeta": zeta, "mod": q, "pow": e}
                    for (zeta, q), e in factors
                ],
            })
        coeffs.append({"m": m, "terms": terms})
    return {"period_q": result.period_q, "coeffs": coeffs}


def render_result_json(result: EhrhartTopResult) -> str:
    return json.dumps(result_to_json_dict(result), indent=2)


def json_dict_to_result(data: dict, M: int, d: int, k0: int) -> EhrhartTopResult:
    coeffs = {}
    for entry in data["coeffs"]:
        terms = {}
        for term in entry["terms"]:
            factors = tuple(
                ((f["zeta"], f["mod"]), f["pow"]) for f in term["factors"])
            terms[factors] = parse_rat(term["coef"])
        coeffs[entry["m"]] = StepPolynomial(terms)
    return EhrhartTopResult(M, d, k0, data["period_q"], coeffs)


def render_result_text(result: EhrhartTopResult) -> str:
    lines = [f"period q = {result.period_q}"]
    pieces = []
    for m in sorted(result.coeffs, reverse=True):
        poly = result.coeffs[m]
        body = poly.render()
        if m == 0:
            pieces.append(f"({body})")
        else:
            n_pow = "n" if m == 1 else f"n^{m}"
            pieces.append(f"({body})*{n_pow}")
    lines.append("E(n) ~ " + " + ".join(pieces))
    for m in sorted(result.coeffs, reverse=True):
        lines.append(f"  E_{m} = {result.coeffs[m].render()}")
    return "\n".join(lines)


def _cmd_top(args) -> int:
    try:
        polytope, weights, k0_default = load_problem(args.problem)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConesRequiredError, NotFullDimensionalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    k0 = args.k0 if args.k0 is not None else k0_default
    if args.M is not None:
        if len(weights) != 1:
            print("error: --M override requires a single weight", file=sys.stderr)
            return EXIT_PARSE
        weights = [PowerLinearWeight(weights[0].ell, args.M)]

    try:
        if len(weights) == 1:
            result = top_coefficients(polytope, weights[0], k0, threads=args.threads)
        else:
            result = top_coefficients_multi(polytope, weights, k0, threads=args.threads)
    except (ConesRequiredError, NotFullDimensionalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except EhrtopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    payload = result_to_json_dict(result)
    evaluation = None
    if args.evaluate is not None:
        n = args.evaluate
        values = result.evaluate_at(n)
        evaluation = {
            "n": n,
            "coefficients": {str(m): format_rat(v) for m, v in values.items()},
            "partial_sum": format_rat(result.partial_sum(n)),
        }

    report = None
    if args.verify:
        if len(weights) != 1:
            print("error: --verify requires a single weight", file=sys.stderr)
            return EXIT_PARSE
        report = verify_top(result, polytope, weights[0], budget=args.budget)

    if args.json:
        if evaluation is not None:
            payload["evaluation"] = evaluation
        if report is not None:
            payload["verify"] = json.loads(report.to_json())
        print(json.dumps(payload, indent=2))
    else:
        print(render_result_text(result))
        if evaluation is not None:
            print(f"values at n = {evaluation['n']}:")
            for m in sorted(result.coeffs, reverse=True):
                print(f"  E_{m}({evaluation['n']}) = {evaluation['coefficients'][str(m)]}")
            print(f"  partial sum = {evaluation['partial_sum']}")
        if report is not None:
            print(report.summary())
    if report is not None and not report.ok:
        return EXIT_MISMATCH
    return EXIT_OK


def random_lattice_simplex(rng: random.Random, d: int,
                           coord_bound: int = 99) -> SimplePolytope:
    """Random full-dimensional lattice simplex, coordinates in [-b, b]."""
    while True:
        vertices = tuple(
            tuple(rng.randint(-coord_bound, coord_bound) for _ in range(d))
            for _ in range(d + 1))
        try:
            return SimplePolytope(d, vertices)
        except (NotFullDimensionalError, ValueError):
            continue


def parse_dims(spec: str):
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",") if x]


def run_bench(dims, count: int, seed: int, k0: int = 2,
              time_limit: float | None = None):
    """Timing harness over random lattice simplices; returns row dicts."""
    rng = random.Random(seed)
    rows = []
    for d in dims:
        weight = PowerLinearWeight(tuple(1 for _ in range(d)), 0)
        times = []
        failures = 0
        for _ in range(count):
            simplex = random_lattice_simplex(rng, d)
            start = time.perf_counter()
            try:
                top_coefficients(simplex, weight, k0)
                elapsed = time.perf_counter() - start
                if time_limit is not None and elapsed > time_limit:
                    failures += 1
                times.append(elapsed)
            except EhrtopError:
                failures += 1
                times.append(time.perf_counter() - start)
        rows.append({
            "dimension": d,
            "count": count,
            "failures": failures,
            "avg_seconds": sum(times) / len(times) if times else 0.0,
            "max_seconds": max(times) if times else 0.0,
        })
    return rows


def format_bench_table(rows) -> str:
    lines = [
        "Average runtime (seconds) for top-3 coefficients of random lattice simplices",
        f"{'Dimension':>9}  {'Count':>5}  {'Failures':>8}  {'Avg':>10}  {'Max':>10}",
    ]
    for row in rows:
        lines.append(
            f"{row['dimension']:>9}  {row['count']:>5}  {row['failures']:>8}"
            f"  {row['avg_seconds']:>10.3f}  {row['max_seconds']:>10.3f}")
    return "\n".join(lines)


def _cmd_bench(args) -> int:
    try:
        dims = parse_dims(args.dims)
    except ValueError:
        print(f"error: bad --dims {args.dims!r}", file=sys.stderr)
        return EXIT_PARSE
    rows = run_bench(dims, args.count, args.seed, k0=args.k0,
                     time_limit=args.time_limit)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(format_bench_table(rows))
    return EXIT_OK if all(r["failures"] == 0 for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrtop",
        description="Top coefficients of weighted Ehrhart quasi-polynomials "
                    "as closed-form step polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    top = sub.add_parser("top", help="compute coefficients for a problem file")
    top.add_argument("problem", help="path to a JSON problem file")
    top.add_argument("--M", type=int, default=None, help="override weight power")
    top.add_argument("--k0", type=int, default=None, help="override depth k0")
    top.add_argument("--evaluate", type=int, metavar="N", default=None,
                     help="also evaluate the coefficients at dilation N")
    top.add_argument("--verify", action="store_true",
                     help="check against the brute-force oracle")
    top.add_argument("--json", action="store_true", help="emit JSON")
    top.add_argument("--threads", type=int, default=None, help="worker cap")
    top.add_argument("--budget", type=int, default=10 ** 8,
                     help="oracle enumeration cell budget")
    top.set_defaults(func=_cmd_top)

    bench = sub.add_parser("bench", help="random lattice simplex timing harness")
    bench.add_argument("--dims", default="3..8", help="dimensions, e.g. 3..8 or 3,5")
    bench.add_argument("--count", type=int, default=50, help="instances per dimension")
    bench.add_argument("--seed", type=int, default=0, help="instance generator seed")
    bench.add_argument("--k0", type=int, default=2, help="depth (top k0+1 coefficients)")
    bench.add_argument("--time-limit", type=float, default=None,
                       help="per-instance wall-clock limit in seconds")
    bench.add_argument("--json", action="store_true", help="emit JSON rows")
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
