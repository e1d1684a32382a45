"""Command-line interface, JSON/CSV formats and the verification benchmark.

Exit codes: 0 for success or an accepted input, 1 for a negative domain
answer (rejected, not glueable, not maximal, ...), 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import statistics
import sys
import time
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic import (
    AnalyticSpacing,
    Flavor,
    SphereClass,
    from_signature,
    from_summary,
    is_maximal,
    sample,
    sig_of,
    validate,
)
from .gluing import embed, glueable
from .linalg import DEFAULT_TOL
from .orthocentric import affine_rank, orthocentric_verdict
from .signatures import (
    Signature,
    classify,
    count_maximal,
    enumerate_eq,
    enumerate_neq,
    parse_signature,
)
from .spacing import LabeledPointSet, PointClass, summarize, verify, verify_naive
from .transforms import to_equilateral_normal_form

TOL_ENV = "EQUISPACE_TOL"
BENCH_HEADER = ["algorithm", "point_count", "class_count", "dimension", "repeats", "median_seconds"]
ENUM_HEADER = ["family", "signature", "I", "n"]


class UsageError(Exception):
    """Bad flags, unreadable input or an invalid request: exit code 2."""


# --- formats -----------------------------------------------------------------


def point_set_to_json(Y: LabeledPointSet) -> dict:
    return {
        "dimension": Y.dimension,
        "classes": [{"label": c.label, "points": c.points.tolist()} for c in Y.classes],
    }


def point_set_from_json(obj: dict) -> LabeledPointSet:
    dimension = int(obj["dimension"])
    classes = tuple(
        PointClass(str(c["label"]), np.asarray(c["points"], dtype=float).reshape(-1, dimension))
        for c in obj["classes"]
    )
    return LabeledPointSet(dimension, classes)


def spacing_to_json(S: AnalyticSpacing) -> dict:
    classes = []
    for c in S.classes:
        entry = {"center": c.center.tolist(), "radius": float(c.radius), "basis": c.basis.tolist()}
        if c.label is not None:
            entry["label"] = c.label
        classes.append(entry)
    return {"dimension": S.dimension, "classes": classes}


def spacing_from_json(obj: dict) -> AnalyticSpacing:
    dimension = int(obj["dimension"])
    classes = tuple(
        SphereClass(
            np.asarray(c["center"], dtype=float).reshape(dimension),
            float(c["radius"]),
            np.asarray(c["basis"], dtype=float).reshape(-1, dimension),
            c.get("label"),
        )
        for c in obj["classes"]
    )
    return AnalyticSpacing(dimension, classes)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _parse(path: str, loader: Callable):
    obj = _read_json(path)
    try:
        return loader(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed input {path}: {exc}") from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _load_spacing_like(path: str, tol: float) -> AnalyticSpacing:
    """Analytic spacing JSON, or a point set summarized into one."""
    obj = _read_json(path)
    try:
        if obj["classes"] and "points" in obj["classes"][0]:
            return from_summary(summarize(point_set_from_json(obj), tol))
        return spacing_from_json(obj)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"malformed input {path}: {exc}") from exc


# --- benchmark ---------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    algorithm: str
    point_count: int
    class_count: int
    dimension: int
    repeats: int
    median_seconds: float


def bench_signature(classes: int, dim: int) -> tuple[Signature, Flavor]:
    """A signature placed at ``(classes, dim)``, preferring balanced support dimensions."""
    candidates = []
    for N in range(1, dim + 2):
        for s in enumerate_eq(N):
            if classify(s).in_S_eq == (classes, dim):
                candidates.append((0, -min(s.d, default=0), s, Flavor.COINCIDENT))
        for s in enumerate_neq(N):
            if classify(s).in_S_neq == (classes, dim):
                candidates.append((1, -min(s.d), s, Flavor.DISTINCT))
    if not candidates:
        raise ValueError(f"no maximal spacing has {classes} classes in dimension {dim}")
    candidates.sort(key=lambda c: (c[0], c[1], c[2]))
    _, _, s, flavor = candidates[0]
    return s, flavor


def _points_per_class(S: AnalyticSpacing, size: int) -> int:
    fixed = sum(1 if c.dim == 0 else 2 for c in S.classes if c.dim <= 1)
    flexible = sum(1 for c in S.classes if c.dim >= 2)
    if not flexible:
        return 1
    return max(1, math.ceil((size - fixed) / flexible))


def bench_verify(
    sizes: Sequence[int],
    classes: int = 4,
    dim: int = 8,
    repeats: int = 3,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> list[BenchRow]:
    """Median wall-clock time of both verifiers on sampled maximal spacings."""
    sizes = list(sizes)
    if not sizes or any(a >= b for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be a nonempty ascending list")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    s, flavor = bench_signature(classes, dim)
    S = from_signature(s, flavor, r=0.5)
    rows = []
    for size in sizes:
        Y = sample(S, _points_per_class(S, size), seed)
        verdicts = {}
        for name, fn in (("alg1", verify), ("naive", verify_naive)):
            times = []
            for _ in range(repeats):
                start = time.perf_counter()
                report = fn(Y, tol)
                times.append(time.perf_counter() - start)
            verdicts[name] = report.accepted
            rows.append(BenchRow(name, Y.point_count, len(Y), Y.dimension, repeats, statistics.median(times)))
        if verdicts["alg1"] != verdicts["naive"]:
            raise RuntimeError(f"verifiers disagree on the instance with {Y.point_count} points")
    return rows


# --- subcommands -------------------------------------------------------------


def cmd_verify(args) -> int:
    Y = _parse(args.input, point_set_from_json)
    report = (verify_naive if args.naive else verify)(Y, args.tol)
    _write(dumps(report.to_json()), args.output)
    return 0 if report.accepted else 1


def _flavor_for(s: Signature, requested: str) -> Flavor:
    placement = classify(s)
    if requested == "auto":
        if placement.in_S_eq is not None:
            return Flavor.COINCIDENT
        if placement.in_S_neq is not None:
            return Flavor.DISTINCT
        raise UsageError(f"{s} is not a valid signature")
    return Flavor(requested)


def cmd_construct(args) -> int:
    try:
        s = parse_signature(args.signature)
        flavor = _flavor_for(s, args.flavor)
        S = from_signature(s, flavor, args.r, args.dims_slack)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.samples is not None and args.points is None:
        raise UsageError("--samples needs --points to say where the sample goes")
    _write(dumps(spacing_to_json(S)), args.output)
    if args.samples is not None:
        if args.samples < 1:
            raise UsageError("--samples must be at least 1")
        Y = sample(S, args.samples, args.seed)
        _write(dumps(point_set_to_json(Y)), args.points)
    return 0


def enumerate_rows(N: int, family: str) -> list[tuple[str, str, int, int]]:
    rows = []
    if family in ("eq", "both"):
        for s in enumerate_eq(N):
            I, n = classify(s).in_S_eq
            rows.append(("eq", str(s), I, n))
    if family in ("neq", "both"):
        for s in enumerate_neq(N):
            I, n = classify(s).in_S_neq
            rows.append(("neq", str(s), I, n))
    return rows


def cmd_enumerate(args) -> int:
    if args.sum < 1:
        raise UsageError("--sum must be at least 1")
    rows = enumerate_rows(args.sum, args.family)
    if args.format == "json":
        text = dumps([dict(zip(ENUM_HEADER, row)) for row in rows])
    else:
        text = _csv(ENUM_HEADER, rows)
    _write(text, args.output)
    return 0


def cmd_count(args) -> int:
    if args.n < 0:
        raise UsageError("n must be nonnegative")
    counts = count_maximal(args.n)
    if args.format == "json":
        text = dumps({"n": args.n, "eq": counts.eq, "neq": counts.neq, "total": counts.total})
    elif args.format == "csv":
        text = _csv(["n", "eq", "neq", "total"], [(args.n, counts.eq, counts.neq, counts.total)])
    else:
        text = f"{counts}\n"
    _write(text, args.output)
    return 0


def cmd_sig(args) -> int:
    S = _load_spacing_like(args.input, args.tol)
    if not validate(S, args.tol):
        sys.stderr.write("input is not an equidistant spacing\n")
        return 1
    verdict = is_maximal(S, args.tol)
    if not verdict:
        sys.stderr.write(f"not maximal: {verdict.reason}\n")
        return 1
    s = sig_of(S, args.tol)
    _write(dumps(s.to_json()) if args.format == "json" else f"{s}\n", args.output)
    return 0


def cmd_glue(args) -> int:
    A = _parse(args.first, spacing_from_json)
    B = _parse(args.second, spacing_from_json)
    for S in (A, B):
        if not validate(S, args.tol):
            raise UsageError("glue inputs must be valid spacings")
    verdict = glueable(A, B, tol=args.tol)
    sys.stdout.write(dumps(verdict.to_json()))
    if not verdict:
        return 1
    if args.output:
        _write(dumps(spacing_to_json(embed(A, B, args.tol).spacing)), args.output)
    return 0


def cmd_normalize(args) -> int:
    S = _parse(args.input, spacing_from_json)
    if not 0 < args.r < math.sqrt(0.5):
        raise UsageError("--r must lie in (0, sqrt(1/2))")
    if not validate(S, args.tol):
        sys.stderr.write("input is not an equidistant spacing\n")
        return 1
    verdict = is_maximal(S, args.tol)
    if not verdict:
        sys.stderr.write(f"not maximal: {verdict.reason}\n")
        return 1
    out, record = to_equilateral_normal_form(S, args.r, args.tol)
    _write(dumps(spacing_to_json(out)), args.output)
    return 0


def _points_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        obj = obj["points"]
    pts = np.asarray(obj, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a list of equal-length coordinate lists")
    return pts


def cmd_orthocheck(args) -> int:
    X = _parse(args.input, _points_from_json)
    if X.shape[0] < 3:
        raise UsageError("need at least three points")
    rank = affine_rank(X, args.tol)
    ok, sol = orthocentric_verdict(X, args.tol)
    shape_ok = X.shape[0] == rank + 2
    report = {
        "orthocentric": bool(ok and shape_ok),
        "lambdas": sol.lambdas.tolist(),
        "residual": sol.residual,
        "reciprocal_sum": sol.reciprocal_sum,
        "affine_rank": rank,
    }
    if not shape_ok:
        report["reason"] = f"{X.shape[0]} points but affine rank {rank}; need rank + 2"
    _write(dumps(report), args.output)
    return 0 if report["orthocentric"] else 1


def cmd_sample(args) -> int:
    S = _parse(args.input, spacing_from_json)
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if not validate(S, 1e-8):
        sys.stderr.write("input is not an equidistant spacing\n")
        return 1
    _write(dumps(point_set_to_json(sample(S, args.samples, args.seed))), args.output)
    return 0


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_bench(args) -> int:
    try:
        rows = bench_verify(args.sizes, args.classes, args.dim, args.repeats, args.seed, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        text = dumps([asdict(row) for row in rows])
    else:
        text = _csv(BENCH_HEADER, [[getattr(row, k) for k in BENCH_HEADER] for row in rows])
    _write(text, args.output)
    return 0


# --- parser ------------------------------------------------------------------


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise UsageError(f"{TOL_ENV} must be a number, got {raw!r}") from exc
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return tol


def build_parser(default_tol: float = DEFAULT_TOL) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=default_tol, help="absolute tolerance (default %(default)g)")
    common.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="equispace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a labeled point set")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("--naive", action="store_true", help="use the all-pairs check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="build a spacing from a signature")
    p.add_argument("signature", help='e.g. "0;(2,1)"')
    p.add_argument("--flavor", choices=["auto", "coincident", "distinct"], default="auto")
    p.add_argument("--r", type=float, default=0.5, help="radius of the outer positive classes")
    p.add_argument("--dims-slack", type=int, default=0)
    p.add_argument("--samples", type=int, default=None, help="also sample this many points per class")
    p.add_argument("--points", default=None, help="where to write the sampled point set")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("enumerate", parents=[common], help="list signatures with a given sum")
    p.add_argument("--sum", type=int, required=True)
    p.add_argument("--family", choices=["eq", "neq", "both"], default="both")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", parents=[common], help="count maximal spacings in R^n")
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sig", parents=[common], help="signature of a maximal spacing")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_sig)

    p = sub.add_parser("glue", parents=[common], help="glue two spacings")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("normalize", parents=[common], help="equilateral normal form")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("--r", type=float, default=0.5)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("orthocheck", parents=[common], help="test for an orthocentric system")
    p.add_argument("-i", "--input", default="-")
    p.set_defaults(func=cmd_orthocheck)

    p = sub.add_parser("sample", parents=[common], help="sample points from an analytic spacing")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bench", parents=[common], help="time both verifiers")
    p.add_argument("--sizes", type=_int_list, default=[1000, 2000, 4000, 8000])
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(_default_tol())
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"equispace: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
