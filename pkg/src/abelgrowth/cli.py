"""Command-line front end: ``abelgrowth compute|compare|witness|verify|oracle``.

Exit codes: 0 ok, 1 a verified property failed, 2 unreadable or malformed
input, 3 the generators do not (provably) generate, 4 a resource cap was hit,
5 symmetric witnesses requested for torsion orders of different parity.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import bounds, documents, formulas, witnesses
from .documents import IngestionError
from .groups import GroupError, check_generates, is_closed_under_inverse, order_le2_census
from .growth import (
    GrowthSeries,
    ResourceCapExceeded,
    bfs_growth,
    default_coord_bits,
    default_mem_cap,
    series_equal,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INGEST = 2
EXIT_GENERATION = 3
EXIT_RESOURCE = 4
EXIT_PARITY = 5

CHECKS = ("phi", "reduction", "min-growth", "parity", "counterexample", "diophantine")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    command: str
    radius: int | None
    mem_cap: int
    coord_bits: int
    check_generation: bool
    window: tuple[int, int] | None = None

    def __post_init__(self):
        if self.radius is not None and self.radius < 0:
            raise CliError(EXIT_INGEST, "radius must be >= 0")
        if self.window is not None:
            lo, hi = self.window
            if lo < 0 or hi < lo:
                raise CliError(EXIT_INGEST, f"bad window {lo}:{hi}")
            if self.radius is not None and hi > self.radius:
                raise CliError(EXIT_INGEST, f"window end {hi} exceeds radius {self.radius}")

    @property
    def bfs_kw(self) -> dict:
        return {"mem_cap": self.mem_cap, "coord_bits": self.coord_bits}


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like A:B, got {text!r}") from None
    return lo, hi


def _config(args, radius=None, window=None) -> RunConfig:
    return RunConfig(
        command=args.command,
        radius=radius,
        mem_cap=args.mem_cap,
        coord_bits=args.coord_bits,
        check_generation=not args.no_check,
        window=window,
    )


def _ratio(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _load(path: str, cfg: RunConfig):
    spec, S = documents.load(path)
    if cfg.check_generation:
        verdict = check_generates(spec, list(S))
        if not verdict.generates:
            raise CliError(EXIT_GENERATION, f"{path}: generators rejected ({verdict.reason})")
    return spec, S


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _series_text(series: GrowthSeries, fmt: str, **metadata) -> str:
    if fmt == "csv":
        return series.to_csv()
    return series.to_json(**metadata)


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(args) -> int:
    cfg = _config(args, radius=args.radius)
    spec, S = _load(args.spec, cfg)
    series = bfs_growth(spec, S, cfg.radius, **cfg.bfs_kw)
    doc = documents.spec_to_doc(spec, S)
    _emit(_series_text(series, args.format, spec=doc, spec_sha256=documents.doc_hash(doc)), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    if len(args.spec) != 2:
        raise CliError(EXIT_INGEST, "compare needs exactly two --spec arguments")
    cfg = _config(args, radius=args.radius)
    series = [bfs_growth(*_load(path, cfg), cfg.radius, **cfg.bfs_kw) for path in args.spec]
    print(series_equal(series[0], series[1], cfg.radius))
    return EXIT_OK


def cmd_witness(args) -> int:
    cfg = _config(args, radius=args.radius)
    tokens = [t for t in args.torsion.split(",") if t.strip()]
    groups = [documents.parse_torsion(t) for t in tokens]
    if args.regime == "symmetric":
        if len(groups) != 2:
            raise CliError(EXIT_INGEST, "symmetric regime needs exactly two torsion groups")
        result = witnesses.witness_symmetric(groups[0], groups[1], d=args.rank, radius=cfg.radius)
        extra = {"regime": result.regime}
    else:
        result = witnesses.witness_monoid(groups, d=args.rank, K=args.common_multiple, radius=cfg.radius)
        extra = {"regime": result.regime, "common_multiple": result.K}

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    hashes = []
    for i, (token, w) in enumerate(zip(tokens, result.members), start=1):
        if not w.verdict.generates:
            print(f"warning: set for {token} does not generate ({w.verdict.reason})", file=sys.stderr)
        doc = documents.spec_to_doc(w.spec, w.gens)
        path = out / f"witness_{i}.json"
        path.write_text(documents.dumps(doc))
        hashes.append(documents.doc_hash(doc))
        print(path)
    path = out / "predicted.json"
    path.write_text(
        result.predicted_sigma.to_json(torsion=tokens, rank=args.rank, spec_sha256=hashes, **extra)
    )
    print(path)
    return EXIT_OK


def _verify_phi(args, cfg) -> dict:
    spec, S = _load(args.spec, cfg)
    if spec.torsion.order != 1:
        raise CliError(EXIT_INGEST, "phi check needs a spec with trivial torsion")
    ctx = bounds.build_phi(S)
    rep = bounds.verify_phi(ctx, args.box, cfg.radius if cfg.radius is not None else 20)
    return {
        "pass": rep.ok,
        "E": [list(e) for e in ctx.E],
        "minimizers": [list(v) for v in ctx.minimizers],
        "box": rep.box,
        "radius": rep.radius,
        "injective": rep.injective,
        "collisions": [[list(a), list(b)] for a, b in rep.collisions],
        "containment_violations": [[list(x), n] for x, n in rep.containment_violations],
        "reconstruction_violations": [list(x) for x in rep.reconstruction_violations],
        "beta_S": list(rep.beta_S),
        "beta_plus": list(rep.beta_plus),
    }


def _dominance(rep: bounds.DominanceReport) -> dict:
    return {
        "pass": rep.ok,
        "start": rep.start,
        "violations": rep.violations,
        "strict_from": rep.strict_from,
        "beta": list(rep.beta),
        "reference": list(rep.reference),
    }


def _verify_reduction(args, cfg) -> dict:
    spec, S = _load(args.spec, cfg)
    if spec.rank < 1:
        raise CliError(EXIT_INGEST, "reduction check needs rank >= 1")
    R = cfg.radius if cfg.radius is not None else 40
    return _dominance(bounds.reduction_inequality(spec, S, R))


def _verify_min_growth(args, cfg) -> dict:
    spec, S = _load(args.spec, cfg)
    R = cfg.radius if cfg.radius is not None else 40
    symmetric = is_closed_under_inverse(spec, S)
    if symmetric:
        base = bounds.symmetric_min_growth(spec, S, R)
    else:
        base = bounds.monoid_min_growth(spec, S, R)
    chain = bounds.min_growth_chain(spec, S, R)
    report = {
        "pass": base.ok and chain.ok,
        "mode": "symmetric" if symmetric else "monoid",
        "standard": _dominance(base),
        "chain": _dominance(chain),
    }
    if cfg.window is not None and spec.rank >= 1:
        tb = bounds.torsion_upper_bound(base.beta, spec.rank, cfg.window, "symmetric" if symmetric else "monoid")
        report["torsion_bound"] = {
            "window": list(tb.window),
            "max_ratio": _ratio(tb.max_ratio),
            "argmax": tb.argmax,
            "candidate": tb.candidate,
            "torsion_order": spec.torsion.order,
            "note": tb.note,
        }
        if cfg.window[0] >= 2:
            est = bounds.rank_estimate(base.beta, cfg.window)
            report["rank_estimate"] = {
                "degree": est.degree,
                "slope": f"{est.slope:.4f}",
                "rank": spec.rank,
            }
    return report


def _verify_parity(args, cfg) -> dict:
    spec, S = _load(args.spec, cfg)
    if S.kind != "symmetric":
        raise CliError(EXIT_INGEST, "parity check needs a symmetric generating set")
    residue, threshold = formulas.parity_prediction(spec, S)
    R = cfg.radius if cfg.radius is not None else 50
    beta = bfs_growth(spec, S, R, **cfg.bfs_kw).beta
    exceptions = [r for r in range(threshold, R + 1) if beta[r] % 2 != residue]
    return {
        "pass": not exceptions,
        "census": order_le2_census(spec),
        "residue": residue,
        "threshold": threshold,
        "radius": R,
        "exceptions": exceptions,
    }


def _verify_counterexample(args, cfg) -> dict:
    if args.rank is not None:
        d = args.rank
    elif args.spec:
        d = documents.load(args.spec)[0].rank
    else:
        d = 1
    rep = bounds.converse_counterexample(d)
    return {
        "pass": rep.ok,
        "rank": d,
        "torsion_order": rep.torsion_order,
        "beta_G_1": rep.beta_G_1,
        "expected_beta_G_1": d + 3,
        "torsion_generators_needed": rep.torsion_generators_needed,
        "group_generators_needed": rep.group_generators_needed,
        "tight_set_size": rep.tight_set_size,
        "tight_beta_1": rep.tight_beta_1,
    }


def _verify_diophantine(args, cfg) -> dict:
    rep = witnesses.diophantine_uniqueness(args.bound)
    return {
        "pass": rep.ok,
        "bound": rep.bound,
        "solutions": rep.solutions,
        "nontrivial": [list(s) for s in rep.nontrivial[:20]],
        "literal_exceptions": rep.literal_exceptions,
    }


_VERIFIERS = {
    "phi": _verify_phi,
    "reduction": _verify_reduction,
    "min-growth": _verify_min_growth,
    "parity": _verify_parity,
    "counterexample": _verify_counterexample,
    "diophantine": _verify_diophantine,
}


def cmd_verify(args) -> int:
    cfg = _config(args, radius=args.radius, window=args.window)
    if args.check in ("phi", "reduction", "min-growth", "parity") and not args.spec:
        raise CliError(EXIT_INGEST, f"--check {args.check} needs --spec")
    report = {"check": args.check, **_VERIFIERS[args.check](args, cfg)}
    print(json.dumps(report, sort_keys=True, indent=2))
    return EXIT_OK if report["pass"] else EXIT_FAILED


def cmd_oracle(args) -> int:
    cfg = _config(args, radius=args.radius)
    series = formulas.standard_series(args.rank, cfg.radius, plus=args.what == "beta-std-plus")
    _emit(_series_text(series, args.format, oracle=args.what, rank=args.rank), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelgrowth", description=__doc__.splitlines()[0])
    parser.add_argument("--mem-cap", type=int, default=default_mem_cap(), help="BFS memory cap in bytes")
    parser.add_argument("--coord-bits", type=int, default=default_coord_bits(), help="key width for BFS packing")
    parser.add_argument("--no-check", action="store_true", help="skip the generation check on ingested specs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="growth series of one group-spec document")
    p.add_argument("--spec", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("compare", help="compare the growth of two documents")
    p.add_argument("--spec", action="append", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("witness", help="emit equal-growth generating sets")
    p.add_argument("--regime", choices=("symmetric", "monoid"), required=True)
    p.add_argument("--torsion", required=True, help="comma list: 1, 4, 2x2, S3, ...")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--common-multiple", type=int)
    p.add_argument("--radius", type=int, default=50, help="length of the predicted series")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run a named check and print a JSON report")
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--spec")
    p.add_argument("--radius", type=int)
    p.add_argument("--box", type=int, default=15)
    p.add_argument("--window", type=_window)
    p.add_argument("--rank", type=int)
    p.add_argument("--bound", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="closed-form standard growth series")
    p.add_argument("--what", choices=("beta-std", "beta-std-plus"), required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except witnesses.ParityMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARITY
    except (ResourceCapExceeded, OverflowError, MemoryError) as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (GroupError, bounds.BoundsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGEST


if __name__ == "__main__":
    sys.exit(main())
