"""Command line entry point: ``taulab scan|mu-check|nested|relations|graph-export``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .cayley import build_graph
from .config import Config, ConfigError, ValidationError, default_config, parse_config, validate
from .matgroup import assert_no_short_relations
from .reduction import classify_primes, default_site, reduce_generators
from .verify import (
    CSV_COLUMNS,
    ExperimentReport,
    FreenessViolation,
    run_girth_experiment,
    run_mu_growth_check,
    run_nested_check,
)


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow([_csv_value(getattr(row, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def report_json(report: ExperimentReport, cfg: Optional[Config] = None) -> str:
    body = report.to_dict()
    body["passed"] = report.passed
    body["failures"] = report.failures
    body["version"] = __version__
    if cfg is not None:
        body["config"] = cfg.to_dict()
        body["seed"] = cfg.sampler.seed
    return json.dumps(_json_safe(body), indent=2, sort_keys=True) + "\n"


def emit_report(report: ExperimentReport, fmt: str, out: Path, cfg: Optional[Config] = None) -> list[Path]:
    """Write ``out`` with suffix .csv and/or .json; returns the paths written."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("csv", "both"):
        path = out.with_suffix(".csv")
        path.write_text(report_csv(report))
        written.append(path)
    if fmt in ("json", "both"):
        path = out.with_suffix(".json")
        path.write_text(report_json(report, cfg))
        written.append(path)
    return written


def resolve_config(args) -> Config:
    cfg = parse_config(args.config) if getattr(args, "config", None) else default_config()
    overrides = {
        "p_min": getattr(args, "p_min", None),
        "p_max": getattr(args, "p_max", None),
        "jobs": getattr(args, "jobs", None),
        "vertex_budget": getattr(args, "vertex_budget", None),
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "seed", None) is not None:
        cfg.sampler.seed = args.seed
    problems = validate(cfg)
    if problems:
        raise ValidationError(problems)
    return cfg


def cmd_scan(args) -> int:
    cfg = resolve_config(args)
    gs = cfg.generator_system()
    try:
        report = run_girth_experiment(
            gs,
            cfg.number_field(),
            cfg.p_min,
            cfg.p_max,
            vertex_budget=cfg.vertex_budget,
            spectral_tol=cfg.spectral_tol,
            sampler_trials=cfg.sampler.trials,
            seed=cfg.sampler.seed,
            relation_depth=cfg.relation_check_depth,
            jobs=cfg.jobs,
            spectral=not args.no_spectral,
            expansion=not args.no_expansion,
        )
    except FreenessViolation as err:
        print(f"aborted: {err}", file=sys.stderr)
        return 1
    if not args.skip_mu:
        mu = run_mu_growth_check(gs, cfg.mu_r_max, cfg.mu_trials, cfg.sampler.seed)
        report.mu_growth_pass = mu.passed
        report.mu_growth = dataclasses.asdict(mu)
    out = Path(args.output or cfg.output.json or cfg.output.csv or "scan")
    for path in emit_report(report, args.format, out, cfg):
        print(f"wrote {path}")
    checked = [r for r in report.rows if r.admissible]
    print(f"{len(checked)} admissible primes, {len(report.rows) - len(checked)} excluded, M={report.M:.12g} C={report.C:.12g}")
    if report.min_normalized_gap is not None:
        print(f"min gap {report.min_gap:.6g} (normalized {report.min_normalized_gap:.6g})")
    for line in report.failures:
        print(f"FAIL {line}")
    print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else 1


def cmd_mu_check(args) -> int:
    cfg = resolve_config(args)
    gs = cfg.generator_system()
    r_max = args.r_max if args.r_max is not None else cfg.mu_r_max
    trials = args.trials if args.trials is not None else cfg.mu_trials
    result = run_mu_growth_check(gs, r_max, trials, cfg.sampler.seed)
    print(result.summary())
    for line in result.violations[:20]:
        print(f"  {line}")
    return 0 if result.passed else 1


def cmd_nested(args) -> int:
    cfg = resolve_config(args)
    primes = args.primes or cfg.nested_primes
    if not primes:
        print("no primes given (use --primes or nested_primes in the config)", file=sys.stderr)
        return 2
    report = run_nested_check(cfg.generator_system(), primes, cfg.vertex_budget)
    for lv in report.levels:
        mark = "ok" if lv.surjective else "NOT SURJECTIVE"
        print(f"{'x'.join(map(str, lv.primes))}: {lv.closure_size}/{lv.full_order} {mark}")
    if report.note:
        print(report.note)
    return 0 if report.passed else 1


def cmd_relations(args) -> int:
    cfg = resolve_config(args)
    gs = cfg.generator_system(check=False)
    depth = args.depth if args.depth is not None else cfg.relation_check_depth
    rel = assert_no_short_relations(gs, depth)
    print(rel.summary())
    return 1 if rel.found else 0


def cmd_graph_export(args) -> int:
    cfg = resolve_config(args)
    gs = cfg.generator_system()
    status = classify_primes(cfg.number_field(), gs, args.p, args.p)
    if not status or not status[0].split:
        reason = status[0].reason if status else "not an odd prime"
        print(f"p={args.p} is not admissible: {reason}", file=sys.stderr)
        return 2
    site = default_site(status[0].sites)
    graph = build_graph(reduce_generators(site, gs), cfg.vertex_budget)
    out = Path(args.output or f"cayley_p{args.p}.edges")
    with open(out, "w") as fh:
        count = graph.write_edge_list(fh)
    print(f"wrote {out}: {graph.vertex_count} vertices, {count} edges")
    return 0


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taulab", description="Girth, surjectivity and expansion checks for mod-p Cayley graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: Sanov generators over Q, p in [3, 61])")
    common.add_argument("--p-min", type=int, help="smallest prime to scan (must be > 2)")
    common.add_argument("--p-max", type=int, help="largest prime to scan")
    common.add_argument("--jobs", type=int, help="worker processes for per-prime jobs")
    common.add_argument("--seed", type=int, help="seed for sampled words and subsets")
    common.add_argument("--vertex-budget", type=int, help="largest group order to build")

    p = sub.add_parser("scan", parents=[common], help="girth experiment over a prime range")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both", help="report format (default both)")
    p.add_argument("--output", help="output path stem; .csv/.json suffixes are added")
    p.add_argument("--no-spectral", action="store_true", help="skip the spectral gap column")
    p.add_argument("--no-expansion", action="store_true", help="skip the sampled expansion column")
    p.add_argument("--skip-mu", action="store_true", help="skip the house growth check")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("mu-check", parents=[common], help="house growth along random reduced words")
    p.add_argument("--r-max", type=int, help="longest word length")
    p.add_argument("--trials", type=int, help="words per length")
    p.set_defaults(func=cmd_mu_check)

    p = sub.add_parser("nested", parents=[common], help="surjectivity onto products of SL(2,p)")
    p.add_argument("--primes", type=_int_list, help="ascending comma separated primes, e.g. 3,5")
    p.set_defaults(func=cmd_nested)

    p = sub.add_parser("relations", parents=[common], help="search for short relations between the generators")
    p.add_argument("--depth", type=int, help="longest word length to check")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("graph-export", parents=[common], help="write the Cayley graph mod p as an edge list")
    p.add_argument("--p", type=int, required=True, help="prime")
    p.add_argument("--output", help="edge list path (default cayley_p<P>.edges)")
    p.set_defaults(func=cmd_graph_export)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("TAULAB_LOG", "WARNING").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
