"""Command-line surface: metric extraction, full analysis, single runners.

Exit codes: 0 clean, 1 nothing usable / global failure, 2 finished with
diagnostics (partial skips).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import __version__
from .corpus import export_metrics, ingest, load_manifest, parse_files
from .errors import CorpusError, InputError
from .inheritance import build_inheritance_graph
from .metrics import METRIC_NAMES, contract_metrics
from .pipeline import (
    RunConfig,
    rq1_redundancy,
    rq2_metric_vs_vulnerability,
    rq3_discriminative,
    rq4_interval_comparison,
    run_analysis,
)
from .reports import hash_outputs, write_report, write_run_manifest, write_section

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIAGNOSTICS = 2


def _formats(value: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in value.split(",") if p.strip())
    unknown = set(parts) - {"csv", "json", "md"}
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown format(s): {', '.join(sorted(unknown))}")
    return parts


def _add_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--manifest", required=True, help="corpus manifest CSV")
    sub.add_argument("--root", required=True, help="source root for manifest paths")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--ci-level", type=float, default=0.95)
    sub.add_argument("--redundancy-threshold", type=float, default=0.9)
    sub.add_argument("--significance", type=float, default=0.05)
    sub.add_argument("--format", type=_formats, default=("csv", "json", "md"))
    sub.add_argument("--jobs", type=int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solmetrics",
        description="Solidity complexity metrics and vulnerability statistics",
    )
    parser.add_argument("--version", action="version", version=f"solmetrics {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_metrics = subs.add_parser("metrics", help="print per-contract metric rows as CSV")
    p_metrics.add_argument("paths", nargs="+", help=".sol files to analyze")
    p_metrics.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p_analyze = subs.add_parser("analyze", help="run all four analyses over a labeled corpus")
    _add_run_flags(p_analyze)

    for key in ("rq1", "rq2", "rq3", "rq4"):
        p_single = subs.add_parser(key, help=f"run only the {key} analysis")
        _add_run_flags(p_single)

    p_export = subs.add_parser("export", help="ingest a corpus and export the metric table")
    _add_run_flags(p_export)

    return parser


def cmd_metrics(paths: list[str], jobs: int) -> int:
    parsed = parse_files("", list(paths), jobs)
    diagnostics: list[str] = []
    units = []
    for pf in parsed:
        if pf.error is not None:
            diagnostics.append(f"{pf.file}:1: {pf.error}")
            continue
        assert pf.unit is not None
        diagnostics.extend(str(d) for d in pf.unit.diagnostics)
        units.append(pf)
    try:
        graph = build_inheritance_graph([pf.unit for pf in units])
    except CorpusError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    rows = []
    for pf in units:
        for contract in pf.unit.contracts:
            lines, _ = pf.per_contract[contract.name]
            metrics = contract_metrics(contract, lines, graph, pf.file)
            rows.append((pf.file, contract.name, metrics))
    rows.sort(key=lambda r: (r[0], r[1]))
    for message in diagnostics:
        print(message, file=sys.stderr)
    if not rows:
        print("no parsable contract in any input", file=sys.stderr)
        return EXIT_ERROR
    writer = csv.writer(sys.stdout)
    writer.writerow(("file", "contract") + METRIC_NAMES)
    for file, name, metrics in rows:
        writer.writerow(
            [file, name]
            + [repr(v) if isinstance(v, float) else str(v) for v in metrics.as_row()]
        )
    return EXIT_DIAGNOSTICS if diagnostics else EXIT_OK


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        source_root=args.root,
        manifest=args.manifest,
        output_dir=args.out,
        seed=args.seed,
        ci_level=args.ci_level,
        redundancy_threshold=args.redundancy_threshold,
        significance=args.significance,
        formats=args.format,
        jobs=args.jobs,
    )


def _ingest_for(config: RunConfig):
    manifest = load_manifest(config.manifest)
    contract_set = ingest(manifest, config.source_root, config.jobs)
    for message in contract_set.diagnostics:
        print(message, file=sys.stderr)
    return contract_set


def cmd_analyze(config: RunConfig) -> int:
    contract_set = _ingest_for(config)
    report = run_analysis(contract_set, config)
    outputs = write_report(report, config.output_dir, config.formats)
    write_run_manifest(config.output_dir, report.config, __version__, outputs)
    return EXIT_DIAGNOSTICS if contract_set.diagnostics else EXIT_OK


def cmd_single(key: str, config: RunConfig) -> int:
    contract_set = _ingest_for(config)
    alpha = config.significance
    if key == "rq1":
        section = rq1_redundancy(contract_set, config.redundancy_threshold, alpha)
    elif key == "rq2":
        section = rq2_metric_vs_vulnerability(contract_set, alpha)
    elif key == "rq3":
        section = rq3_discriminative(contract_set, config.seed, alpha)
    else:
        section = rq4_interval_comparison(contract_set, config.ci_level)
    written = write_section(key, section, config.output_dir, config.formats)
    outputs = hash_outputs(config.output_dir, written)
    config_dict = {
        "source_root": config.source_root,
        "manifest": config.manifest,
        "seed": config.seed,
        "ci_level": config.ci_level,
        "redundancy_threshold": config.redundancy_threshold,
        "significance": config.significance,
        "dataset": {
            "manifest_path": contract_set.provenance[0],
            "sha256": contract_set.provenance[1],
            "n_vulnerable": contract_set.n_vulnerable,
            "n_neutral": contract_set.n_neutral,
        },
    }
    write_run_manifest(config.output_dir, config_dict, __version__, outputs)
    return EXIT_DIAGNOSTICS if contract_set.diagnostics else EXIT_OK


def cmd_export(config: RunConfig) -> int:
    contract_set = _ingest_for(config)
    os.makedirs(config.output_dir, exist_ok=True)
    formats = [f for f in config.formats if f in ("csv", "json")] or ["csv"]
    for fmt in formats:
        export_metrics(contract_set, os.path.join(config.output_dir, f"metrics.{fmt}"), fmt)
    return EXIT_DIAGNOSTICS if contract_set.diagnostics else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "metrics":
            return cmd_metrics(args.paths, args.jobs)
        config = _config_from_args(args)
        if args.command == "analyze":
            return cmd_analyze(config)
        if args.command in ("rq1", "rq2", "rq3", "rq4"):
            return cmd_single(args.command, config)
        if args.command == "export":
            return cmd_export(config)
    except (CorpusError, InputError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    parser.error(f"unknown command {args.command!r}")
    return EXIT_ERROR


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
