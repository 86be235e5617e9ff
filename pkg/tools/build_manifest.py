#!/usr/bin/env python3
"""Build a corpus manifest from a tree of .sol files.

Walks a source root, parses every file to enumerate its contracts, and
writes the `file,contract,label,type` manifest the analyzer consumes.
Labels come from an optional labels CSV; anything unlabeled gets
--default-label.

Labels CSV rows are either per-contract or per-file:

    file,contract,label[,type]     one contract in that file
    file,label[,type]              every contract in that file

Example:

    python3 tools/build_manifest.py dataset/contracts \\
        --labels dataset/labels.csv --out dataset/manifest.csv

The resulting directory (manifest.csv next to the source tree root given
here) is what SOLMETRICS_DATASET should point at for the dataset-gated
acceptance tests.
"""

from __future__ import annotations

import argparse
import os
import sys

from solmetrics.corpus import LABEL_NEUTRAL, LABEL_VULNERABLE, VULNERABILITY_TYPES
from solmetrics.errors import LexError
from solmetrics.lexer import tokenize
from solmetrics.parser import parse_file

LABELS = (LABEL_VULNERABLE, LABEL_NEUTRAL)


def load_labels(path: str) -> tuple[dict, dict]:
    per_contract: dict[tuple[str, str], tuple[str, str]] = {}
    per_file: dict[str, tuple[str, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if lineno == 1 and parts[0] == "file":
                continue  # header
            if len(parts) >= 3 and parts[2] in LABELS:
                file, contract, label = parts[0], parts[1], parts[2]
                vuln_type = parts[3] if len(parts) > 3 else ""
                per_contract[(file, contract)] = (label, vuln_type)
            elif len(parts) >= 2 and parts[1] in LABELS:
                file, label = parts[0], parts[1]
                vuln_type = parts[2] if len(parts) > 2 else ""
                per_file[file] = (label, vuln_type)
            else:
                sys.exit(f"{path}:{lineno}: cannot interpret label row: {line!r}")
    return per_contract, per_file


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("root", help="directory tree of .sol files")
    parser.add_argument("--labels", help="labels CSV (per-contract or per-file rows)")
    parser.add_argument("--out", default="manifest.csv", help="manifest path to write")
    parser.add_argument("--default-label", default=LABEL_NEUTRAL, choices=LABELS)
    args = parser.parse_args(argv)

    per_contract, per_file = ({}, {})
    if args.labels:
        per_contract, per_file = load_labels(args.labels)

    rows: list[str] = []
    skipped: list[str] = []
    counts = {LABEL_VULNERABLE: 0, LABEL_NEUTRAL: 0}
    for dirpath, dirnames, filenames in os.walk(args.root):
        dirnames.sort()
        for name in sorted(filenames):
            if not name.endswith(".sol"):
                continue
            full = os.path.join(dirpath, name)
            rel = os.path.relpath(full, args.root)
            try:
                with open(full, "rb") as fh:
                    source = fh.read().decode("utf-8")
                unit = parse_file(tokenize(source), rel)
            except (OSError, UnicodeDecodeError, LexError) as exc:
                skipped.append(f"{rel}: {exc}")
                continue
            for contract in unit.contracts:
                label, vuln_type = per_contract.get(
                    (rel, contract.name),
                    per_file.get(rel, (args.default_label, "")),
                )
                if label == LABEL_NEUTRAL:
                    vuln_type = ""
                if vuln_type and vuln_type not in VULNERABILITY_TYPES:
                    skipped.append(f"{rel}:{contract.name}: unknown type {vuln_type!r}")
                    vuln_type = ""
                rows.append(f"{rel},{contract.name},{label},{vuln_type}")
                counts[label] += 1

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("file,contract,label,type\n")
        fh.write("\n".join(rows) + ("\n" if rows else ""))

    print(
        f"wrote {len(rows)} entries to {args.out} "
        f"({counts[LABEL_VULNERABLE]} vulnerable, {counts[LABEL_NEUTRAL]} neutral)"
    )
    for message in skipped:
        print(f"skipped {message}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
