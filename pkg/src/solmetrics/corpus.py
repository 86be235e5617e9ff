"""Labeled corpus ingestion: manifest loading, dedupe, metric extraction.

The manifest is a header-prefixed CSV (``file,contract,label,type``) that
maps source files to per-contract vulnerability labels. Ingestion parses
every referenced file once, deduplicates contracts by a hash of their
comment- and whitespace-normalized text, builds the corpus-wide
inheritance graph, and joins the metric vectors with the labels.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import CorpusError, LexError
from .inheritance import build_inheritance_graph
from .lexer import Token, tokenize
from .metrics import METRIC_NAMES, ContractMetrics, contract_metrics
from .nodes import ContractDef, LineCounts, SourceUnit
from .parser import line_accounting, parse_file

LABEL_VULNERABLE = "vulnerable"
LABEL_NEUTRAL = "neutral"

# timestamp dependency, block number dependency, dangerous delegatecall,
# Ether frozen, unchecked external call, reentrancy, integer overflow,
# dangerous Ether strict equality
VULNERABILITY_TYPES = frozenset({"TP", "BN", "DG", "EF", "UC", "RE", "OF", "SE"})

MANIFEST_HEADER = ("file", "contract", "label", "type")


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    contract: str
    label: str
    vuln_type: str | None = None


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]
    path: str
    content_hash: str


@dataclass(frozen=True)
class ContractRow:
    file: str
    contract: str
    metrics: ContractMetrics
    label: str
    vuln_type: str | None = None

    @property
    def contract_id(self) -> str:
        return f"{self.file}:{self.contract}"


@dataclass
class LabeledContractSet:
    rows: list[ContractRow]
    n_vulnerable: int
    n_neutral: int
    provenance: tuple[str, str] = field(default=("", ""), compare=False)
    diagnostics: list[str] = field(default_factory=list, compare=False)

    @property
    def counts(self) -> tuple[int, int]:
        return (self.n_vulnerable, self.n_neutral)


def load_manifest(path: str) -> CorpusManifest:
    """Load and validate a corpus manifest.

    Rejects unknown labels, misplaced or unknown vulnerability type tags,
    and duplicate (file, contract) keys, naming the offending row.
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CorpusError(f"cannot read manifest {path!r}: {exc}") from exc
    content_hash = hashlib.sha256(raw).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"manifest {path!r} is not valid UTF-8") from exc
    entries: list[ManifestEntry] = []
    seen: set[tuple[str, str]] = set()
    lines = text.splitlines()
    if not lines:
        return CorpusManifest((), path, content_hash)
    header = tuple(part.strip() for part in lines[0].split(","))
    if header != MANIFEST_HEADER:
        raise CorpusError(
            f"manifest row 1: expected header {','.join(MANIFEST_HEADER)!r}, got {lines[0]!r}"
        )
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) not in (3, 4):
            raise CorpusError(f"manifest row {lineno}: expected 3 or 4 fields, got {len(parts)}")
        file, contract, label = parts[0], parts[1], parts[2]
        vuln_type = parts[3] if len(parts) == 4 and parts[3] else None
        if not file or not contract:
            raise CorpusError(f"manifest row {lineno}: empty file or contract name")
        if label not in (LABEL_VULNERABLE, LABEL_NEUTRAL):
            raise CorpusError(f"manifest row {lineno}: unknown label {label!r}")
        if vuln_type is not None:
            if label != LABEL_VULNERABLE:
                raise CorpusError(
                    f"manifest row {lineno}: type tag only allowed on vulnerable rows"
                )
            if vuln_type not in VULNERABILITY_TYPES:
                raise CorpusError(f"manifest row {lineno}: unknown vulnerability type {vuln_type!r}")
        key = (file, contract)
        if key in seen:
            raise CorpusError(f"manifest row {lineno}: duplicate entry for {file}:{contract}")
        seen.add(key)
        entries.append(ManifestEntry(file, contract, label, vuln_type))
    return CorpusManifest(tuple(entries), path, content_hash)


def normalized_contract_text(tokens: list[Token], contract: ContractDef) -> str:
    """Comment-stripped, whitespace-normalized text of one contract span."""
    first, last = contract.span
    parts = [
        t.text
        for t in tokens
        if not t.is_comment and first <= t.start_line and t.end_line <= last
    ]
    return " ".join(parts)


@dataclass
class _ParsedFile:
    file: str
    error: str | None = None
    unit: SourceUnit | None = None
    per_contract: dict[str, tuple[LineCounts, str]] = field(default_factory=dict)


def _parse_sol_file(args: tuple[str, str]) -> _ParsedFile:
    root, file = args
    full = os.path.join(root, file)
    try:
        with open(full, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        return _ParsedFile(file, error=f"unreadable file: {exc}")
    try:
        source = raw.decode("utf-8")
    except UnicodeDecodeError:
        return _ParsedFile(file, error="not valid UTF-8")
    try:
        tokens = tokenize(source)
    except LexError as exc:
        return _ParsedFile(file, error=f"lex error: {exc}")
    unit = parse_file(tokens, file)
    per_contract = {}
    for contract in unit.contracts:
        lines = line_accounting(source, contract, tokens)
        digest = hashlib.sha256(
            normalized_contract_text(tokens, contract).encode("utf-8")
        ).hexdigest()
        per_contract[contract.name] = (lines, digest)
    return _ParsedFile(file, unit=unit, per_contract=per_contract)


def parse_files(root: str, files: list[str], jobs: int = 1) -> list[_ParsedFile]:
    """Parse many files, optionally across processes, preserving input order."""
    tasks = [(root, f) for f in files]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_parse_sol_file, tasks, chunksize=16))
    return [_parse_sol_file(t) for t in tasks]


def ingest(
    manifest: CorpusManifest, source_root: str, jobs: int = 1
) -> LabeledContractSet:
    """Run the frontend and metric engine over every manifest entry.

    Each entry either becomes a row or a skip diagnostic; duplicate
    contract bodies keep their first occurrence. Raises
    :class:`CorpusError` when more than half of the entries skip for
    reasons other than deduplication, or on an inheritance cycle.
    """
    files: list[str] = []
    for entry in manifest.entries:
        if entry.file not in files:
            files.append(entry.file)
    parsed = {pf.file: pf for pf in parse_files(source_root, files, jobs)}

    diagnostics: list[str] = []
    for file in files:
        pf = parsed[file]
        if pf.unit is not None:
            diagnostics.extend(str(d) for d in pf.unit.diagnostics)

    units = [pf.unit for pf in parsed.values() if pf.unit is not None]
    graph = build_inheritance_graph(units)

    rows: list[ContractRow] = []
    seen_hashes: dict[str, str] = {}
    error_skips = 0
    for entry in manifest.entries:
        pf = parsed[entry.file]
        if pf.error is not None:
            diagnostics.append(f"{entry.file}:{entry.contract}: skipped ({pf.error})")
            error_skips += 1
            continue
        assert pf.unit is not None
        contract = next((c for c in pf.unit.contracts if c.name == entry.contract), None)
        if contract is None:
            diagnostics.append(f"{entry.file}:{entry.contract}: skipped (contract not found)")
            error_skips += 1
            continue
        lines, digest = pf.per_contract[entry.contract]
        if digest in seen_hashes:
            diagnostics.append(
                f"{entry.file}:{entry.contract}: duplicate of {seen_hashes[digest]}"
            )
            continue
        seen_hashes[digest] = f"{entry.file}:{entry.contract}"
        metrics = contract_metrics(contract, lines, graph, entry.file)
        rows.append(ContractRow(entry.file, entry.contract, metrics, entry.label, entry.vuln_type))

    if len(manifest.entries) > 1 and error_skips / len(manifest.entries) > 0.5:
        raise CorpusError(
            f"corpus unusable: {error_skips} of {len(manifest.entries)} entries skipped"
        )
    rows.sort(key=lambda r: (r.file, r.contract))
    n_vulnerable = sum(1 for r in rows if r.label == LABEL_VULNERABLE)
    return LabeledContractSet(
        rows=rows,
        n_vulnerable=n_vulnerable,
        n_neutral=len(rows) - n_vulnerable,
        provenance=(manifest.path, manifest.content_hash),
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# metric table export / import

EXPORT_HEADER = ("file", "contract") + METRIC_NAMES + ("label", "type")

_INT_METRICS = METRIC_NAMES[:15]


def export_metrics(contract_set: LabeledContractSet, path: str, fmt: str = "csv") -> str:
    """Write the joined metric/label table; returns the path written."""
    if not contract_set.rows:
        raise CorpusError("cannot export an empty contract set")
    rows = sorted(contract_set.rows, key=lambda r: (r.file, r.contract))
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(EXPORT_HEADER)
            for row in rows:
                writer.writerow(
                    [row.file, row.contract]
                    + [repr(v) if isinstance(v, float) else str(v) for v in row.metrics.as_row()]
                    + [row.label, row.vuln_type or ""]
                )
    elif fmt == "json":
        payload = {
            "provenance": {
                "manifest": contract_set.provenance[0],
                "sha256": contract_set.provenance[1],
            },
            "counts": {
                "vulnerable": contract_set.n_vulnerable,
                "neutral": contract_set.n_neutral,
            },
            "rows": [
                {
                    "file": row.file,
                    "contract": row.contract,
                    "metrics": row.metrics.as_dict(),
                    "label": row.label,
                    "type": row.vuln_type,
                }
                for row in rows
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise CorpusError(f"unknown export format {fmt!r}")
    return path


def import_metrics(path: str, fmt: str = "csv") -> LabeledContractSet:
    """Read a table produced by :func:`export_metrics` back into a set."""
    rows: list[ContractRow] = []
    if fmt == "csv":
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader))
            if header != EXPORT_HEADER:
                raise CorpusError(f"unexpected export header in {path!r}")
            for record in reader:
                file, contract = record[0], record[1]
                values = record[2 : 2 + len(METRIC_NAMES)]
                label, vuln_type = record[-2], record[-1] or None
                kwargs = {}
                for name, value in zip(METRIC_NAMES, values):
                    kwargs[name] = int(value) if name in _INT_METRICS else float(value)
                rows.append(
                    ContractRow(file, contract, ContractMetrics(**kwargs), label, vuln_type)
                )
    elif fmt == "json":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        for item in payload["rows"]:
            kwargs = {
                name: (int(v) if name in _INT_METRICS else float(v))
                for name, v in item["metrics"].items()
            }
            rows.append(
                ContractRow(
                    item["file"],
                    item["contract"],
                    ContractMetrics(**kwargs),
                    item["label"],
                    item.get("type"),
                )
            )
    else:
        raise CorpusError(f"unknown import format {fmt!r}")
    with open(path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    n_vulnerable = sum(1 for r in rows if r.label == LABEL_VULNERABLE)
    return LabeledContractSet(
        rows=rows,
        n_vulnerable=n_vulnerable,
        n_neutral=len(rows) - n_vulnerable,
        provenance=(path, digest),
    )
