from __future__ import annotations

import pytest

from solmetrics.inheritance import build_inheritance_graph
from solmetrics.lexer import tokenize
from solmetrics.metrics import ContractMetrics, contract_metrics
from solmetrics.parser import line_accounting, parse_file


def metrics_for(source: str, path: str = "test.sol") -> dict[str, ContractMetrics]:
    """Parse one file and compute the metric vector of every contract."""
    tokens = tokenize(source)
    unit = parse_file(tokens, path)
    graph = build_inheritance_graph([unit])
    out = {}
    for contract in unit.contracts:
        lines = line_accounting(source, contract, tokens)
        out[contract.name] = contract_metrics(contract, lines, graph, path)
    return out


@pytest.fixture
def make_corpus(tmp_path):
    """Write .sol files plus a manifest; returns (manifest_path, root)."""

    def _make(files: dict[str, str], entries: list[tuple[str, str, str, str | None]]):
        root = tmp_path / "corpus"
        root.mkdir(exist_ok=True)
        for name, text in files.items():
            (root / name).write_text(text, encoding="utf-8")
        lines = ["file,contract,label,type"]
        for file, contract, label, vuln_type in entries:
            lines.append(f"{file},{contract},{label},{vuln_type or ''}")
        manifest = tmp_path / "manifest.csv"
        manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(manifest), str(root)

    return _make
