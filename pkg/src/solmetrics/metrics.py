"""Per-contract complexity metric vectors.

The 21 components: source/logical/comment line counts, function count,
weighted (strict) cyclomatic sum, nesting depths, parameter/statement/
invocation counts, inheritance-tree metrics, coupling and attribute
counts, plus six per-function averages.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields

from .inheritance import InheritanceGraph
from .lexer import KEYWORDS, is_elementary_type
from .nodes import (
    BLOCK,
    IF,
    LOOP_KINDS,
    NON_COUNTING_KINDS,
    ContractDef,
    FunctionDef,
    LineCounts,
    Statement,
)

METRIC_NAMES: tuple[str, ...] = (
    "sloc",
    "lloc",
    "cloc",
    "nf",
    "wmc",
    "nl",
    "nle",
    "numpar",
    "nos",
    "dit",
    "noa",
    "nod",
    "cbo",
    "na",
    "noi",
    "avg_mccc",
    "avg_nl",
    "avg_nle",
    "avg_numpar",
    "avg_nos",
    "avg_noi",
)

DISPLAY_NAMES: dict[str, str] = {
    "sloc": "SLOC",
    "lloc": "LLOC",
    "cloc": "CLOC",
    "nf": "NF",
    "wmc": "WMC",
    "nl": "NL",
    "nle": "NLE",
    "numpar": "NUMPAR",
    "nos": "NOS",
    "dit": "DIT",
    "noa": "NOA",
    "nod": "NOD",
    "cbo": "CBO",
    "na": "NA",
    "noi": "NOI",
    "avg_mccc": "Avg. McCC",
    "avg_nl": "Avg. NL",
    "avg_nle": "Avg. NLE",
    "avg_numpar": "Avg. NUMPAR",
    "avg_nos": "Avg. NOS",
    "avg_noi": "Avg. NOI",
}


@dataclass(frozen=True)
class FunctionMetrics:
    mccc: int
    mccc_strict: int
    nl: int
    nle: int
    numpar: int
    nos: int
    noi: int


@dataclass(frozen=True)
class ContractMetrics:
    sloc: int
    lloc: int
    cloc: int
    nf: int
    wmc: int
    nl: int
    nle: int
    numpar: int
    nos: int
    dit: int
    noa: int
    nod: int
    cbo: int
    na: int
    noi: int
    avg_mccc: float
    avg_nl: float
    avg_nle: float
    avg_numpar: float
    avg_nos: float
    avg_noi: float

    def as_dict(self) -> dict[str, int | float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def as_row(self) -> list[int | float]:
        return [getattr(self, name) for name in METRIC_NAMES]


class _FunctionWalker:
    def __init__(self) -> None:
        self.decisions = 0
        self.logical = 0
        self.nos = 0
        self.noi = 0
        self.max_nl = 0
        self.max_nle = 0

    def walk(self, stmt: Statement, nl_depth: int, nle_depth: int) -> None:
        if stmt.kind not in NON_COUNTING_KINDS:
            self.nos += 1
        self.decisions += stmt.ternary_ops
        self.logical += stmt.condition_ops
        self.noi += sum(1 for c in stmt.calls if not c.is_builtin_guard)
        if stmt.kind == IF:
            self.decisions += 1
            my_nl = nl_depth + 1
            my_nle = nle_depth + 1
            self.max_nl = max(self.max_nl, my_nl)
            self.max_nle = max(self.max_nle, my_nle)
            else_child = stmt.else_child
            for child in stmt.children:
                if child is else_child and child.kind == IF:
                    # else-if continues the chain at its parent's depth
                    self.walk(child, nl_depth, nle_depth)
                else:
                    self.walk(child, my_nl, my_nle)
        elif stmt.kind in LOOP_KINDS:
            self.decisions += 1
            my_nl = nl_depth + 1
            self.max_nl = max(self.max_nl, my_nl)
            for child in stmt.children:
                self.walk(child, my_nl, nle_depth)
        else:
            for child in stmt.children:
                self.walk(child, nl_depth, nle_depth)


def function_metrics(fn: FunctionDef) -> FunctionMetrics:
    """Cyclomatic complexity, nesting depths and statement/invocation counts
    for one function. Bodyless declarations yield mccc 1 and zeros."""
    if fn.body is None:
        return FunctionMetrics(1, 1, 0, 0, 0, 0, 0)
    w = _FunctionWalker()
    if fn.body.kind == BLOCK:
        for child in fn.body.children:
            w.walk(child, 0, 0)
    else:
        w.walk(fn.body, 0, 0)
    mccc = 1 + w.decisions
    return FunctionMetrics(
        mccc=mccc,
        mccc_strict=mccc + w.logical,
        nl=w.max_nl,
        nle=w.max_nle,
        numpar=len(fn.params),
        nos=w.nos,
        noi=w.noi,
    )


_WORD_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")


def _type_refs(type_text: str) -> set[str]:
    """Root identifiers of user-defined names inside a type text."""
    refs: set[str] = set()
    prev_dot = False
    for piece in type_text.split():
        if piece == ".":
            prev_dot = True
            continue
        if not prev_dot:
            root = piece.split(".")[0]
            if _WORD_RE.fullmatch(root) and root not in KEYWORDS and not is_elementary_type(root):
                refs.add(root)
        prev_dot = False
    return refs


def _coupled_names(contract: ContractDef) -> set[str]:
    refs: set[str] = set()
    for base in contract.base_names:
        refs.add(base.split(".")[0])
    for var in contract.state_vars:
        refs |= _type_refs(var.type_text)
        for new_ref in var.new_refs:
            refs.add(new_ref.split(".")[0])
    for fn in contract.functions:
        for param in fn.params:
            refs |= _type_refs(param.type_text)
        for ret in fn.return_types:
            refs |= _type_refs(ret)
        for call in _iter_calls(fn):
            if call.is_new_expression:
                refs.add(call.callee_text.split(".")[0])
    refs.discard(contract.name)
    refs.discard("")
    return refs


def _iter_calls(fn: FunctionDef):
    if fn.body is None:
        return
    stack = [fn.body]
    while stack:
        stmt = stack.pop()
        yield from stmt.calls
        stack.extend(stmt.children)


def contract_metrics(
    contract: ContractDef,
    lines: LineCounts,
    graph: InheritanceGraph,
    path: str = "",
) -> ContractMetrics:
    """Assemble the full 21-component vector for one contract.

    ``path`` locates the contract in the inheritance graph; function sums
    run over functions, constructors and fallback/receive handlers, never
    modifier definitions. Averages divide function-level totals by nf and
    are zero for function-less contracts.
    """
    counted = [f for f in contract.functions if f.counts_as_function]
    per_fn = [function_metrics(f) for f in counted]
    nf = len(counted)
    mccc_total = sum(m.mccc for m in per_fn)
    wmc = sum(m.mccc_strict for m in per_fn)
    nl = sum(m.nl for m in per_fn)
    nle = sum(m.nle for m in per_fn)
    numpar = sum(m.numpar for m in per_fn)
    fn_nos = sum(m.nos for m in per_fn)
    noi = sum(m.noi for m in per_fn)

    key = (path, contract.name)
    if key in graph.nodes:
        dit, noa, nod = graph.dit(key), graph.noa(key), graph.nod(key)
    else:
        dit = 1 if contract.base_names else 0
        noa = len(set(contract.base_names))
        nod = 0

    def avg(total: int) -> float:
        return total / nf if nf else 0.0

    return ContractMetrics(
        sloc=lines.sloc,
        lloc=lines.lloc,
        cloc=lines.cloc,
        nf=nf,
        wmc=wmc,
        nl=nl,
        nle=nle,
        numpar=numpar,
        nos=fn_nos + contract.declaration_count,
        dit=dit,
        noa=noa,
        nod=nod,
        cbo=len(_coupled_names(contract)),
        na=len(contract.state_vars),
        noi=noi,
        avg_mccc=avg(mccc_total),
        avg_nl=avg(nl),
        avg_nle=avg(nle),
        avg_numpar=avg(numpar),
        avg_nos=avg(fn_nos),
        avg_noi=avg(noi),
    )
