"""Syntax tree for the supported Solidity subset.

Spans are inclusive 1-based line ranges. The tree keeps only what the
metric definitions consume: declarations, control flow, call sites and
parameter lists. Anything else is swallowed as an opaque statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Statement kinds
IF = "if"
FOR = "for"
WHILE = "while"
DO_WHILE = "do-while"
RETURN = "return"
EMIT = "emit"
EXPRESSION = "expression"
VARIABLE_DECLARATION = "variable-declaration"
BLOCK = "block"
UNCHECKED_BLOCK = "unchecked-block"
ASSEMBLY_OPAQUE = "assembly-opaque"
BREAK = "break"
CONTINUE = "continue"
REQUIRE_LIKE = "require-like"

STATEMENT_KINDS = frozenset(
    {
        IF,
        FOR,
        WHILE,
        DO_WHILE,
        RETURN,
        EMIT,
        EXPRESSION,
        VARIABLE_DECLARATION,
        BLOCK,
        UNCHECKED_BLOCK,
        ASSEMBLY_OPAQUE,
        BREAK,
        CONTINUE,
        REQUIRE_LIKE,
    }
)

LOOP_KINDS = frozenset({FOR, WHILE, DO_WHILE})

# Statements that are neither conditional nor executable on their own.
NON_COUNTING_KINDS = frozenset({BLOCK, UNCHECKED_BLOCK})


@dataclass(frozen=True)
class CallSite:
    """One outgoing invocation, recorded as written in the source."""

    callee_text: str
    is_builtin_guard: bool = False
    is_new_expression: bool = False


@dataclass
class Statement:
    kind: str
    span: tuple[int, int]
    children: list["Statement"] = field(default_factory=list)
    condition_ops: int = 0
    ternary_ops: int = 0
    calls: list[CallSite] = field(default_factory=list)
    # if-statements only: the last child is the else branch
    has_else: bool = False

    @property
    def else_child(self) -> "Statement | None":
        if self.kind == IF and self.has_else:
            return self.children[-1]
        return None


@dataclass(frozen=True)
class Param:
    name: str
    type_text: str


@dataclass
class FunctionDef:
    name: str | None
    kind: str  # function | constructor | fallback | receive | modifier-def
    params: list[Param]
    body: Statement | None
    span: tuple[int, int]
    return_types: list[str] = field(default_factory=list)

    @property
    def counts_as_function(self) -> bool:
        return self.kind != "modifier-def"


@dataclass
class StateVarDecl:
    name: str
    type_text: str
    span: tuple[int, int]
    new_refs: list[str] = field(default_factory=list)  # `new X(...)` in initializer


@dataclass
class ContractDef:
    name: str
    kind: str  # contract | interface | library
    base_names: list[str]
    state_vars: list[StateVarDecl]
    functions: list[FunctionDef]
    span: tuple[int, int]
    events: list[str] = field(default_factory=list)
    structs: list[str] = field(default_factory=list)
    enums: list[str] = field(default_factory=list)

    @property
    def declaration_count(self) -> int:
        """Contract-level declarations counted toward NOS."""
        return (
            len(self.state_vars)
            + len(self.events)
            + len(self.structs)
            + len(self.enums)
        )


@dataclass(frozen=True)
class Diagnostic:
    path: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.path}:{self.line}: {self.message}"


@dataclass
class SourceUnit:
    path: str
    pragma: str | None
    contracts: list[ContractDef]
    total_lines: int
    imports: list[str] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)


@dataclass(frozen=True)
class LineCounts:
    """Source / logical / comment line counts over one contract span."""

    sloc: int
    lloc: int
    cloc: int
