r"""Propositional formulas: syntax tree, parser, printer, and truth-table semantics.

The concrete grammar, tightest-binding first:

    ~ f           negation
    f /\ g        conjunction      (left-associative)
    f \/ g        disjunction      (left-associative)
    f -> g        implication      (right-associative)
    f <-> g       biconditional    (right-associative)
    _|_           the contradiction constant
    (f)           grouping

Atom names match ``[A-Za-z][A-Za-z0-9_]*``.  Whitespace is ignored.  This
grammar is the wire format: curriculum files, event logs, and the HTTP API
all carry formulas as text in exactly this syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

__all__ = [
    "Atom",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Bottom",
    "BOTTOM",
    "Formula",
    "ParseError",
    "MissingAtomError",
    "AtomLimitError",
    "parse",
    "format_formula",
    "atoms",
    "evaluate",
    "assignments",
    "entails",
    "satisfiable",
    "formula_size",
    "ATOM_LIMIT",
]

_ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

# Truth-table enumeration is exponential; curriculum problems stay tiny.
ATOM_LIMIT = 20


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not _ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name: {self.name!r}")


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    antecedent: "Formula"
    consequent: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Bottom:
    pass


Formula = Union[Atom, Not, And, Or, Implies, Iff, Bottom]

BOTTOM = Bottom()


class ParseError(ValueError):
    """Malformed formula text; ``offset`` is the character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class MissingAtomError(KeyError):
    """An assignment does not cover an atom of the formula being evaluated."""


class AtomLimitError(ValueError):
    """Entailment query over more distinct atoms than the truth-table cap."""


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<atom>[A-Za-z][A-Za-z0-9_]*)
  | (?P<bottom>_\|_)
  | (?P<iff><->)
  | (?P<implies>->)
  | (?P<and>/\\)
  | (?P<or>\\/)
  | (?P<not>~)
  | (?P<lparen>\()
  | (?P<rparen>\))
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        kind = m.lastgroup
        if kind != "ws":
            yield (kind, m.group(), m.start())
    yield ("eof", "", len(text))


class _Parser:
    def __init__(self, text: str):
        self._tokens = list(_tokenize(text))
        self._index = 0

    def _peek(self) -> tuple[str, str, int]:
        return self._tokens[self._index]

    def _next(self) -> tuple[str, str, int]:
        tok = self._tokens[self._index]
        self._index += 1
        return tok

    def parse(self) -> Formula:
        kind, _, offset = self._peek()
        if kind == "eof":
            raise ParseError("empty input", offset)
        f = self._iff()
        kind, value, offset = self._peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {value!r}", offset)
        return f

    def _iff(self) -> Formula:
        left = self._implies()
        if self._peek()[0] == "iff":
            self._next()
            return Iff(left, self._iff())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        if self._peek()[0] == "implies":
            self._next()
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self._peek()[0] == "or":
            self._next()
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self._peek()[0] == "and":
            self._next()
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        kind, value, offset = self._next()
        if kind == "not":
            return Not(self._unary())
        if kind == "atom":
            return Atom(value)
        if kind == "bottom":
            return BOTTOM
        if kind == "lparen":
            inner = self._iff()
            kind, value, offset = self._next()
            if kind != "rparen":
                raise ParseError("expected ')'", offset)
            return inner
        if kind == "eof":
            raise ParseError("incomplete expression", offset)
        raise ParseError(f"unexpected token {value!r}", offset)


def parse(text: str) -> Formula:
    """Parse formula text, raising :class:`ParseError` with a position on bad input."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

# Binding strength used for minimal parenthesisation; atoms/constants never
# need parentheses, so they sit above every operator.
_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _prec(f: Formula) -> int:
    return _PRECEDENCE.get(type(f), 6)


def format_formula(f: Formula) -> str:
    """Render a formula with minimal parentheses; inverse of :func:`parse`."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bottom):
        return "_|_"
    if isinstance(f, Not):
        inner = format_formula(f.operand)
        if _prec(f.operand) < _PRECEDENCE[Not]:
            inner = f"({inner})"
        return f"~{inner}"
    if isinstance(f, (And, Or)):
        op = r"/\ " if isinstance(f, And) else "\\/ "
        level = _prec(f)
        # Left-associative: right child at the same level needs parentheses.
        left = _wrap(f.left, level, strict=False)
        right = _wrap(f.right, level, strict=True)
        return f"{left} {op.strip()} {right}"
    if isinstance(f, Implies):
        # Right-associative: left child at the same level needs parentheses.
        left = _wrap(f.antecedent, _PRECEDENCE[Implies], strict=True)
        right = _wrap(f.consequent, _PRECEDENCE[Implies], strict=False)
        return f"{left} -> {right}"
    if isinstance(f, Iff):
        left = _wrap(f.left, _PRECEDENCE[Iff], strict=True)
        right = _wrap(f.right, _PRECEDENCE[Iff], strict=False)
        return f"{left} <-> {right}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(child: Formula, level: int, strict: bool) -> str:
    text = format_formula(child)
    child_level = _prec(child)
    if child_level < level or (strict and child_level == level):
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Not):
        return atoms(f.operand)
    if isinstance(f, (And, Or)):
        return atoms(f.left) | atoms(f.right)
    if isinstance(f, Implies):
        return atoms(f.antecedent) | atoms(f.consequent)
    if isinstance(f, Iff):
        return atoms(f.left) | atoms(f.right)
    raise TypeError(f"not a formula: {f!r}")


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth value of ``f`` under ``assignment``; every atom must be covered."""
    if isinstance(f, Atom):
        try:
            return assignment[f.name]
        except KeyError:
            raise MissingAtomError(f.name) from None
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.operand, assignment)
    if isinstance(f, And):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    if isinstance(f, Or):
        return evaluate(f.left, assignment) or evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not evaluate(f.antecedent, assignment)) or evaluate(f.consequent, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise TypeError(f"not a formula: {f!r}")


def assignments(names: frozenset[str]) -> Iterator[dict[str, bool]]:
    """All truth assignments over ``names`` (sorted order, deterministic)."""
    ordered = sorted(names)
    for bits in range(1 << len(ordered)):
        yield {name: bool(bits >> i & 1) for i, name in enumerate(ordered)}


def _gather_atoms(formulas: list[Formula]) -> frozenset[str]:
    names: frozenset[str] = frozenset()
    for f in formulas:
        names |= atoms(f)
    if len(names) > ATOM_LIMIT:
        raise AtomLimitError(
            f"{len(names)} distinct atoms exceeds the cap of {ATOM_LIMIT}"
        )
    return names


def entails(premises: list[Formula], goal: Formula) -> bool:
    """Exhaustive truth-table check that every model of the premises models the goal.

    This is the semantic oracle everything else is validated against: rule
    soundness, curriculum problems, and replayed proofs all reduce to calls
    here.
    """
    names = _gather_atoms(list(premises) + [goal])
    for assignment in assignments(names):
        if all(evaluate(p, assignment) for p in premises) and not evaluate(goal, assignment):
            return False
    return True


def satisfiable(formulas: list[Formula]) -> bool:
    """True iff some assignment makes every formula true (exhaustive scan)."""
    names = _gather_atoms(list(formulas))
    return any(
        all(evaluate(f, assignment) for f in formulas)
        for assignment in assignments(names)
    )


def formula_size(f: Formula) -> int:
    """Node count of the syntax tree; used by the prover to bound growth."""
    if isinstance(f, (Atom, Bottom)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.operand)
    if isinstance(f, (And, Or)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, Implies):
        return 1 + formula_size(f.antecedent) + formula_size(f.consequent)
    if isinstance(f, Iff):
        return 1 + formula_size(f.left) + formula_size(f.right)
    raise TypeError(f"not a formula: {f!r}")
