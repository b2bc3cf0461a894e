"""Named inference rules and the pattern-matching application engine.

Each rule is a family of schemas over metavariables.  A schema lists premise
patterns and one conclusion pattern; applying a rule matches the supplied
formulas against the premise patterns *in order* and instantiates the
conclusion.  Patterns reuse the formula syntax tree with atoms standing in
for metavariables (patterns never contain object-level atoms).

Rule names are stable wire identifiers: curriculum files, event logs, and
the HTTP API refer to rules by these exact strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .formulas import (
    And,
    Atom,
    BOTTOM,
    Bottom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    atoms,
    entails,
    format_formula,
)

__all__ = [
    "Rule",
    "RuleSchema",
    "RuleError",
    "UnknownRuleError",
    "ArityMismatchError",
    "PatternMismatchError",
    "catalog",
    "rule_by_name",
    "match",
    "substitute",
    "apply_rule",
    "RULE_NAMES",
]

Substitution = dict[str, Formula]


class RuleError(Exception):
    pass


class UnknownRuleError(RuleError):
    def __init__(self, name: str):
        super().__init__(f"unknown rule: {name}")
        self.rule_name = name


class ArityMismatchError(RuleError):
    def __init__(self, rule: "Rule", got: int):
        super().__init__(f"{rule.name} expects {rule.arity} premise(s), got {got}")


class PatternMismatchError(RuleError):
    def __init__(self, rule: "Rule", inputs: tuple[Formula, ...]):
        shown = ", ".join(format_formula(f) for f in inputs)
        super().__init__(f"{rule.name} does not apply to: {shown}")


@dataclass(frozen=True)
class RuleSchema:
    premises: tuple[Formula, ...]
    conclusion: Formula


@dataclass(frozen=True)
class Rule:
    name: str
    arity: int
    schemas: tuple[RuleSchema, ...]
    description: str


def match(pattern: Formula, target: Formula, bindings: Substitution | None = None) -> Substitution | None:
    """One-way match of ``target`` against ``pattern``.

    Atoms in the pattern are metavariables; repeated metavariables must bind
    to structurally equal formulas.  Returns the (extended) substitution, or
    None when the shapes disagree.
    """
    if bindings is None:
        bindings = {}
    if isinstance(pattern, Atom):
        bound = bindings.get(pattern.name)
        if bound is None:
            out = dict(bindings)
            out[pattern.name] = target
            return out
        return bindings if bound == target else None
    if isinstance(pattern, Bottom):
        return bindings if isinstance(target, Bottom) else None
    if isinstance(pattern, Not) and isinstance(target, Not):
        return match(pattern.operand, target.operand, bindings)
    if isinstance(pattern, And) and isinstance(target, And):
        step = match(pattern.left, target.left, bindings)
        return None if step is None else match(pattern.right, target.right, step)
    if isinstance(pattern, Or) and isinstance(target, Or):
        step = match(pattern.left, target.left, bindings)
        return None if step is None else match(pattern.right, target.right, step)
    if isinstance(pattern, Implies) and isinstance(target, Implies):
        step = match(pattern.antecedent, target.antecedent, bindings)
        return None if step is None else match(pattern.consequent, target.consequent, step)
    if isinstance(pattern, Iff) and isinstance(target, Iff):
        step = match(pattern.left, target.left, bindings)
        return None if step is None else match(pattern.right, target.right, step)
    return None


def substitute(pattern: Formula, bindings: Substitution) -> Formula:
    """Instantiate every metavariable of ``pattern`` from ``bindings``."""
    if isinstance(pattern, Atom):
        return bindings[pattern.name]
    if isinstance(pattern, Bottom):
        return pattern
    if isinstance(pattern, Not):
        return Not(substitute(pattern.operand, bindings))
    if isinstance(pattern, And):
        return And(substitute(pattern.left, bindings), substitute(pattern.right, bindings))
    if isinstance(pattern, Or):
        return Or(substitute(pattern.left, bindings), substitute(pattern.right, bindings))
    if isinstance(pattern, Implies):
        return Implies(substitute(pattern.antecedent, bindings), substitute(pattern.consequent, bindings))
    if isinstance(pattern, Iff):
        return Iff(substitute(pattern.left, bindings), substitute(pattern.right, bindings))
    raise TypeError(f"not a pattern: {pattern!r}")


def apply_rule(rule: Rule, inputs: list[Formula]) -> Formula:
    """Apply ``rule`` to ordered ``inputs``; premise order is significant.

    Schemas are tried in catalog order and the first full match wins, so the
    result is a pure function of (rule, inputs).
    """
    given = tuple(inputs)
    if len(given) != rule.arity:
        raise ArityMismatchError(rule, len(given))
    for schema in rule.schemas:
        bindings: Substitution | None = {}
        for pattern, target in zip(schema.premises, given):
            bindings = match(pattern, target, bindings)
            if bindings is None:
                break
        if bindings is not None:
            return substitute(schema.conclusion, bindings)
    raise PatternMismatchError(rule, given)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_X, _Y, _Z, _W = Atom("X"), Atom("Y"), Atom("Z"), Atom("W")


def _schema(premises: tuple[Formula, ...], conclusion: Formula) -> RuleSchema:
    return RuleSchema(premises, conclusion)


_CATALOG_SPEC: list[tuple[str, str, list[RuleSchema]]] = [
    ("MP", "modus ponens", [_schema((Implies(_X, _Y), _X), _Y)]),
    ("MT", "modus tollens", [_schema((Implies(_X, _Y), Not(_Y)), Not(_X))]),
    (
        "DS",
        "disjunctive syllogism",
        [
            _schema((Or(_X, _Y), Not(_X)), _Y),
            _schema((Or(_X, _Y), Not(_Y)), _X),
        ],
    ),
    ("HS", "hypothetical syllogism", [_schema((Implies(_X, _Y), Implies(_Y, _Z)), Implies(_X, _Z))]),
    ("SIMP_L", "simplification (left)", [_schema((And(_X, _Y),), _X)]),
    ("SIMP_R", "simplification (right)", [_schema((And(_X, _Y),), _Y)]),
    ("CONJ", "conjunction", [_schema((_X, _Y), And(_X, _Y))]),
    # Both disjuncts must already be derived: the catalog invariant requires
    # every conclusion metavariable to be bound by a premise, so the textbook
    # single-premise weakening form is not expressible here.
    ("ADD", "addition", [_schema((_X, _Y), Or(_X, _Y))]),
    (
        "CD",
        "constructive dilemma",
        [_schema((And(Implies(_X, _Y), Implies(_Z, _W)), Or(_X, _Z)), Or(_Y, _W))],
    ),
    ("DN_I", "double negation introduction", [_schema((_X,), Not(Not(_X)))]),
    ("DN_E", "double negation elimination", [_schema((Not(Not(_X)),), _X)]),
    (
        "DEM",
        "De Morgan",
        [
            _schema((Not(And(_X, _Y)),), Or(Not(_X), Not(_Y))),
            _schema((Not(Or(_X, _Y)),), And(Not(_X), Not(_Y))),
            _schema((Or(Not(_X), Not(_Y)),), Not(And(_X, _Y))),
            _schema((And(Not(_X), Not(_Y)),), Not(Or(_X, _Y))),
        ],
    ),
    (
        "IMPL",
        "material implication",
        [
            _schema((Implies(_X, _Y),), Or(Not(_X), _Y)),
            _schema((Or(Not(_X), _Y),), Implies(_X, _Y)),
        ],
    ),
    ("TRANS", "transposition", [_schema((Implies(_X, _Y),), Implies(Not(_Y), Not(_X)))]),
    (
        "BICOND",
        "biconditional exchange",
        [
            _schema((Iff(_X, _Y),), And(Implies(_X, _Y), Implies(_Y, _X))),
            _schema((And(Implies(_X, _Y), Implies(_Y, _X)),), Iff(_X, _Y)),
        ],
    ),
    ("CONTRA", "contradiction introduction", [_schema((_X, Not(_X)), BOTTOM)]),
]


def _check_schema_soundness(name: str, schema: RuleSchema) -> None:
    metavars: set[str] = set()
    for p in schema.premises:
        metavars |= atoms(p)
    missing = atoms(schema.conclusion) - metavars
    if missing:
        raise RuleError(f"{name}: conclusion metavariables {sorted(missing)} unbound by premises")
    # Instantiate metavariables with fresh atoms; schema validity is then an
    # ordinary entailment over those atoms.
    fresh = {v: Atom(f"mv_{v}") for v in metavars}
    premises = [substitute(p, fresh) for p in schema.premises]
    conclusion = substitute(schema.conclusion, fresh)
    if not entails(premises, conclusion):
        raise RuleError(f"{name}: unsound schema {schema}")


@lru_cache(maxsize=1)
def catalog() -> tuple[Rule, ...]:
    """The fixed rule catalog, soundness-checked against the truth-table oracle."""
    rules = []
    for name, description, schemas in _CATALOG_SPEC:
        arities = {len(s.premises) for s in schemas}
        if len(arities) != 1:
            raise RuleError(f"{name}: schemas disagree on arity")
        for schema in schemas:
            _check_schema_soundness(name, schema)
        rules.append(Rule(name, arities.pop(), tuple(schemas), description))
    return tuple(rules)


RULE_NAMES = tuple(name for name, _, _ in _CATALOG_SPEC)


def rule_by_name(name: str) -> Rule:
    for rule in catalog():
        if rule.name == name:
            return rule
    raise UnknownRuleError(name)
