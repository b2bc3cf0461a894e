"""Bounded reference prover used to validate problems and author solutions.

The search deepens one inference round at a time up to ``depth_limit``:
round k derives every admissible conclusion whose premises were available
after round k-1 (semi-naive, so each round only revisits applications that
involve a newly derived formula).  When the target appears, a proof is
extracted by walking minimal-round derivations backwards and greedily
picking parents with the smallest ancestor closures.

Unrestricted forward closure diverges (conjunction, addition, and double
negation can grow formulas forever), so growth rules only fire when their
conclusion lies in a precomputed *relevance set*: subformulas of the
problem, their negations up to two levels, and De Morgan duals, all under a
size cap.  Consumer rules (modus ponens, simplification, ...) fire freely.
The returned proof is the shortest one this procedure finds; problem
authoring pins ``reference_length`` to it.

Deterministic given the fixed rule and premise ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import (
    And,
    BOTTOM,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    format_formula,
    formula_size,
)
from .proofs import Mode

__all__ = ["ProofStep", "solve_from_premises", "MAX_DEPTH_LIMIT"]

MAX_DEPTH_LIMIT = 12


@dataclass(frozen=True)
class ProofStep:
    rule_name: str
    parent_refs: tuple[str, ...]
    formula: Formula


_Derivation = tuple[str, tuple[Formula, ...]]


def _subformulas(f: Formula, out: set[Formula]) -> None:
    if f in out:
        return
    out.add(f)
    if isinstance(f, Not):
        _subformulas(f.operand, out)
    elif isinstance(f, (And, Or, Iff)):
        _subformulas(f.left, out)
        _subformulas(f.right, out)
    elif isinstance(f, Implies):
        _subformulas(f.antecedent, out)
        _subformulas(f.consequent, out)


def _relevance_set(premises: list[Formula], target: Formula, cap: int) -> set[Formula]:
    base: set[Formula] = set()
    for f in list(premises) + [target]:
        _subformulas(f, base)
    out = set(base)
    for f in base:
        out.add(Not(f))
        out.add(Not(Not(f)))
        if isinstance(f, Or):
            out.add(And(Not(f.left), Not(f.right)))
        elif isinstance(f, And):
            out.add(Or(Not(f.left), Not(f.right)))
    return {f for f in out if formula_size(f) <= cap}


class _Closure:
    """Round-by-round closure with first-round derivation records."""

    def __init__(self, premises: list[Formula], target: Formula, depth_limit: int):
        self.premises = list(premises)
        self.target = target
        self.depth_limit = depth_limit
        sizes = [formula_size(f) for f in self.premises + [target]]
        self.size_cap = 2 * max(sizes) + 2
        self.relevant = _relevance_set(self.premises, target, self.size_cap)
        self.conj_targets = [f for f in sorted_formulas(self.relevant) if isinstance(f, And)]
        self.or_targets = [f for f in sorted_formulas(self.relevant) if isinstance(f, Or)]
        # formula -> (round, derivations recorded in that round)
        self.entries: dict[Formula, tuple[int, list[_Derivation]]] = {}
        self.order: list[Formula] = []
        for f in self.premises:
            if f not in self.entries:
                self.entries[f] = (0, [])
                self.order.append(f)

    def run(self) -> bool:
        if self.target in self.entries:
            return True
        frontier = [f for f in self.order]
        for round_no in range(1, self.depth_limit + 1):
            produced: dict[Formula, list[_Derivation]] = {}
            for f in frontier:
                self._expand(f, produced)
            if not produced:
                return False
            frontier = []
            for f, derivations in produced.items():
                self.entries[f] = (round_no, derivations)
                self.order.append(f)
                frontier.append(f)
            if self.target in self.entries:
                return True
        return self.target in self.entries

    # -- move generation ---------------------------------------------------

    def _emit(self, produced: dict[Formula, list[_Derivation]], rule: str,
              parents: tuple[Formula, ...], conclusion: Formula) -> None:
        if conclusion in self.entries:
            return
        if formula_size(conclusion) > self.size_cap and conclusion != self.target:
            return
        produced.setdefault(conclusion, []).append((rule, parents))

    def _known(self, f: Formula) -> bool:
        return f in self.entries

    def _expand(self, f: Formula, produced: dict[Formula, list[_Derivation]]) -> None:
        # MP / MT / HS / TRANS / IMPL consume implications.
        if isinstance(f, Implies):
            if self._known(f.antecedent):
                self._emit(produced, "MP", (f, f.antecedent), f.consequent)
            if self._known(Not(f.consequent)):
                self._emit(produced, "MT", (f, Not(f.consequent)), Not(f.antecedent))
            for g in self.order:
                if isinstance(g, Implies):
                    if f.consequent == g.antecedent:
                        self._emit(produced, "HS", (f, g), Implies(f.antecedent, g.consequent))
                    if g.consequent == f.antecedent:
                        self._emit(produced, "HS", (g, f), Implies(g.antecedent, f.consequent))
            self._emit(produced, "TRANS", (f,), Implies(Not(f.consequent), Not(f.antecedent)))
            self._emit(produced, "IMPL", (f,), Or(Not(f.antecedent), f.consequent))
        # A newly derived formula may complete an implication elsewhere.
        for g in self.order:
            if isinstance(g, Implies):
                if g.antecedent == f:
                    self._emit(produced, "MP", (g, f), g.consequent)
                if Not(g.consequent) == f:
                    self._emit(produced, "MT", (g, f), Not(g.antecedent))
        if isinstance(f, Or):
            if self._known(Not(f.left)):
                self._emit(produced, "DS", (f, Not(f.left)), f.right)
            if self._known(Not(f.right)):
                self._emit(produced, "DS", (f, Not(f.right)), f.left)
            if isinstance(f.left, Not):
                self._emit(produced, "IMPL", (f,), Implies(f.left.operand, f.right))
            if isinstance(f.left, Not) and isinstance(f.right, Not):
                self._emit(produced, "DEM", (f,), Not(And(f.left.operand, f.right.operand)))
            for g in self.order:
                if isinstance(g, And) and isinstance(g.left, Implies) and isinstance(g.right, Implies):
                    if g.left.antecedent == f.left and g.right.antecedent == f.right:
                        self._emit(produced, "CD", (g, f), Or(g.left.consequent, g.right.consequent))
        if isinstance(f, Not):
            for g in self.order:
                if isinstance(g, Or):
                    if g.left == f.operand:
                        self._emit(produced, "DS", (g, f), g.right)
                    if g.right == f.operand:
                        self._emit(produced, "DS", (g, f), g.left)
            inner = f.operand
            if isinstance(inner, Not):
                self._emit(produced, "DN_E", (f,), inner.operand)
            if isinstance(inner, And):
                self._emit(produced, "DEM", (f,), Or(Not(inner.left), Not(inner.right)))
            if isinstance(inner, Or):
                self._emit(produced, "DEM", (f,), And(Not(inner.left), Not(inner.right)))
        if isinstance(f, And):
            self._emit(produced, "SIMP_L", (f,), f.left)
            self._emit(produced, "SIMP_R", (f,), f.right)
            if isinstance(f.left, Not) and isinstance(f.right, Not):
                self._emit(produced, "DEM", (f,), Not(Or(f.left.operand, f.right.operand)))
            if isinstance(f.left, Implies) and isinstance(f.right, Implies):
                if f.left.antecedent == f.right.consequent and f.left.consequent == f.right.antecedent:
                    self._emit(produced, "BICOND", (f,), Iff(f.left.antecedent, f.left.consequent))
                for g in self.order:
                    if isinstance(g, Or) and g.left == f.left.antecedent and g.right == f.right.antecedent:
                        self._emit(produced, "CD", (f, g), Or(f.left.consequent, f.right.consequent))
        if isinstance(f, Iff):
            self._emit(
                produced, "BICOND", (f,),
                And(Implies(f.left, f.right), Implies(f.right, f.left)),
            )
        # Contradiction: f together with its complement already known.
        if isinstance(f, Not) and self._known(f.operand):
            self._emit(produced, "CONTRA", (f.operand, f), BOTTOM)
        if self._known(Not(f)):
            self._emit(produced, "CONTRA", (f, Not(f)), BOTTOM)
        # Growth rules, admitted only toward relevant conclusions.
        for conj in self.conj_targets:
            involves_f = conj.left == f or conj.right == f
            if involves_f and self._known(conj.left) and self._known(conj.right):
                self._emit(produced, "CONJ", (conj.left, conj.right), conj)
        for disj in self.or_targets:
            involves_f = disj.left == f or disj.right == f
            if involves_f and self._known(disj.left) and self._known(disj.right):
                self._emit(produced, "ADD", (disj.left, disj.right), disj)
        double = Not(Not(f))
        if double in self.relevant:
            self._emit(produced, "DN_I", (f,), double)


def sorted_formulas(items: set[Formula]) -> list[Formula]:
    return sorted(items, key=format_formula)


def _extract(closure: _Closure) -> list[ProofStep]:
    premises = closure.premises
    premise_index = {f: i for i, f in enumerate(premises)}
    chosen: dict[Formula, _Derivation] = {}
    ancestors: dict[Formula, frozenset[Formula]] = {}

    def resolve(f: Formula) -> frozenset[Formula]:
        if f in premise_index:
            return frozenset()
        if f in ancestors:
            return ancestors[f]
        _, derivations = closure.entries[f]
        best: frozenset[Formula] | None = None
        best_derivation: _Derivation | None = None
        for derivation in derivations:
            combined: frozenset[Formula] = frozenset((f,))
            for parent in derivation[1]:
                combined |= resolve(parent)
            if best is None or len(combined) < len(best):
                best = combined
                best_derivation = derivation
        assert best is not None and best_derivation is not None
        ancestors[f] = best
        chosen[f] = best_derivation
        return best

    needed = resolve(closure.target)
    discovery = {f: i for i, f in enumerate(closure.order)}
    ordered = sorted(needed, key=lambda f: (closure.entries[f][0], discovery[f]))
    node_index: dict[Formula, int] = {}
    steps: list[ProofStep] = []
    for f in ordered:
        rule, parents = chosen[f]
        refs = []
        for parent in parents:
            if parent in premise_index:
                refs.append(f"g{premise_index[parent]}")
            else:
                refs.append(f"n{node_index[parent]}")
        node_index[f] = len(steps)
        steps.append(ProofStep(rule, tuple(refs), f))
    return steps


def solve_from_premises(
    premises: list[Formula],
    target: Formula,
    depth_limit: int = MAX_DEPTH_LIMIT,
) -> list[ProofStep] | None:
    """Shortest-found proof of ``target`` from ``premises`` or None within the limit."""
    if depth_limit > MAX_DEPTH_LIMIT:
        raise ValueError(f"depth_limit must be <= {MAX_DEPTH_LIMIT}")
    if target in premises:
        return []
    closure = _Closure(premises, target, depth_limit)
    if not closure.run():
        return None
    steps = _extract(closure)
    if len(steps) > depth_limit:
        return None
    return steps


def solve(problem, mode: Mode, depth_limit: int = MAX_DEPTH_LIMIT) -> list[ProofStep] | None:
    """Reference proof for a problem in the given strategy mode."""
    premises = list(problem.givens)
    if mode is Mode.BC:
        premises.append(Not(problem.conclusion))
        target: Formula = BOTTOM
    else:
        target = problem.conclusion
    return solve_from_premises(premises, target, depth_limit)
