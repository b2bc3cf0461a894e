from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from logictutor.formulas import (
    And,
    Atom,
    AtomLimitError,
    BOTTOM,
    Iff,
    Implies,
    MissingAtomError,
    Not,
    Or,
    ParseError,
    assignments,
    atoms,
    entails,
    evaluate,
    format_formula,
    parse,
    satisfiable,
)

from conftest import random_formula

p, q, r = Atom("p"), Atom("q"), Atom("r")


# -- parsing ---------------------------------------------------------------


def test_parse_implication() -> None:
    assert parse("p -> q") == Implies(p, q)


def test_parse_implication_right_associative() -> None:
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))


def test_parse_precedence_not_and_or() -> None:
    assert parse(r"~p \/ q /\ r") == Or(Not(p), And(q, r))


def test_parse_bottom_and_iff() -> None:
    assert parse("_|_") == BOTTOM
    assert parse("p <-> q") == Iff(p, q)


def test_parse_parentheses_override() -> None:
    assert parse(r"(p \/ q) /\ r") == And(Or(p, q), r)


def test_parse_error_incomplete_expression() -> None:
    with pytest.raises(ParseError) as info:
        parse("p ->")
    assert info.value.offset == 4


def test_parse_error_empty_input() -> None:
    with pytest.raises(ParseError):
        parse("   ")


def test_parse_error_unbalanced_parenthesis() -> None:
    with pytest.raises(ParseError):
        parse("(p -> q")


def test_parse_error_dangling_operator() -> None:
    with pytest.raises(ParseError):
        parse(r"p /\ \/ q")


def test_whitespace_insensitive() -> None:
    assert parse("p->q") == parse("  p   ->   q ")


# -- printing ----------------------------------------------------------------


def test_print_canonical_forms() -> None:
    assert format_formula(Implies(p, q)) == "p -> q"
    assert format_formula(Or(Not(p), q)) == r"~p \/ q"
    assert format_formula(BOTTOM) == "_|_"


def test_print_minimal_parentheses() -> None:
    assert format_formula(And(Or(p, q), r)) == r"(p \/ q) /\ r"
    assert format_formula(Or(p, And(q, r))) == r"p \/ q /\ r"
    assert format_formula(Implies(Implies(p, q), r)) == "(p -> q) -> r"
    assert format_formula(Not(Not(p))) == "~~p"
    assert format_formula(Not(And(p, q))) == r"~(p /\ q)"


def test_round_trip_bulk_random() -> None:
    # Fixed-seed sweep over 10,000 formulas up to depth 8 over 8 atoms.
    rng = random.Random(20240817)
    pool = [f"x{i}" for i in range(8)]
    for _ in range(10_000):
        f = random_formula(rng, depth=8, atom_pool=pool)
        assert parse(format_formula(f)) == f


@given(st.randoms(use_true_random=False))
@settings(max_examples=300, deadline=None)
def test_round_trip_property(rnd) -> None:
    f = random_formula(rnd, depth=6, atom_pool=["a", "b", "c", "d"])
    assert parse(format_formula(f)) == f


# -- semantics ---------------------------------------------------------------


def test_evaluate_contradiction() -> None:
    assert evaluate(And(p, Not(p)), {"p": True}) is False


def test_evaluate_vacuous_implication() -> None:
    assert evaluate(Implies(p, q), {"p": False, "q": False}) is True


def test_evaluate_iff_reflexive() -> None:
    for value in (True, False):
        assert evaluate(Iff(p, p), {"p": value}) is True


def test_evaluate_bottom_always_false() -> None:
    assert evaluate(BOTTOM, {}) is False


def test_evaluate_missing_atom() -> None:
    with pytest.raises(MissingAtomError):
        evaluate(And(p, q), {"p": True})


def test_entails_modus_ponens() -> None:
    assert entails([p, Implies(p, q)], q) is True


def test_entails_counterexample() -> None:
    assert entails([Implies(p, q)], q) is False


def test_entails_contradictory_premises_entail_bottom() -> None:
    # Exhaustive 4-row check: {p -> q, ~q, p} has no models.
    assert entails([Implies(p, q), Not(q), p], BOTTOM) is True


def test_entails_atom_cap() -> None:
    many = [Atom(f"x{i}") for i in range(21)]
    with pytest.raises(AtomLimitError):
        entails(many, many[0])


def test_entailment_monotone_under_extra_premises() -> None:
    rng = random.Random(7)
    pool = ["a", "b", "c"]
    checked = 0
    while checked < 200:
        premises = [random_formula(rng, 3, pool) for _ in range(2)]
        goal = random_formula(rng, 3, pool)
        if entails(premises, goal):
            extra = random_formula(rng, 3, pool)
            assert entails(premises + [extra], goal)
            checked += 1


def test_bottom_entailment_matches_satisfiability_scan() -> None:
    # Independent oracle: a direct model scan over all assignments.
    rng = random.Random(13)
    pool = ["a", "b", "c", "d"]
    for _ in range(300):
        premises = [random_formula(rng, 3, pool) for _ in range(rng.randint(1, 3))]
        names = frozenset().union(*(atoms(f) for f in premises))
        has_model = any(
            all(evaluate(f, a) for f in premises) for a in assignments(names)
        )
        assert entails(premises, BOTTOM) == (not has_model)
        assert satisfiable(premises) == has_model
