from __future__ import annotations

import random

import pytest

from logictutor.curriculum import default_curriculum
from logictutor.formulas import And, Atom, BOTTOM, Formula, Iff, Implies, Not, Or


def random_formula(rng: random.Random, depth: int, atom_pool: list[str]) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.05:
            return BOTTOM
        return Atom(rng.choice(atom_pool))
    kind = rng.randrange(5)
    if kind == 0:
        return Not(random_formula(rng, depth - 1, atom_pool))
    left = random_formula(rng, depth - 1, atom_pool)
    right = random_formula(rng, depth - 1, atom_pool)
    if kind == 1:
        return And(left, right)
    if kind == 2:
        return Or(left, right)
    if kind == 3:
        return Implies(left, right)
    return Iff(left, right)


@pytest.fixture(scope="session")
def curriculum():
    return default_curriculum()
