import random
from fractions import Fraction

import pytest
import sympy as sp

from tanakakit.groebner import BudgetExhausted, groebner, is_unit_ideal, reduce

X, Y, Z = sp.symbols("x y z")
GENS = (X, Y, Z)


def to_dict(expr):
    return {m: Fraction(int(c.p), int(c.q)) for m, c in sp.Poly(expr, *GENS).terms()}


def to_expr(d):
    return sp.expand(sum(sp.Rational(c.numerator, c.denominator) * X ** a * Y ** b * Z ** e
                         for (a, b, e), c in d.items()))


def monic_grevlex(expr):
    return sp.expand(expr / sp.Poly(expr, *GENS).LC(order="grevlex"))


def _random_system(rng):
    F = []
    for _ in range(3):
        e = sum(rng.randint(-3, 3) * X ** rng.randint(0, 2) * Y ** rng.randint(0, 2) * Z ** rng.randint(0, 2)
                for _ in range(3))
        if e != 0:
            F.append(sp.expand(e))
    return F


@pytest.mark.parametrize("seed", range(4))
def test_reduced_basis_matches_sympy(seed):
    rng = random.Random(seed)
    for _ in range(10):
        F = _random_system(rng)
        if not F:
            continue
        mine = {to_expr(g) for g in groebner([to_dict(f) for f in F], 3)}
        ref = {monic_grevlex(g) for g in sp.groebner(F, *GENS, order="grevlex").exprs}
        assert mine == ref


def test_unit_ideal_detection():
    G = groebner([to_dict(X * Y - 1), to_dict(X), ], 3)
    assert is_unit_ideal(G)
    G = groebner([to_dict(X ** 2 + Y ** 2), to_dict(X - 1)], 3)
    assert not is_unit_ideal(G)


def test_normal_form_zero_for_ideal_members():
    F = [to_dict(X ** 2 - Y), to_dict(Y * Z - X)]
    G = groebner(F, 3)
    member = to_dict(sp.expand((X ** 2 - Y) * (Z + 3) + (Y * Z - X) * X))
    assert reduce(member, G) == {}


def test_budget_exhausted():
    # cyclic-3 needs four reduction steps
    F = [to_dict(X + Y + Z), to_dict(X * Y + Y * Z + Z * X), to_dict(X * Y * Z - 1)]
    with pytest.raises(BudgetExhausted):
        groebner(F, 3, budget=2)
    assert len(groebner(F, 3)) == 3
