from fractions import Fraction
from itertools import combinations

import pytest

from tanakakit import models
from tanakakit.errors import InputError, SizeGuardError
from tanakakit.fieldalg import PointQ
from tanakakit.flag import derived_flag
from tanakakit.gnla import free_gnla, gnla_at, heisenberg
from tanakakit.prolong import (GradedElement, bracket_prolonged, extend, grading_element,
                               restriction_tensor, tanaka_prolongation)


def e13_gnla():
    jm = models.monge(1, 3)
    return gnla_at(derived_flag(jm.frame), PointQ.origin(jm.chart))


def contact_dim(k):
    """Monomials of weighted degree k + 2 in x, y (weight 1) and z (weight 2)."""
    w = k + 2
    return sum(w - 2 * c + 1 for c in range(w // 2 + 1))


def test_heisenberg_is_contact_and_capped():
    pro = tanaka_prolongation(heisenberg(), max_degree=6)
    assert pro.status == "capped"
    assert pro.total_dim is None
    assert pro.dims == tuple(contact_dim(k) for k in range(7))
    assert pro.dims[0] == 4


def test_e13_prolongation():
    pro = tanaka_prolongation(e13_gnla())
    assert pro.dims == (3, 2, 0)
    assert pro.terminated
    assert pro.total_dim == 11


@pytest.mark.parametrize("n,k,total", [(3, 2, 21), (4, 2, 36), (2, 3, 14)])
def test_free_totals(n, k, total):
    pro = tanaka_prolongation(free_gnla(n, k))
    assert pro.total_dim == total
    assert pro.dims[0] == n * n


@pytest.mark.parametrize("n,k", [(3, 3), (2, 4)])
def test_free_g1_vanishes(n, k):
    pro = tanaka_prolongation(free_gnla(n, k))
    assert pro.dims == (n * n, 0)


def test_vanishing_is_monotone():
    pro = extend(tanaka_prolongation(e13_gnla()), 2)
    assert pro.dims == (3, 2, 0, 0, 0)


def test_unknown_cap():
    with pytest.raises(SizeGuardError):
        tanaka_prolongation(free_gnla(3, 2), unknown_cap=5)
    with pytest.raises(InputError):
        tanaka_prolongation(heisenberg(), max_degree=-1)


def test_grading_element_acts_by_degree():
    pro = tanaka_prolongation(e13_gnla())
    E = grading_element(pro)
    for d in range(-4, 2):
        for i in range(pro.dim(d)):
            u = pro.element(d, i)
            w = bracket_prolonged(pro, E, u)
            assert w.degree == d
            assert w.coords == tuple(d * c for c in u.coords)


def _all_elements(pro, low, high):
    return [pro.element(d, i) for d in range(low, high + 1) for i in range(pro.dim(d))]


def _add(x, y):
    return tuple(a + b for a, b in zip(x.coords, y.coords))


@pytest.mark.parametrize("maker", [e13_gnla, lambda: free_gnla(2, 3)])
def test_jacobi_and_antisymmetry_on_full_algebra(maker):
    pro = tanaka_prolongation(maker())
    top = len(pro.levels) - 2
    els = _all_elements(pro, -pro.gnla.depth, top)
    for u in els:
        assert bracket_prolonged(pro, u, u).is_zero()
    for u, v, w in combinations(els, 3):
        if u.degree + v.degree + w.degree > top or u.degree + v.degree > top or v.degree + w.degree > top \
                or w.degree + u.degree > top:
            continue
        if u.degree + v.degree + w.degree < -pro.gnla.depth:
            continue
        a = bracket_prolonged(pro, bracket_prolonged(pro, u, v), w)
        b = bracket_prolonged(pro, bracket_prolonged(pro, v, w), u)
        c = bracket_prolonged(pro, bracket_prolonged(pro, w, u), v)
        assert all(x + y + z == 0 for x, y, z in zip(a.coords, b.coords, c.coords))


def test_antisymmetry_mixed_degrees():
    pro = tanaka_prolongation(e13_gnla())
    u, v = pro.element(1, 0), pro.element(-1, 1)
    assert _add(bracket_prolonged(pro, u, v), bracket_prolonged(pro, v, u)) == (0,) * pro.dim(0)


def test_restriction_tensor_of_degree_zero_is_a_matrix():
    pro = tanaka_prolongation(heisenberg(), max_degree=1)
    E = grading_element(pro)
    tau = restriction_tensor(pro, E)
    assert tau == {(0,): (-1, 0), (1,): (0, -1)}
    assert restriction_tensor(pro, pro.element(-1, 0)) == {(): (1, 0)}
    with pytest.raises(InputError):
        restriction_tensor(pro, pro.element(-2, 0))


def test_from_images_rejects_non_derivation():
    pro = tanaka_prolongation(heisenberg(), max_degree=1)
    imgs = [GradedElement(-1, (Fraction(1), Fraction(0))), GradedElement(-1, (Fraction(0), Fraction(0))),
            GradedElement(-2, (Fraction(0),))]
    from tanakakit.errors import ConsistencyError
    with pytest.raises(ConsistencyError):
        pro.from_images(0, imgs)
