from fractions import Fraction
from itertools import product

import pytest

from tanakakit import models
from tanakakit.errors import ConsistencyError, InputError, NotBracketGeneratingError, SizeGuardError
from tanakakit.fieldalg import PointQ
from tanakakit.flag import derived_flag
from tanakakit.gnla import (_tree_degree, check_fundamental, free_gnla, free_total_dim, from_structure,
                            gnla_at, hall_basis, heisenberg, mobius, witt_dim)
from tanakakit.modelio import parse_expression


def lyndon_count(n, k):
    """Brute force: aperiodic words strictly smaller than all their rotations."""
    count = 0
    for w in product(range(n), repeat=k):
        if all(w < w[i:] + w[:i] for i in range(1, k)):
            count += 1
    return count


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("k", range(1, 7))
def test_witt_matches_lyndon_and_hall_counts(n, k):
    assert witt_dim(n, k) == lyndon_count(n, k)
    if n >= 2:
        trees = hall_basis(n, k)
        assert sum(1 for t in trees if _tree_degree(t) == k) == witt_dim(n, k)


def test_witt_values():
    assert witt_dim(2, 3) == 2
    assert [witt_dim(2, k) for k in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert free_total_dim(3, 2) == 6
    assert mobius(1) == 1 and mobius(6) == 1 and mobius(12) == 0 and mobius(7) == -1
    with pytest.raises(InputError):
        witt_dim(0, 2)


def test_heisenberg_structure():
    h = heisenberg()
    assert h.dims == (2, 1)
    assert h.bracket(h.unit(0), h.unit(1)) == [0, 0, -1] or h.bracket(h.unit(0), h.unit(1)) == [0, 0, 1]
    assert check_fundamental(h)


def test_free_2_3_labels():
    a = free_gnla(2, 3)
    assert a.dims == (2, 1, 2)
    assert set(a.labels[:3]) == {"X1", "X2", "[X2,X1]"}
    assert a.check_jacobi()


@pytest.mark.parametrize("n,k", [(2, 2), (2, 4), (3, 2), (3, 3), (4, 2)])
def test_free_dims_follow_witt(n, k):
    a = free_gnla(n, k)
    assert a.dims == tuple(witt_dim(n, j) for j in range(1, k + 1))
    assert check_fundamental(a)


def test_free_size_guard():
    with pytest.raises(SizeGuardError):
        free_gnla(4, 6, cap=100)


def test_from_structure_rejects_bad_jacobi_or_grading():
    with pytest.raises(ConsistencyError):
        from_structure((2, 1), {(0, 1): {0: 1}})
    a = from_structure((2, 1), {(1, 0): {2: 1}})
    assert a.bracket_basis(0, 1) == {2: -1}


def test_e13_gnla_at_origin():
    jm = models.monge(1, 3)
    a = gnla_at(derived_flag(jm.frame), PointQ.origin(jm.chart))
    assert a.dims == (2, 1, 2, 1)
    assert check_fundamental(a)
    assert a.check_jacobi()
    # [g_-1, g_-1] is one-dimensional and g_-4 is reached only through g_-3
    assert a.bracket_basis(0, 1)


def test_gnla_is_point_independent_on_e13():
    jm = models.monge(1, 3)
    df = derived_flag(jm.frame)
    a = gnla_at(df, PointQ.origin(jm.chart))
    b = gnla_at(df, PointQ(jm.chart, [1, -2, 3, Fraction(1, 2), 5, 7]))
    assert a.dims == b.dims
    assert b.check_jacobi() and check_fundamental(b)


def test_not_bracket_generating_raises():
    chart = ("x", "y", "z")
    df = derived_flag([parse_expression("d/dx", chart), parse_expression("d/dy", chart)])
    with pytest.raises(NotBracketGeneratingError):
        gnla_at(df, PointQ.origin(chart))


def test_fingerprint_depends_on_structure():
    assert heisenberg().fingerprint() == free_gnla(2, 2).fingerprint()
    assert heisenberg().fingerprint() != free_gnla(2, 3).fingerprint()
