import dataclasses

import pytest
import sympy as sp

from tanakakit import models
from tanakakit.errors import InputError
from tanakakit.fieldalg import PointQ
from tanakakit.flag import derived_flag, flag_at
from tanakakit.modelio import parse_expression
from tanakakit.symcheck import is_symmetry


def growth(model, p=None):
    return flag_at(derived_flag(model.frame), p or PointQ.origin(model.coords)).growth


# -- constructors -------------------------------------------------------------------

def test_cartan_jet_shapes():
    assert growth(models.cartan_jet(1).model) == (2, 1)
    assert growth(models.cartan_jet(3).model) == (2, 1, 1, 1)
    for k in range(1, 6):
        jm = models.cartan_jet(k)
        assert len(jm.frame) == 2
        assert jm.chart == ("x",) + tuple(f"y{i}" for i in range(k + 1))
    with pytest.raises(InputError):
        models.cartan_jet(0)


def test_monge_shapes():
    jm = models.monge(1, 3)
    assert jm.chart == ("x", "y", "z", "z1", "z2", "z3")
    assert growth(jm.model) == (2, 1, 2, 1)
    # y' = (z')^2 lives on (x, y, z, z1)
    assert models.monge(1, 1).chart == ("x", "y", "z", "z1")
    assert len(models.monge(1, 1).frame) == 2
    assert models.monge(2, 2).chart == ("x", "y", "y1", "z", "z1", "z2")
    with pytest.raises(InputError):
        models.monge(0, 2)


def test_e13_symmetry_list():
    jm, syms = models.e13_with_symmetries()
    assert len(syms) == 11
    grades = {s.name: s.grade for s in syms}
    assert grades["Z3"] == -1
    counts = [sum(1 for s in syms if s.grade == g) for g in range(-4, 2)]
    assert counts == [1, 2, 1, 2, 3, 2]
    assert all(is_symmetry(s.field, jm.frame) for s in syms)


def test_mixed_jets():
    jm = models.mixed_jet(1, 1)
    assert len(jm.frame) == 3 and len(jm.chart) == 5
    assert growth(models.mixed_jet(1, 2).model) == (3, 2, 1)
    # one side without derivatives: R x J^k
    assert growth(models.mixed_jet(0, 2).model) == (3, 1, 1)
    with pytest.raises(InputError):
        models.mixed_jet(0, 0)


def test_product_with_jets_shape():
    jm = models.product_with_jets(models.monge(1, 3), 2)
    assert jm.chart[-3:] == ("w", "w1", "w2")
    assert len(jm.frame) == 3
    with pytest.raises(InputError):
        models.product_with_jets(models.cartan_jet(2), 2)


# -- the f(w) d/dw family -----------------------------------------------------------

PRODUCT = models.product_with_jets(models.monge(1, 3), 2)


def _w_poly(expr):
    return parse_expression(f"({expr})*d/dx", PRODUCT.chart).components[0]


def _prolongation_oracle(expr):
    """sympy: f(w) d/dw + D(f) d/dw1 + D^2(f) d/dw2 with D = d/dx + w1 d/dw + w2 d/dw1."""
    w, w1, w2 = sp.symbols("w w1 w2")
    fx = sp.sympify(expr.replace("^", "**"))

    def D(g):
        return sp.expand(w1 * sp.diff(g, w) + w2 * sp.diff(g, w1))

    return [fx, D(fx), D(D(fx))]


@pytest.mark.parametrize("expr", ["1", "w", "w^2", "w^3"])
def test_prolonged_w_fields_are_symmetries(expr):
    X = models.prolonged_w_field(PRODUCT, _w_poly(expr))
    assert is_symmetry(X, PRODUCT.frame)
    comps = X.components[-3:]
    ref = _prolongation_oracle(expr)
    for c, r in zip(comps, ref):
        assert sp.expand(sp.sympify(str(c).replace("^", "**")) - r) == 0


def test_prolonged_w_fields_are_independent():
    from tanakakit import linalg
    fields = [models.prolonged_w_field(PRODUCT, _w_poly(e)) for e in ["1", "w", "w^2", "w^3"]]
    flat = [{(i, e): c for i, comp in enumerate(X.components) for e, c in comp.terms.items()} for X in fields]
    assert linalg.rank(flat) == 4


def test_w_squared_prolongation_text():
    X = models.prolonged_w_field(PRODUCT, _w_poly("w^2"))
    expected = parse_expression("w^2*d/dw + 2*w*w1*d/dw1 + (2*w*w2 + 2*w1^2)*d/dw2", PRODUCT.chart)
    assert X == expected


def test_non_prolonged_field_fails():
    assert not is_symmetry(parse_expression("w^2*d/dw", PRODUCT.chart), PRODUCT.frame)


# -- geometric prolongations ---------------------------------------------------------

def test_rank2_prolongation_of_trivial_base_is_contact():
    m = models.prolong_rank2(models.trivial_base(2))
    assert m.coords == ("a", "b", "t")
    assert m.frame[0] == parse_expression("d/da + t*d/db", m.coords)
    assert growth(m) == (2, 1)


@pytest.mark.parametrize("k", range(1, 6))
def test_iterated_rank2_prolongation_matches_cartan(k):
    m = models.trivial_base(2)
    for _ in range(k):
        m = models.prolong_rank2(m)
    assert growth(m) == growth(models.cartan_jet(k).model) == (2,) + (1,) * k
    assert growth(m)[0] == 2


def test_rank2_prolongation_needs_marked_field():
    jm = models.monge(1, 3)
    bare = dataclasses.replace(jm.model, marked={})
    with pytest.raises(InputError):
        models.prolong_rank2(bare)


def test_rank3_type_two_on_trivial_base():
    m = models.prolong_rank3(models.trivial_base(3), "II")
    assert m.coords == ("a", "b", "c", "u", "v")
    assert set(m.frame) == {parse_expression(t, m.coords) for t in ("d/du", "d/dv", "d/dc + u*d/da + v*d/db")}
    assert growth(m) == (3, 2)


@pytest.mark.parametrize("kind", ["Ia", "Ib"])
def test_rank3_type_one_arity(kind):
    base = models.trivial_base(3)
    m = models.prolong_rank3(base, kind)
    assert len(m.coords) == len(base.coords) + 1
    assert len(m.frame) == 3


def test_type_two_twice_matches_second_jets():
    m = models.prolong_rank3(models.prolong_rank3(models.trivial_base(3), "II"), "II")
    assert growth(m) == (3, 2, 2)
    assert len(m.coords) == 7


def test_rank3_errors():
    with pytest.raises(InputError):
        models.prolong_rank3(models.trivial_base(3), "III")
    with pytest.raises(InputError):
        models.prolong_rank3(models.trivial_base(2), "II")


# -- Goursat and de-prolongation -------------------------------------------------------

@pytest.mark.parametrize("k", range(1, 7))
def test_goursat_and_deprolongation_on_cartan(k):
    jm = models.cartan_jet(k)
    df = derived_flag(jm.frame)
    p = PointQ.origin(jm.chart)
    assert models.goursat_test(df, p)
    w = models.deprolongation_witness(df, p)
    assert w is not None
    if k == 1:
        assert "length-2" in w.caveat
    else:
        # the direction is a multiple of d/dy_k
        assert w.direction[-1] != 0 and not any(w.direction[:-1])


def test_cartan_three_witness_is_top_jet_direction():
    jm = models.cartan_jet(3)
    w = models.deprolongation_witness(derived_flag(jm.frame), PointQ.origin(jm.chart))
    assert not any(w.direction[:-1]) and w.direction[-1] != 0


def test_monge_is_not_goursat_and_has_no_witness():
    jm = models.monge(1, 3)
    df = derived_flag(jm.frame)
    p = PointQ.origin(jm.chart)
    assert not models.goursat_test(df, p)
    assert models.deprolongation_witness(df, p) is None


@pytest.mark.parametrize("jm", [models.cartan_jet(2), models.cartan_jet(4), models.monge(1, 2),
                                models.monge(1, 3), models.monge(2, 2), models.monge(1, 4)],
                         ids=lambda jm: jm.model.name)
def test_witness_exists_iff_growth_starts_211(jm):
    df = derived_flag(jm.frame)
    p = PointQ.origin(jm.chart)
    g = flag_at(df, p).growth
    w = models.deprolongation_witness(df, p)
    assert (w is not None) == (g[:3] == (2, 1, 1))


def test_goursat_requires_rank_two():
    jm = models.mixed_jet(1, 1)
    with pytest.raises(InputError):
        models.goursat_test(derived_flag(jm.frame), PointQ.origin(jm.chart))
