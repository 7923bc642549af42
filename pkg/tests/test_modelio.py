import json
from fractions import Fraction

import pytest

from tanakakit import models
from tanakakit.errors import ParseError
from tanakakit.fieldalg import PointQ, VectorField
from tanakakit.fintype import finiteness_report
from tanakakit.modelio import emit_report, format_field, parse_expression, parse_model, print_model

E13_SOURCE = """\
model E13
coords x y z z1 z2 z3
# the Monge equation y' = (z''')^2
field Dx = d/dx + z3^2*d/dy + z1*d/dz + z2*d/dz1 + z3*d/dz2
field V = d/dz3
distribution D = [Dx, V]
"""


def test_parse_small_model():
    m = parse_model("coords x y\nfield U = d/dx\nfield V = x d/dy\ndistribution D = [U, V]")
    assert m.coords == ("x", "y")
    assert len(m.frame) == 2
    assert m.frame[1] == VectorField.coordinate(("x", "y"), "y", parse_expression("x", ("x", "y")))


def test_e13_source_matches_constructor():
    m = parse_model(E13_SOURCE)
    ref = models.monge(1, 3).model
    assert m.coords == ref.coords
    assert m.frame == ref.frame


def test_unknown_coordinate_error_has_location():
    with pytest.raises(ParseError) as err:
        parse_model("coords x y\nfield W = d/dq\ndistribution D = [W]")
    assert err.value.line == 2
    assert err.value.column is not None


@pytest.mark.parametrize("text", [
    "coords x y\nfield U = d/dx +\ndistribution D = [U]",
    "coords x y\nfield U = 0.5*d/dx\ndistribution D = [U]",
    "coords x y\nfield U = d/dx\ndistribution D = [U, V]",
    "coords x x\nfield U = d/dx\ndistribution D = [U]",
    "coords x y\nfield U = x^2\ndistribution D = [U]",
    "coords x y\nfield U = d/dx\n",
    "coords x y\nfield U = d/dx\ndistribution D = [U]\npoint 1",
    "coords x y\nbogus\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_model(text)


def test_expression_features():
    chart = ("x", "y")
    X = parse_expression("(x + 1)^2*d/dy - 3/2*d/dx", chart)
    assert str(X) == "(-3/2) d/dx + (x^2 + 2*x + 1) d/dy"
    fields = {"U": parse_expression("d/dx", chart)}
    assert parse_expression("2*U + x*U", chart, fields) == parse_expression("(x + 2)*d/dx", chart)


def _all_models():
    base = models.trivial_base(2)
    yield models.monge(1, 3).model
    yield models.monge(2, 2).model
    yield models.cartan_jet(4).model
    yield models.mixed_jet(1, 2).model
    yield models.product_with_jets(models.monge(1, 3), 2).model
    yield models.prolong_rank2(models.prolong_rank2(base))
    yield models.prolong_rank3(models.trivial_base(3), "II")
    yield models.prolong_rank3(models.trivial_base(3), "Ia")


@pytest.mark.parametrize("m", list(_all_models()), ids=lambda m: m.name)
def test_print_parse_round_trip(m):
    assert parse_model(print_model(m)) == m


def test_round_trip_with_point_and_negative_fraction():
    m = parse_model("coords x y\nfield U = -3/2*d/dx + x*d/dy\ndistribution D = [U]\npoint 1/2 -3")
    text = print_model(m)
    assert "-3/2" in text
    back = parse_model(text)
    assert back == m
    assert back.base_point == PointQ(("x", "y"), [Fraction(1, 2), -3])


def test_print_omits_empty_marked_section():
    m = parse_model("coords x y\nfield U = d/dx\ndistribution D = [U]")
    assert "marked" not in print_model(m)


def test_format_field_zero():
    Z = VectorField.zero(("x", "y"))
    assert parse_expression(format_field(Z), ("x", "y")) == Z


def test_report_growth_both_conventions_and_key_order():
    rep = finiteness_report(models.monge(1, 3).model)
    text = emit_report(rep)
    data = json.loads(text)
    assert data["growth_incremental"] == [2, 1, 2, 1]
    assert data["growth_cumulative"] == [2, 3, 5, 6]
    keys = list(data)
    for k in ("model", "point", "growth_incremental", "growth_cumulative", "kappa",
              "bracket_generating", "tanaka", "h0_dim", "char_variety", "theorem1_bound",
              "theorem2_finite", "finiteness_verdict", "samples", "seed", "version"):
        assert k in data
    assert keys.index("model") < keys.index("tanaka") < keys.index("samples")
    assert text == emit_report(finiteness_report(models.monge(1, 3).model))


def test_undecided_status_is_emitted():
    from tanakakit.fintype import CharVarietyVerdict
    data = json.loads(emit_report({"char_variety": CharVarietyVerdict("undecided", stage="groebner")}))
    assert data["char_variety"]["verdict"] == "undecided"
    assert data["char_variety"]["exhausted"] == "groebner"


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        emit_report({"x": 0.5})
