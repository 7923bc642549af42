"""Model distributions from jet spaces and Monge equations, plus the
geometric prolongations that build larger distributions from smaller ones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .errors import InputError
from .fieldalg import Polynomial, PointQ, VectorField, apply, evaluate
from .flag import DerivedFlag, cauchy_characteristic_space, flag_at
from .modelio import Model, parse_expression


@dataclass(frozen=True)
class JetModel:
    kind: str
    params: tuple
    model: Model
    notes: str = ""

    @property
    def frame(self) -> tuple:
        return self.model.frame

    @property
    def chart(self) -> tuple:
        return self.model.coords


@dataclass(frozen=True)
class SymmetryField:
    name: str
    field: VectorField
    grade: int


def _d(chart, name, coefficient=1):
    return VectorField.coordinate(chart, name, coefficient)


def _var(chart, name):
    return Polynomial.variable(chart, name)


def _build(name, chart, fields: dict, dist: Sequence[str], marked=None) -> Model:
    return Model(name, tuple(chart), dict(fields), tuple(dist), "D", dict(marked or {}))


def trivial_base(rank: int, names: Sequence[str] | None = None) -> Model:
    """The flat distribution ``<d/da, d/db, ...>`` with role markers for prolongation."""
    names = tuple(names) if names else ("a", "b", "c")[:rank] if rank <= 3 else tuple(
        f"a{i}" for i in range(rank))
    if len(names) != rank:
        raise InputError("need one coordinate name per field")
    fields = {f"E{i + 1}": _d(names, n) for i, n in enumerate(names)}
    dist = tuple(fields)
    if rank == 2:
        marked = {"U": fields["E1"], "V": fields["E2"]}
    elif rank == 3:
        marked = {"X": fields["E1"], "Y": fields["E2"], "Z": fields["E3"]}
    else:
        marked = {}
    return _build(f"trivial{rank}", names, fields, dist, marked)


def cartan_jet(k: int) -> JetModel:
    """Cartan distribution on the jets ``J^k(R, R)`` with coordinates ``x, y0, ..., yk``."""
    if k < 1:
        raise InputError("k must be >= 1")
    chart = ("x",) + tuple(f"y{i}" for i in range(k + 1))
    Dx = _d(chart, "x")
    for i in range(k):
        Dx = Dx + _d(chart, f"y{i}", _var(chart, f"y{i + 1}"))
    V = _d(chart, f"y{k}")
    m = _build(f"C{k}", chart, {"Dx": Dx, "V": V}, ("Dx", "V"), {"U": Dx, "V": V})
    return JetModel("cartan_jet", (k,), m, "Ann{dy_i - y_{i+1} dx : i < k}")


def _monge_names(m, n):
    ys = ("y",) + tuple(f"y{i}" for i in range(1, m))
    zs = ("z",) + tuple(f"z{j}" for j in range(1, n + 1))
    return ys, zs


def monge(m: int, n: int) -> JetModel:
    """Rank 2 distribution of the Monge equation ``y^(m) = (z^(n))^2``."""
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    ys, zs = _monge_names(m, n)
    chart = ("x",) + ys + zs
    Dx = _d(chart, "x")
    for i in range(m - 1):
        Dx = Dx + _d(chart, ys[i], _var(chart, ys[i + 1]))
    Dx = Dx + _d(chart, ys[m - 1], _var(chart, zs[n]) ** 2)
    for j in range(n):
        Dx = Dx + _d(chart, zs[j], _var(chart, zs[j + 1]))
    V = _d(chart, zs[n])
    model = _build(f"E{m}{n}", chart, {"Dx": Dx, "V": V}, ("Dx", "V"), {"U": Dx, "V": V})
    return JetModel("monge", (m, n), model, f"y^({m}) = (z^({n}))^2")


# the eleven symmetries of the (1,3) Monge model with their grades
_E13_FIELDS = (
    ("Z0", "d/dz", -4),
    ("Z1", "x*d/dz + d/dz1", -3),
    ("Y0", "d/dy", -3),
    ("Z2", "1/2*x^2*d/dz + x*d/dz1 + d/dz2", -2),
    ("Z3", "2*z2*d/dy + 1/6*x^3*d/dz + 1/2*x^2*d/dz1 + x*d/dz2 + d/dz3", -1),
    ("S0", "d/dx", -1),
    ("Z4", "2*(x*z2 - z1)*d/dy + 1/24*x^4*d/dz + 1/6*x^3*d/dz1 + 1/2*x^2*d/dz2 + x*d/dz3", 0),
    ("S1", "x*d/dx + 5/2*z*d/dz + 3/2*z1*d/dz1 + 1/2*z2*d/dz2 - 1/2*z3*d/dz3", 0),
    ("R", "y*d/dy + 1/2*z*d/dz + 1/2*z1*d/dz1 + 1/2*z2*d/dz2 + 1/2*z3*d/dz3", 0),
    ("Z5", "2*(1/2*x^2*z2 - x*z1 + z)*d/dy + 1/120*x^5*d/dz + 1/24*x^4*d/dz1"
           " + 1/6*x^3*d/dz2 + 1/2*x^2*d/dz3", 1),
    ("S2", "x^2*d/dx + 9*z2^2*d/dy + 5*x*z*d/dz + (5*z + 3*x*z1)*d/dz1"
           " + (8*z1 + x*z2)*d/dz2 + (9*z2 - x*z3)*d/dz3", 1),
)


def e13_with_symmetries() -> tuple:
    """``monge(1, 3)`` together with its 11 graded symmetry fields."""
    jm = monge(1, 3)
    syms = [SymmetryField(name, parse_expression(text, jm.chart), grade)
            for name, text, grade in _E13_FIELDS]
    return jm, syms


def mixed_jet(m: int, n: int) -> JetModel:
    """Cartan distribution on ``J^m(R,R) x_R J^n(R,R)`` (rank 3)."""
    if m < 0 or n < 0 or (m == 0 and n == 0):
        raise InputError("need m, n >= 0, not both zero")
    chart = ("x",) + tuple(f"y{i}" for i in range(m + 1)) + tuple(f"z{j}" for j in range(n + 1))
    Dx = _d(chart, "x")
    for i in range(m):
        Dx = Dx + _d(chart, f"y{i}", _var(chart, f"y{i + 1}"))
    for j in range(n):
        Dx = Dx + _d(chart, f"z{j}", _var(chart, f"z{j + 1}"))
    fields = {"Dx": Dx, "Vy": _d(chart, f"y{m}"), "Vz": _d(chart, f"z{n}")}
    marked = {"X": fields["Vy"], "Y": fields["Vz"], "Z": Dx}
    return JetModel("mixed_jet", (m, n), _build(f"J{m}{n}", chart, fields, tuple(fields), marked))


def _w_names(l):
    return ("w",) + tuple(f"w{j}" for j in range(1, l + 1))


def product_with_jets(base: JetModel, l: int) -> JetModel:
    """Product of a Monge model with ``J^l(R, R)`` in the fibre variable ``w``."""
    if base.kind != "monge":
        raise InputError("product_with_jets expects a Monge model")
    if l < 1:
        raise InputError("l must be >= 1")
    ws = _w_names(l)
    if set(ws) & set(base.chart):
        raise InputError("base chart already uses w coordinates")
    chart = base.chart + ws
    Dx = base.model.fields["Dx"].rename(chart)
    for j in range(l):
        Dx = Dx + _d(chart, ws[j], _var(chart, ws[j + 1]))
    V = base.model.fields["V"].rename(chart)
    W = _d(chart, ws[l])
    m = _build(base.model.name + f"xJ{l}", chart, {"Dx": Dx, "V": V, "W": W}, ("Dx", "V", "W"))
    return JetModel("product", (base.params, l), m, "Monge model times jets of w")


def total_derivative(model: Model, f: Polynomial, times: int = 1) -> Polynomial:
    for _ in range(times):
        f = apply(model.fields["Dx"], f)
    return f


def prolonged_w_field(jm: JetModel, f: Polynomial) -> VectorField:
    """The prolongation ``sum_k Dx^k(f) d/dw_k`` of ``f(w) d/dw``."""
    if jm.kind != "product":
        raise InputError("expects a product_with_jets model")
    l = jm.params[1]
    ws = _w_names(l)
    chart = jm.chart
    f = f.rename(chart) if f.variables != chart else f
    X = VectorField.zero(chart)
    g = f
    for k in range(l + 1):
        X = X + _d(chart, ws[k], g)
        if k < l:
            g = total_derivative(jm.model, g)
    return X


def _fresh(chart, base: str) -> str:
    if base not in chart:
        return base
    i = 1
    while f"{base}{i}" in chart:
        i += 1
    return f"{base}{i}"


def _role(model: Model, role: str) -> VectorField:
    if role not in model.marked:
        raise InputError(f"model has no marked field {role!r}")
    return model.marked[role]


def prolong_rank2(base: Model) -> Model:
    """``<U, V>`` on M  ->  ``<U + t V, d/dt>`` on M x R (affine chart)."""
    V = _role(base, "V")
    frame = base.frame
    if len(frame) != 2:
        raise InputError("rank-2 prolongation needs a rank-2 frame")
    others = [X for X in frame if X != V]
    if len(others) != 1:
        raise InputError("marked V must be one of the two frame fields")
    U = base.marked.get("U", others[0])
    t = _fresh(base.coords, "t")
    chart = base.coords + (t,)
    U2 = U.rename(chart) + _var(chart, t) * V.rename(chart)
    T = _d(chart, t)
    return _build(base.name + "P", chart, {"U": U2, "V": T}, ("U", "V"), {"U": U2, "V": T})


def prolong_rank3(base: Model, kind: str) -> Model:
    """Rank-3 prolongations ``Ia``, ``Ib`` and ``II`` of a frame with roles X, Y, Z.

    The result carries roles again so the construction can be iterated: the
    new vertical field takes the place of the role it replaced.
    """
    X, Y, Z = (_role(base, r) for r in ("X", "Y", "Z"))
    if kind in ("Ia", "Ib"):
        t = _fresh(base.coords, "t")
        chart = base.coords + (t,)
        X, Y, Z = (F.rename(chart) for F in (X, Y, Z))
        T = _d(chart, t)
        tv = _var(chart, t)
        if kind == "Ia":
            Znew = Z + tv * X
            fields = {"Y": Y, "T": T, "Z": Znew}
            marked = {"X": T, "Y": Y, "Z": Znew}
        else:
            Znew = Z + tv * Y
            fields = {"X": X, "T": T, "Z": Znew}
            marked = {"X": X, "Y": T, "Z": Znew}
    elif kind == "II":
        u = _fresh(base.coords, "u")
        v = _fresh(base.coords + (u,), "v")
        chart = base.coords + (u, v)
        X, Y, Z = (F.rename(chart) for F in (X, Y, Z))
        U, Vf = _d(chart, u), _d(chart, v)
        Znew = Z + _var(chart, u) * X + _var(chart, v) * Y
        fields = {"U": U, "V": Vf, "Z": Znew}
        marked = {"X": U, "Y": Vf, "Z": Znew}
    else:
        raise InputError(f"unknown prolongation type {kind!r} (use Ia, Ib or II)")
    return _build(base.name + kind, chart, fields, tuple(fields), marked)


# -- Goursat and de-prolongation ----------------------------------------------

def goursat_test(df: DerivedFlag, p: PointQ) -> bool:
    """Weak growth vector at ``p`` is ``(2, 1, 1, ..., 1)`` and reaches the full tangent space."""
    if len(df.frame) != 2:
        raise InputError("goursat_test expects a rank-2 frame")
    fp = flag_at(df, p)
    g = fp.growth
    return (len(g) >= 2 and g[0] == 2 and all(x == 1 for x in g[1:])
            and sum(g) == len(df.chart))


@dataclass(frozen=True)
class DeprolongationWitness:
    direction: tuple
    caveat: str = ""


def deprolongation_witness(df: DerivedFlag, p: PointQ) -> DeprolongationWitness | None:
    """A direction of ``D(p)`` that is a Cauchy characteristic of ``D_2`` at ``p``."""
    if len(df.frame) != 2:
        raise InputError("deprolongation_witness expects a rank-2 frame")
    fp = flag_at(df, p)
    if len(fp.growth) < 2:
        return None
    cs = cauchy_characteristic_space(df, 2, p)
    delta = [evaluate(X, p) for X in df.frame]
    # intersection of span(cs.basis) and span(delta)
    a, b = len(cs.basis), len(delta)
    n = len(df.chart)
    rows = [[cs.basis[i][k] for i in range(a)] + [-delta[j][k] for j in range(b)] for k in range(n)]
    for sol in linalg.nullspace(rows, a + b):
        v = tuple(sum((sol[i] * cs.basis[i][k] for i in range(a)), 0) for k in range(n))
        if any(v):
            caveat = "length-2: D_2 is the whole tangent space" if len(fp.growth) == 2 else ""
            return DeprolongationWitness(v, caveat)
    return None
