"""Symmetries of a distribution: exact certification, closure into a Lie
algebra, the filtration degree read off from iterated brackets, and the graded
symbol inside the Tanaka prolongation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import linalg
from .errors import ChartMismatchError, ConsistencyError, InputError, PropertyViolation
from .fieldalg import (Polynomial, PointQ, VectorField, apply, determinant, evaluate,
                       lie_bracket)
from .flag import DerivedFlag, flag_at, level_of
from .prolong import GradedElement, Prolongation, restriction_tensor

DEFAULT_FILTRATION_CAP = 8


def _flatten(X: VectorField) -> dict:
    return {(i, e): c for i, comp in enumerate(X.components) for e, c in comp.terms.items()}


def _check_frame(X, frame):
    frame = tuple(frame)
    if not frame:
        raise InputError("frame must be nonempty")
    for Y in frame:
        if Y.chart != X.chart:
            raise ChartMismatchError("field and frame live on different charts")
    return frame


def in_span_identically(Z: VectorField, frame: Sequence[VectorField]) -> bool:
    """All ``(r+1)``-minors of ``[frame | Z]`` vanish as polynomials (r = len(frame))."""
    r = len(frame)
    N = len(Z.chart)
    if r >= N:
        return True
    zero = Polynomial.zero(Z.chart)
    cols = [Y.components for Y in frame] + [Z.components]
    if Z.is_zero():
        return True
    # rows of Z that vanish cannot give a nonzero minor through the last column
    nz = [k for k in range(N) if not Z.components[k].is_zero()]
    for rows in combinations(range(N), r + 1):
        if not any(k in nz for k in rows):
            continue
        M = [[cols[j][k] for j in range(r + 1)] for k in rows]
        if determinant(M, zero):
            return False
    return True


def is_symmetry(X: VectorField, frame: Sequence[VectorField], point: PointQ | None = None) -> bool:
    """``[X, Y]`` lies in the span of the frame for every frame field ``Y``,
    as a polynomial identity (valid wherever the frame has full rank)."""
    frame = _check_frame(X, frame)
    point = point or PointQ.origin(X.chart)
    if linalg.rank(evaluate(Y, point) for Y in frame) != len(frame):
        raise InputError("frame is not pointwise independent at the base point")
    return all(in_span_identically(lie_bracket(X, Y), frame) for Y in frame)


@dataclass(frozen=True)
class SymmetryAlgebra:
    fields: tuple
    names: tuple
    structure: dict          # (a, b) with a < b -> {c: coefficient}
    closed: bool
    offending: tuple | None = None      # (a, b) of a bracket outside the constant span
    jacobi: bool | None = None

    @property
    def dim(self) -> int:
        return len(self.fields)

    def bracket(self, a: int, b: int) -> dict:
        if a == b:
            return {}
        if a < b:
            return dict(self.structure.get((a, b), {}))
        return {k: -v for k, v in self.structure.get((b, a), {}).items()}

    def to_dict(self):
        return {"dim": self.dim, "closed": self.closed, "jacobi": self.jacobi,
                "names": list(self.names),
                "offending": [self.names[i] for i in self.offending] if self.offending else None,
                "structure": {f"[{self.names[a]},{self.names[b]}]":
                              {self.names[k]: v for k, v in sorted(vals.items())}
                              for (a, b), vals in sorted(self.structure.items())}}


def _jacobi(sa: SymmetryAlgebra) -> bool:
    n = sa.dim

    def br(u: dict, v: dict) -> dict:
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in sa.bracket(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    for a, b, c in combinations(range(n), 3):
        ea, eb, ec = {a: 1}, {b: 1}, {c: 1}
        tot = {}
        for x, y, z in ((ea, eb, ec), (eb, ec, ea), (ec, ea, eb)):
            for k, v in br(br(x, y), z).items():
                tot[k] = tot.get(k, 0) + v
        if any(tot.values()):
            return False
    return True


def closure(fields: Sequence[VectorField], frame: Sequence[VectorField],
            names: Sequence[str] | None = None) -> SymmetryAlgebra:
    fields = tuple(fields)
    names = tuple(names) if names else tuple(f"X{i + 1}" for i in range(len(fields)))
    if not fields:
        raise InputError("no fields given")
    for nm, X in zip(names, fields):
        if not is_symmetry(X, frame):
            raise InputError(f"{nm} is not a symmetry of the distribution")
    solver = linalg.SpanSolver([_flatten(X) for X in fields])
    if solver.rank != len(fields):
        raise InputError("fields are linearly dependent over the constants")
    structure = {}
    for a, b in combinations(range(len(fields)), 2):
        B = lie_bracket(fields[a], fields[b])
        if B.is_zero():
            continue
        coords = solver.solve(_flatten(B))
        if coords is None:
            return SymmetryAlgebra(fields, names, structure, False, (a, b))
        vals = {k: c for k, c in enumerate(coords) if c}
        if vals:
            structure[(a, b)] = vals
    sa = SymmetryAlgebra(fields, names, structure, True)
    ok = _jacobi(sa)
    if not ok:
        raise ConsistencyError("structure constants of a closed span violate Jacobi")
    return SymmetryAlgebra(fields, names, structure, True, None, ok)


def vanishing_order_delta(f: Polynomial, frame: Sequence[VectorField], p: PointQ, k: int) -> bool:
    """All derivatives ``Y_1 ... Y_t (f)`` with ``t <= k`` along frame fields vanish at ``p``."""
    if k < 0:
        raise InputError("k must be >= 0")
    layer = {f}
    for t in range(k + 1):
        if any(g.evaluate(p.values) for g in layer):
            return False
        if t == k:
            break
        layer = {apply(Y, g) for g in layer for Y in frame}
        layer.discard(Polynomial.zero(f.variables))
        if not layer:
            return True
    return True


def iterated_bracket(X: VectorField, args: Sequence[VectorField]) -> VectorField:
    for Y in args:
        X = lie_bracket(X, Y)
    return X


def psi(X: VectorField, args: Sequence[VectorField], p: PointQ) -> tuple:
    """``[[..[X, Y_1], ..], Y_k]`` evaluated at ``p``."""
    return evaluate(iterated_bracket(X, args), p)


@dataclass(frozen=True, order=True)
class AtLeast:
    """Filtration degree known only to be at least ``value``."""
    value: int

    def __str__(self):
        return f">={self.value}"


def delta_representatives(df: DerivedFlag, p: PointQ, fp=None) -> tuple:
    """Spanning fields of D chosen as the adapted basis of ``D(p)``."""
    fp = fp or flag_at(df, p)
    return tuple(df.level(lvl)[idx] for lvl, idx in fp.representatives if lvl == 1)


def _psi_layers(X, reps, p, upto):
    """Yield ``(j, {index tuple: value})`` for ``Psi^{j}`` with ``j = 1..upto``."""
    layer = {(): X}
    for j in range(1, upto + 1):
        layer = {key + (a,): lie_bracket(Z, Y) for key, Z in layer.items() for a, Y in enumerate(reps)}
        yield j, {key: evaluate(Z, p) for key, Z in layer.items()}


def filtration_degree(X: VectorField, df: DerivedFlag, p: PointQ,
                      cap: int = DEFAULT_FILTRATION_CAP, check: bool = True):
    """Largest ``i`` with ``X`` in the i-th term of the filtration at ``p``.

    Negative when ``X(p) != 0``; otherwise the number of leading iterated
    bracket tensors on ``D(p)`` that vanish.  ``AtLeast(cap)`` if all up to
    ``cap`` vanish.
    """
    if check and not is_symmetry(X, df.frame, p):
        raise InputError("field is not a symmetry of the distribution")
    fp = flag_at(df, p)
    v = evaluate(X, p)
    if any(v):
        s = level_of(fp, v)
        if s is None:
            raise InputError("field value lies outside the flag at this point")
        return -s
    reps = delta_representatives(df, p, fp)
    for j, vals in _psi_layers(X, reps, p, cap + 1):
        if any(any(val) for val in vals.values()):
            return j - 1
    return AtLeast(cap)


@dataclass(frozen=True)
class GradedSymbol:
    degree: int
    coords: tuple | None = None          # class in g_degree for negative degrees
    tensor: dict | None = None           # Psi^{i+1} on the g_{-1} basis for i >= 0
    element: GradedElement | None = None  # matching element of the computed g_i
    frame: tuple = ()

    def to_dict(self):
        d = {"degree": self.degree, "frame": list(self.frame)}
        if self.coords is not None:
            d["class"] = list(self.coords)
        if self.element is not None:
            d["g_coords"] = list(self.element.coords)
        return d


def graded_symbol(X: VectorField, df: DerivedFlag, pro: Prolongation, p: PointQ,
                  degree: int | None = None) -> GradedSymbol:
    fp = flag_at(df, p)
    a = pro.gnla
    if tuple(a.labels) != tuple(fp.labels) or tuple(a.dims) != tuple(fp.growth):
        raise InputError("prolongation was not computed from the symbol at this point")
    i = filtration_degree(X, df, p) if degree is None else degree
    if isinstance(i, AtLeast):
        raise InputError(f"filtration degree {i} is beyond the cap")
    solver = linalg.SpanSolver([list(b) for b in fp.bases[-1]])
    grades = list(a.grades)
    if i < 0:
        coords = solver.solve(evaluate(X, p))
        if coords is None:
            raise PropertyViolation("field value outside the adapted basis")
        cls = tuple(c for c, g in zip(coords, grades) if g == i)
        if any(c for c, g in zip(coords, grades) if g < i) or not any(cls):
            raise PropertyViolation(f"value does not define a nonzero class of degree {i}")
        return GradedSymbol(i, cls, frame=fp.labels)
    if i >= len(pro.levels):
        raise InputError(f"degree {i} is beyond the computed prolongation")
    reps = delta_representatives(df, p, fp)
    n = len(reps)
    tensor = {}
    *_, (_, vals) = _psi_layers(X, reps, p, i + 1)
    for key, v in vals.items():
        coords = solver.solve(v)
        if coords is None or any(c for c, g in zip(coords, grades) if g != -1):
            raise PropertyViolation(f"Psi^{i + 1} leaves D(p) at arguments {key}")
        tensor[key] = tuple(coords[:n])
    # membership in the image of g_i.  The Psi arguments pair with the
    # restriction tensor in reverse order: for a symmetry S with S(p) = e_a,
    # [[X, S], Y_b](p) = Psi(Y_b, Y_a) + [X, [S, Y_b]](p) and the last term
    # vanishes for X of degree >= 1, so u(e_a)(e_b) = Psi(e_b, e_a).
    keys = sorted(tensor)
    gens = []
    for alpha in range(pro.dim(i)):
        tau = restriction_tensor(pro, pro.element(i, alpha))
        gens.append([c for k in keys for c in tau[k[::-1]]])
    target = [c for k in keys for c in tensor[k]]
    sol = linalg.solve(gens, target) if gens else (None if any(target) else [])
    if sol is None:
        raise PropertyViolation(f"symbol tensor of degree {i} is not in the computed g_{i}")
    return GradedSymbol(i, None, tensor, GradedElement(i, tuple(sol)), fp.labels)
