"""Tanaka algebraic prolongation of a fundamental GNLA.

A degree ``k >= 0`` element ``u`` is stored through its values on the basis
of ``m``: ``u(e_b)`` is a coordinate vector in ``g_{k + grade(b)}``, which is a
piece of ``m`` when negative and an earlier prolongation level otherwise.
``g_k`` is the exact nullspace of the Leibniz constraints

    u([X, Y]) = [u(X), Y] + [X, u(Y)]

over all pairs of basis elements, with ``[v, Y] = v(Y)`` for ``v`` of
non-negative degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import ConsistencyError, InputError, SizeGuardError
from .gnla import GNLA, check_fundamental

DEFAULT_MAX_DEGREE = 10
DEFAULT_UNKNOWN_CAP = 20000


@dataclass(frozen=True)
class ProlongationLevel:
    degree: int
    basis: tuple     # basis[alpha][b] -> tuple of Fractions in g_{degree + grade(b)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_dict(self, with_basis=False):
        d = {"degree": self.degree, "dim": self.dim}
        if with_basis:
            d["basis"] = [[list(img) for img in u] for u in self.basis]
        return d


@dataclass(frozen=True)
class GradedElement:
    degree: int
    coords: tuple

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __neg__(self):
        return GradedElement(self.degree, tuple(-c for c in self.coords))


def _dim(a: GNLA, levels: Sequence[ProlongationLevel], d: int) -> int:
    if d < 0:
        return a.grade_dim(d)
    if d < len(levels):
        return levels[d].dim
    raise InputError(f"degree {d} beyond the computed prolongation")


def _br_basis(a: GNLA, levels, s: int, alpha: int, b: int) -> tuple:
    """``[beta_alpha, e_b]`` for ``beta_alpha`` the ``alpha``-th basis element of ``g_s``."""
    gb = a.grades[b]
    t = s + gb
    if s >= 0:
        return levels[s].basis[alpha][b]
    if t < -a.depth:
        return ()
    i = a.grade_range(s)[alpha]
    vals = a.bracket_basis(i, b)
    rng = a.grade_range(t)
    return tuple(Fraction(vals.get(k, 0)) for k in rng)


def prolong_step(a: GNLA, previous: Sequence[ProlongationLevel], k: int,
                 unknown_cap: int = DEFAULT_UNKNOWN_CAP) -> ProlongationLevel:
    if len(previous) < k:
        raise InputError(f"levels 0..{k - 1} are required to compute level {k}")
    previous = tuple(previous[:k])
    grades = a.grades
    N = a.size
    sizes = [_dim(a, previous, k + g) for g in grades]
    offsets = [0] * N
    for b in range(1, N):
        offsets[b] = offsets[b - 1] + sizes[b - 1]
    nunk = offsets[-1] + sizes[-1] if N else 0
    if nunk > unknown_cap:
        raise SizeGuardError(f"level {k} needs {nunk} unknowns (cap {unknown_cap})")

    rows = []
    for x in range(N):
        for y in range(x + 1, N):
            t = k + grades[x] + grades[y]
            if t < -a.depth:
                continue
            dt = _dim(a, previous, t)
            if dt == 0:
                continue
            eq = [dict() for _ in range(dt)]

            def add(r, col, c):
                if c:
                    s = eq[r].get(col, 0) + c
                    if s:
                        eq[r][col] = s
                    else:
                        eq[r].pop(col, None)

            # u([x, y])
            for c_idx, coef in a.bracket_basis(x, y).items():
                for r in range(dt):
                    add(r, offsets[c_idx] + r, coef)
            # - [u(x), y]
            for alpha in range(sizes[x]):
                vec = _br_basis(a, previous, k + grades[x], alpha, y)
                for r, c in enumerate(vec):
                    add(r, offsets[x] + alpha, -c)
            # - [x, u(y)] = + [u(y), x]
            for alpha in range(sizes[y]):
                vec = _br_basis(a, previous, k + grades[y], alpha, x)
                for r, c in enumerate(vec):
                    add(r, offsets[y] + alpha, c)
            rows.extend(e for e in eq if e)

    basis = []
    for v in linalg.nullspace(rows, nunk):
        basis.append(tuple(tuple(v[offsets[b]:offsets[b] + sizes[b]]) for b in range(N)))
    return ProlongationLevel(k, tuple(basis))


@dataclass(frozen=True)
class Prolongation:
    gnla: GNLA
    levels: tuple
    status: str                  # "terminated" | "capped"
    max_degree: int
    _solvers: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dims(self) -> tuple:
        return tuple(l.dim for l in self.levels)

    @property
    def terminated(self) -> bool:
        return self.status == "terminated"

    @property
    def total_dim(self) -> int | None:
        if not self.terminated:
            return None
        return self.gnla.size + sum(self.dims)

    def dim(self, d: int) -> int:
        if d < 0:
            return self.gnla.grade_dim(d)
        if d < len(self.levels):
            return self.levels[d].dim
        if self.terminated:
            return 0
        raise InputError(f"degree {d} beyond the computed range (capped at {self.max_degree})")

    def to_dict(self):
        return {"dims": list(self.dims), "total": self.total_dim,
                "terminated": self.terminated, "cap": self.max_degree}

    # element helpers ------------------------------------------------------
    def element(self, degree: int, index: int) -> GradedElement:
        n = self.dim(degree)
        coords = [Fraction(0)] * n
        coords[index] = Fraction(1)
        return GradedElement(degree, tuple(coords))

    def zero(self, degree: int) -> GradedElement:
        return GradedElement(degree, tuple(Fraction(0) for _ in range(self.dim(degree))))

    def images(self, u: GradedElement) -> list:
        """``u(e_b)`` for every basis element ``e_b`` of ``m`` (degree >= 0)."""
        a = self.gnla
        out = []
        for b, g in enumerate(a.grades):
            t = u.degree + g
            n = self.dim(t) if t >= -a.depth else 0
            acc = [Fraction(0)] * n
            if u.degree < len(self.levels):
                for alpha, c in enumerate(u.coords):
                    if c:
                        for r, v in enumerate(self.levels[u.degree].basis[alpha][b]):
                            acc[r] += c * v
            out.append(GradedElement(t, tuple(acc)))
        return out

    def from_images(self, degree: int, images: Sequence[GradedElement]) -> GradedElement:
        """Coordinates in ``g_degree`` of the map with the given values."""
        flat = []
        for img in images:
            flat.extend(img.coords)
        if degree >= len(self.levels):
            if self.terminated and not any(flat):
                return self.zero(degree)
            raise InputError(f"degree {degree} beyond the computed range")
        solver = self._solvers.get(degree)
        if solver is None:
            solver = linalg.SpanSolver([
                [c for img in u for c in img] for u in self.levels[degree].basis])
            self._solvers[degree] = solver
        coords = solver.solve(flat)
        if coords is None:
            raise ConsistencyError(f"map is not an element of g_{degree}")
        return GradedElement(degree, tuple(coords))


def tanaka_prolongation(a: GNLA, max_degree: int = DEFAULT_MAX_DEGREE,
                        unknown_cap: int = DEFAULT_UNKNOWN_CAP) -> Prolongation:
    if max_degree < 0:
        raise InputError("max_degree must be >= 0")
    if not check_fundamental(a):
        raise InputError("GNLA is not fundamental")
    levels = []
    status = "capped"
    for k in range(max_degree + 1):
        lvl = prolong_step(a, levels, k, unknown_cap)
        levels.append(lvl)
        if lvl.dim == 0:
            status = "terminated"
            break
    return Prolongation(a, tuple(levels), status, max_degree)


def extend(pro: Prolongation, extra: int = 1) -> Prolongation:
    """Compute ``extra`` more levels regardless of termination (for checks)."""
    levels = list(pro.levels)
    for _ in range(extra):
        levels.append(prolong_step(pro.gnla, levels, len(levels)))
    status = "terminated" if any(l.dim == 0 for l in levels) else "capped"
    return Prolongation(pro.gnla, tuple(levels), status, len(levels) - 1)


def bracket_prolonged(pro: Prolongation, u: GradedElement, v: GradedElement) -> GradedElement:
    """Graded bracket on ``m + g_0 + g_1 + ...``."""
    a = pro.gnla
    j, k = u.degree, v.degree
    d = j + k
    if j < 0 and k < 0:
        if d < -a.depth:
            return GradedElement(d, ())
        ru, rv = a.grade_range(j), a.grade_range(k)
        su = {ru[i]: c for i, c in enumerate(u.coords) if c}
        sv = {rv[i]: c for i, c in enumerate(v.coords) if c}
        w = a.bracket_sparse(su, sv)
        return GradedElement(d, tuple(Fraction(w.get(i, 0)) for i in a.grade_range(d)))
    if j < 0:
        return -bracket_prolonged(pro, v, u)
    if k < 0:
        # u applied to v
        rng = a.grade_range(k)
        n = pro.dim(d) if d >= -a.depth else 0
        acc = [Fraction(0)] * n
        imgs = pro.images(u)
        for i, c in enumerate(v.coords):
            if c:
                for r, x in enumerate(imgs[rng[i]].coords):
                    acc[r] += c * x
        return GradedElement(d, tuple(acc))
    # both non-negative: [[u,v], X] = [u, [v, X]] - [v, [u, X]]
    if d >= len(pro.levels) and not pro.terminated:
        raise InputError(f"degree {d} beyond the computed range")
    iu, iv = pro.images(u), pro.images(v)
    imgs = []
    for b in range(a.size):
        w1 = bracket_prolonged(pro, u, iv[b])
        w2 = bracket_prolonged(pro, v, iu[b])
        imgs.append(GradedElement(w1.degree, tuple(p - q for p, q in zip(w1.coords, w2.coords))))
    return pro.from_images(d, imgs)


def grading_element(pro: Prolongation) -> GradedElement:
    """The derivation acting on ``g_i`` by multiplication by ``i``, as an element of ``g_0``."""
    a = pro.gnla
    imgs = []
    for b, g in enumerate(a.grades):
        rng = a.grade_range(g)
        imgs.append(GradedElement(g, tuple(Fraction(g) if idx == b else Fraction(0) for idx in rng)))
    return pro.from_images(0, imgs)


def restriction_tensor(pro: Prolongation, u: GradedElement) -> dict:
    """The multilinear map ``(e_{a_1}, ..., e_{a_{d+1}}) -> [..[u, e_{a_1}], ..., e_{a_{d+1}}]``
    on the grade -1 basis, for ``u`` of degree ``d >= -1``; values are grade -1
    coordinate tuples keyed by index tuples."""
    a = pro.gnla
    if u.degree == -1:
        return {(): tuple(u.coords)}
    if u.degree < -1:
        raise InputError("restriction tensor needs degree >= -1")
    out = {}
    for i, idx in enumerate(a.grade_range(-1)):
        e = pro.element(-1, i)
        w = bracket_prolonged(pro, u, e)
        for key, val in restriction_tensor(pro, w).items():
            out[(i,) + key] = val
    return out
