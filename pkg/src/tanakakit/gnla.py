"""Graded nilpotent Lie algebras: extraction at a point, free truncated
algebras on a Hall basis, and free Lie algebra dimension counts."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from . import linalg
from .errors import (ConsistencyError, InputError, NonRegularPointError, NotBracketGeneratingError,
                     SizeGuardError)
from .fieldalg import PointQ, evaluate, format_rational, lie_bracket
from .flag import DerivedFlag, FlagAtPoint, flag_at, is_bracket_generating

FREE_DIM_CAP = 2000


@dataclass(frozen=True)
class GNLA:
    """``m = g_{-1} + ... + g_{-depth}`` with exact structure constants.

    Basis elements are ordered by grade (grade -1 first).  ``structure`` maps
    index pairs ``(i, j)`` with ``i < j`` to the nonzero coordinates
    ``{k: c}`` of ``[e_i, e_j]``.
    """

    dims: tuple
    labels: tuple
    structure: dict
    point: PointQ | None = field(default=None, compare=False)
    frame: tuple = field(default=(), compare=False)

    @property
    def depth(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return sum(self.dims)

    @property
    def grades(self) -> tuple:
        out = []
        for s, d in enumerate(self.dims, start=1):
            out.extend([-s] * d)
        return tuple(out)

    def grade_range(self, grade: int) -> range:
        """Basis indices of ``g_grade`` (empty outside ``-depth..-1``)."""
        if grade >= 0 or -grade > self.depth:
            return range(0)
        start = sum(self.dims[: -grade - 1])
        return range(start, start + self.dims[-grade - 1])

    def grade_dim(self, grade: int) -> int:
        return len(self.grade_range(grade))

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self.structure.get((i, j), {})
        return {k: -c for k, c in self.structure.get((j, i), {}).items()}

    def bracket(self, u: Sequence, v: Sequence) -> list:
        out = [Fraction(0)] * self.size
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += a * b * c
        return out

    def unit(self, i: int) -> list:
        v = [Fraction(0)] * self.size
        v[i] = Fraction(1)
        return v

    def bracket_sparse(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_basis(i, j).items():
                    s = out.get(k, 0) + a * b * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def check_jacobi(self) -> bool:
        g = self.grades
        for i, j, k in combinations(range(self.size), 3):
            if g[i] + g[j] + g[k] < -self.depth:
                continue
            ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
            s: dict = {}
            for t in (self.bracket_sparse(self.bracket_sparse(ei, ej), ek),
                      self.bracket_sparse(self.bracket_sparse(ej, ek), ei),
                      self.bracket_sparse(self.bracket_sparse(ek, ei), ej)):
                for key, c in t.items():
                    s[key] = s.get(key, 0) + c
            if any(s.values()):
                return False
        return True

    def check_graded(self) -> bool:
        g = self.grades
        for (i, j), vals in self.structure.items():
            for k in vals:
                if g[k] != g[i] + g[j]:
                    return False
        return True

    def fingerprint(self) -> str:
        payload = json.dumps([list(self.dims), sorted(
            [i, j, k, format_rational(c)] for (i, j), v in self.structure.items() for k, c in v.items())])
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_dict(self):
        return {
            "dims": list(self.dims),
            "labels": list(self.labels),
            "brackets": [
                {"i": i, "j": j, "k": k, "c": c}
                for (i, j), v in sorted(self.structure.items()) for k, c in sorted(v.items())
            ],
        }


def _validate(a: GNLA) -> GNLA:
    if not a.check_graded():
        raise ConsistencyError("structure constants violate the grading")
    if not a.check_jacobi():
        raise ConsistencyError("structure constants violate the Jacobi identity")
    return a


def gnla_at(df: DerivedFlag, p: PointQ, fp: FlagAtPoint | None = None) -> GNLA:
    """Symbol algebra of the distribution at ``p``.

    Representatives are the spanning fields picked by the flag row reduction;
    brackets of representatives are evaluated at ``p``, expressed in the
    adapted basis and projected to the expected grade.
    """
    fp = fp or flag_at(df, p)
    if not is_bracket_generating(fp):
        raise NotBracketGeneratingError(f"distribution is not bracket-generating at {p}")
    basis = fp.bases[-1]
    cols = [list(b) for b in basis]
    solver = linalg.SpanSolver(cols)
    grades = []
    for s, g in enumerate(fp.growth, start=1):
        grades.extend([-s] * g)
    fields = [df.level(lvl)[idx] for lvl, idx in fp.representatives]
    n = len(basis)
    structure = {}
    for i in range(n):
        for j in range(i + 1, n):
            target = grades[i] + grades[j]
            if -target > len(fp.growth):
                continue
            v = evaluate(lie_bracket(fields[i], fields[j]), p)
            coords = solver.solve(v)
            if coords is None:
                raise ConsistencyError("bracket value outside the tangent space basis")
            for k, c in enumerate(coords):
                if c and grades[k] < target:
                    raise ConsistencyError(
                        f"[{fp.labels[i]},{fp.labels[j]}] leaves D_{-target} at the point")
            vals = {k: c for k, c in enumerate(coords) if c and grades[k] == target}
            if vals:
                structure[(i, j)] = vals
    a = GNLA(tuple(fp.growth), tuple(fp.labels), structure, p, tuple(fp.labels))
    _validate(a)
    if not check_fundamental(a):
        # only happens where the flag ranks jump (growth like (1,0,1))
        raise NonRegularPointError(f"graded symbol at {p} is not fundamental; the flag is not regular there")
    return a


def check_fundamental(a: GNLA) -> bool:
    """True iff ``g_{-1}`` generates every grade under brackets."""
    if a.depth == 0:
        return True
    gens = [{i: Fraction(1)} for i in a.grade_range(-1)]
    layer = list(gens)
    for s in range(2, a.depth + 1):
        nxt = []
        e = linalg.Echelon()
        for g in gens:
            for v in layer:
                w = a.bracket_sparse(g, v)
                if w and e.add(w):
                    nxt.append(w)
        if e.rank != a.dims[s - 1]:
            return False
        layer = nxt
    return True


def from_structure(dims: Sequence[int], brackets: dict, labels: Sequence[str] | None = None) -> GNLA:
    """Build and validate a GNLA from ``{(i, j): {k: c}}`` (any index order)."""
    structure = {}
    for (i, j), vals in brackets.items():
        if i == j:
            continue
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        cur = structure.setdefault((i, j), {})
        for k, c in vals.items():
            c = Fraction(c) * sign
            cur[k] = cur.get(k, 0) + c
            if not cur[k]:
                del cur[k]
        if not cur:
            del structure[(i, j)]
    size = sum(dims)
    labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(size))
    return _validate(GNLA(tuple(dims), labels, structure))


# -- free Lie algebras -------------------------------------------------------

def mobius(m: int) -> int:
    if m < 1:
        raise InputError("mobius is defined for positive integers")
    result, d = 1, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


def witt_dim(n: int, k: int) -> int:
    """Dimension of the degree-``k`` part of the free Lie algebra on ``n`` generators."""
    if n < 1 or k < 1:
        raise InputError("witt_dim needs n >= 1 and k >= 1")
    total = sum(mobius(m) * n ** (k // m) for m in range(1, k + 1) if k % m == 0)
    return total // k


def free_total_dim(n: int, k: int) -> int:
    """Dimension of the free nilpotent Lie algebra of step ``k`` on ``n`` generators."""
    return sum(witt_dim(n, j) for j in range(1, k + 1))


@lru_cache(maxsize=None)
def hall_basis(n: int, k: int) -> tuple:
    """Hall basis trees up to degree ``k``: generators are ints, brackets pairs.

    Ordering is by degree, then by construction order; ``(u, v)`` is basic when
    ``u > v`` and, if ``u = (u1, u2)``, also ``u2 <= v``.
    """
    order = list(range(n))
    degree = {g: 1 for g in order}
    by_deg = {1: list(order)}
    pos = {g: i for i, g in enumerate(order)}
    for d in range(2, k + 1):
        cur = []
        for dv in range(1, d):
            du = d - dv
            for u in by_deg.get(du, []):
                for v in by_deg.get(dv, []):
                    if pos[u] <= pos[v]:
                        continue
                    if isinstance(u, tuple) and pos[u[1]] > pos[v]:
                        continue
                    cur.append((u, v))
        cur.sort(key=lambda t: (pos[t[0]], pos[t[1]]))
        by_deg[d] = cur
        for t in cur:
            pos[t] = len(order)
            order.append(t)
            degree[t] = d
    return tuple(order)


def _tree_degree(t) -> int:
    return 1 if isinstance(t, int) else _tree_degree(t[0]) + _tree_degree(t[1])


def _tree_label(t, names) -> str:
    if isinstance(t, int):
        return names[t]
    return f"[{_tree_label(t[0], names)},{_tree_label(t[1], names)}]"


def _expand(t) -> dict:
    """Lie polynomial of a tree as a map word -> integer coefficient."""
    if isinstance(t, int):
        return {(t,): 1}
    a, b = _expand(t[0]), _expand(t[1])
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            out[wa + wb] = out.get(wa + wb, 0) + ca * cb
            out[wb + wa] = out.get(wb + wa, 0) - ca * cb
    return {w: c for w, c in out.items() if c}


def generator_names(n: int) -> list:
    return [f"X{i + 1}" for i in range(n)]


def free_gnla(n: int, k: int, cap: int = FREE_DIM_CAP) -> GNLA:
    """Free nilpotent GNLA of step ``k`` on ``n`` generators (Hall basis)."""
    if n < 2 or k < 1:
        raise InputError("free_gnla needs n >= 2 and k >= 1")
    total = free_total_dim(n, k)
    if total > cap:
        raise SizeGuardError(f"free algebra of dimension {total} exceeds cap {cap}")
    trees = hall_basis(n, k)
    degs = [_tree_degree(t) for t in trees]
    polys = [_expand(t) for t in trees]
    solvers = {}
    for d in range(1, k + 1):
        idx = [i for i, dd in enumerate(degs) if dd == d]
        solvers[d] = (idx, linalg.SpanSolver([polys[i] for i in idx]))
        if solvers[d][1].rank != len(idx):
            raise ConsistencyError("Hall polynomials are dependent")
    structure = {}
    N = len(trees)
    for i in range(N):
        for j in range(i + 1, N):
            d = degs[i] + degs[j]
            if d > k:
                continue
            comm: dict = {}
            for wa, ca in polys[i].items():
                for wb, cb in polys[j].items():
                    comm[wa + wb] = comm.get(wa + wb, 0) + ca * cb
                    comm[wb + wa] = comm.get(wb + wa, 0) - ca * cb
            comm = {w: c for w, c in comm.items() if c}
            if not comm:
                continue
            idx, solver = solvers[d]
            coeffs = solver.solve(comm)
            if coeffs is None:
                raise ConsistencyError("bracket of Hall elements escaped the Hall span")
            vals = {idx[t]: c for t, c in enumerate(coeffs) if c}
            if vals:
                structure[(i, j)] = vals
    dims = tuple(degs.count(d) for d in range(1, k + 1))
    names = generator_names(n)
    labels = tuple(_tree_label(t, names) for t in trees)
    return _validate(GNLA(dims, labels, structure))


def heisenberg() -> GNLA:
    return free_gnla(2, 2)
