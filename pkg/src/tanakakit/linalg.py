"""Exact linear algebra over Q.

Row reduction is fraction free: each row is scaled to a primitive integer
vector and elimination uses integer cross-multiplication followed by content
removal.  Rows are sparse ``{column: int}`` maps, so column keys may be any
sortable hashable (ints, ``(component, exponent)`` pairs, ...).

A small generic Gauss-Jordan (``nullspace_generic``, ``solve_generic``) works
over any exact field whose elements support ``+ - * /`` and truth testing; it
is used for witnesses over quadratic extensions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _to_int_row(row) -> dict:
    """Sparse or dense rational row -> primitive sparse integer row."""
    items = row.items() if isinstance(row, dict) else enumerate(row)
    frs = {k: Fraction(v) for k, v in items if v}
    if not frs:
        return {}
    den = 1
    for v in frs.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return _primitive({k: int(v * den) for k, v in frs.items()})


class Echelon:
    """Incrementally maintained reduced echelon form of a row space.

    Pivot rows are kept fully reduced against each other (Gauss-Jordan), with
    positive pivot entries.
    """

    def __init__(self):
        self.rows: dict = {}      # pivot column -> primitive integer row
        self._order: list = []    # pivot columns in insertion order

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row) -> dict:
        """Return the (integer, primitive) remainder of ``row`` modulo the span."""
        r = row if isinstance(row, dict) and all(type(v) is int for v in row.values()) \
            else _to_int_row(row)
        r = dict(r)
        for p, prow in self.rows.items():
            a = r.get(p)
            if not a:
                continue
            b = prow[p]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {k: v * fa for k, v in r.items()}
            for k, v in prow.items():
                s = new.get(k, 0) - fb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            r = _primitive(new) if new else new
        return r

    def add(self, row) -> bool:
        """Insert a row; return True when it enlarged the span."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        if r[p] < 0:
            r = {k: -v for k, v in r.items()}
        for q, qrow in list(self.rows.items()):
            a = qrow.get(p)
            if not a:
                continue
            b = r[p]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {k: v * fa for k, v in qrow.items()}
            for k, v in r.items():
                s = new.get(k, 0) - fb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            new = _primitive(new)
            if new[q] < 0:
                new = {k: -v for k, v in new.items()}
            self.rows[q] = new
        self.rows[p] = r
        self._order.append(p)
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def pivots(self) -> list:
        return sorted(self.rows)

    def rref(self) -> list:
        """Rows of the reduced row echelon form as ``{col: Fraction}``, pivot 1."""
        out = []
        for p in sorted(self.rows):
            r = self.rows[p]
            lead = r[p]
            out.append({k: Fraction(v, lead) for k, v in r.items()})
        return out


def rank(rows: Iterable) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(rows: Iterable, ncols: int) -> list:
    """Basis of ``{x : A x = 0}`` for dense column indices ``0..ncols-1``.

    The basis is the standard one read off the reduced echelon form: one
    vector per free column, with a 1 in that column.  Vectors are lists of
    Fractions.
    """
    e = Echelon()
    for r in rows:
        e.add(r)
    piv = e.rref()
    pivcols = [min(r) for r in piv]
    pivset = set(pivcols)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for pc, r in zip(pivcols, piv):
            c = r.get(f)
            if c:
                v[pc] = -c
        basis.append(v)
    return basis


def dense(row: dict, ncols: int) -> list:
    v = [Fraction(0)] * ncols
    for k, c in row.items():
        v[k] = Fraction(c)
    return v


class SpanSolver:
    """Express vectors as combinations of a fixed list of generators.

    Generators may be dependent; ``solve`` returns one solution (free
    generators get coefficient 0) or ``None`` when the target is outside the
    span.  Vectors are sparse dicts or dense sequences.
    """

    def __init__(self, generators: Sequence):
        self.n = len(generators)
        # augmented rows: vector entries under ("v", key), identity under ("c", j)
        self._e = Echelon()
        self.independent = []
        for j, g in enumerate(generators):
            items = g.items() if isinstance(g, dict) else enumerate(g)
            row = {(0, k): Fraction(v) for k, v in items if v}
            if not row:
                continue
            row[(1, j)] = Fraction(1)
            r = self._e.reduce(row)
            if any(k[0] == 0 for k in r):
                self._e.add(r)
                self.independent.append(j)

    @property
    def rank(self) -> int:
        return len(self.independent)

    def solve(self, target):
        items = target.items() if isinstance(target, dict) else enumerate(target)
        row = {(0, k): Fraction(v) for k, v in items if v}
        if not row:
            return [Fraction(0)] * self.n
        # reduce target; the combination part records -coefficients scaled
        aug = dict(row)
        aug[(2, 0)] = Fraction(1)
        r = self._e.reduce(aug)
        if any(k[0] == 0 for k in r):
            return None
        scale = r.get((2, 0))
        coeffs = [Fraction(0)] * self.n
        for k, v in r.items():
            if k[0] == 1:
                coeffs[k[1]] = Fraction(-v, scale)
        return coeffs

    def contains(self, target) -> bool:
        return self.solve(target) is not None


def solve(generators: Sequence, target):
    return SpanSolver(generators).solve(target)


def independent_subset(vectors: Sequence) -> list:
    """Indices of a maximal independent subset chosen greedily in order."""
    e = Echelon()
    keep = []
    for i, v in enumerate(vectors):
        if e.add(v):
            keep.append(i)
    return keep


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def inverse(M: Sequence[Sequence]) -> list:
    """Inverse of a square rational matrix (raises ValueError if singular)."""
    n = len(M)
    cols = [[Fraction(M[i][j]) for i in range(n)] for j in range(n)]
    solver = SpanSolver(cols)
    if solver.rank != n:
        raise ValueError("singular matrix")
    inv_cols = []
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        inv_cols.append(solver.solve(e))
    return [[inv_cols[j][i] for j in range(n)] for i in range(n)]


# -- generic field routines -------------------------------------------------

def _rref_generic(rows: list, ncols: int, zero):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace_generic(rows: Sequence[Sequence], ncols: int, zero, one) -> list:
    """Nullspace over an arbitrary exact field (dense rows)."""
    red, pivots = _rref_generic(list(rows), ncols, zero)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for pc, row in zip(pivots, red):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def solve_generic(columns: Sequence[Sequence], target: Sequence, zero, one):
    """Solve ``sum_j c_j columns[j] = target`` over an exact field, or None."""
    m = len(target)
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    red, pivots = _rref_generic(rows, k + 1, zero)
    if k in pivots:
        return None
    sol = [zero] * k
    for pc, row in zip(pivots, red):
        sol[pc] = row[k]
    return sol
