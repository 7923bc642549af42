"""Weak derived flag of a polynomial distribution and its pointwise data."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import ChartMismatchError, InputError
from .fieldalg import PointQ, VectorField, evaluate, lie_bracket

DEFAULT_KAPPA_CAP = 12
DEFAULT_PROBE_SAMPLES = 8


def probe_points(chart: Sequence[str], samples: int = DEFAULT_PROBE_SAMPLES, seed: int = 0,
                 include_origin: bool = True) -> list:
    """Origin plus ``samples`` seeded rational points with small entries."""
    rng = random.Random(seed)
    pts = [PointQ.origin(chart)] if include_origin else []
    for _ in range(samples):
        vals = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in chart]
        pts.append(PointQ(chart, vals))
    return pts


def _flatten(X: VectorField) -> dict:
    return {(i, e): c for i, comp in enumerate(X.components) for e, c in comp.terms.items()}


class DerivedFlag:
    """Spanning sets of the weak derived flag ``D_1 c D_2 c ...``.

    ``levels[i]`` spans ``D_{i+1}`` (cumulative: it starts with the spans of the
    previous level).  New spans are brackets ``[frame_j, s]`` with ``s`` a span
    added at the previous level; spans that are Q-linear combinations of
    earlier ones are dropped.  Levels beyond the initial computation are built
    on demand (up to ``kappa_cap``) by :meth:`level`.
    """

    def __init__(self, frame: Sequence[VectorField], kappa_cap: int = DEFAULT_KAPPA_CAP,
                 labels: Sequence[str] | None = None):
        frame = tuple(frame)
        if not frame:
            raise InputError("frame must be nonempty")
        if kappa_cap < 1:
            raise InputError("kappa_cap must be >= 1")
        chart = frame[0].chart
        for X in frame:
            if X.chart != chart:
                raise ChartMismatchError("frame fields live on different charts")
        self.frame = frame
        self.chart = chart
        self.kappa_cap = kappa_cap
        labels = tuple(labels) if labels else tuple(f"X{i + 1}" for i in range(len(frame)))
        self._echelon = linalg.Echelon()
        first, first_labels = [], []
        for X, lab in zip(frame, labels):
            # the frame is kept verbatim even if dependent; only brackets are pruned
            self._echelon.add(_flatten(X))
            first.append(X)
            first_labels.append(lab)
        self._levels = [tuple(first)]
        self._labels = [tuple(first_labels)]
        self._new = [tuple(range(len(first)))]
        self.stabilized = False
        self.status = "open"

    @property
    def depth(self) -> int:
        return len(self._levels)

    @property
    def levels(self) -> tuple:
        return tuple(self._levels)

    @property
    def labels(self) -> tuple:
        return tuple(self._labels)

    def _grow(self) -> bool:
        if self.stabilized or len(self._levels) >= self.kappa_cap:
            return False
        prev = self._levels[-1]
        prev_labels = self._labels[-1]
        spans, labs = list(prev), list(prev_labels)
        new = []
        for j, Xj in enumerate(self.frame):
            for s in self._new[-1]:
                B = lie_bracket(Xj, prev[s])
                if B.is_zero():
                    continue
                if self._echelon.add(_flatten(B)):
                    new.append(len(spans))
                    spans.append(B)
                    labs.append(f"[{self._labels[0][j]},{prev_labels[s]}]")
        if not new:
            self.stabilized = True
            self.status = "stabilized"
            return False
        self._levels.append(tuple(spans))
        self._labels.append(tuple(labs))
        self._new.append(tuple(new))
        return True

    def level(self, i: int) -> tuple:
        """Spanning fields of ``D_i`` (1-based), extending the flag if needed."""
        if i < 1:
            return ()
        while len(self._levels) < i and self._grow():
            pass
        return self._levels[min(i, len(self._levels)) - 1]

    def level_labels(self, i: int) -> tuple:
        self.level(i)
        return self._labels[min(i, len(self._labels)) - 1]

    def new_at(self, i: int) -> tuple:
        self.level(i)
        return self._new[i - 1] if i <= len(self._new) else ()

    def can_grow(self) -> bool:
        return not self.stabilized and len(self._levels) < self.kappa_cap

    def grow(self) -> bool:
        return self._grow()


def _rank_at(fields, p) -> int:
    return linalg.rank(evaluate(X, p) for X in fields)


def derived_flag(frame: Sequence[VectorField], kappa_cap: int = DEFAULT_KAPPA_CAP,
                 labels: Sequence[str] | None = None, samples: int = DEFAULT_PROBE_SAMPLES,
                 seed: int = 0) -> DerivedFlag:
    """Build the weak derived flag until the pointwise ranks at the probe
    points stop changing, the span becomes the whole tangent space there, the
    module stabilizes, or ``kappa_cap`` levels exist."""
    df = DerivedFlag(frame, kappa_cap, labels)
    pts = probe_points(df.chart, samples, seed)
    n = len(df.chart)
    ranks = [_rank_at(df.level(1), p) for p in pts]
    while True:
        if all(r == n for r in ranks):
            df.status = "full_rank"
            break
        if not df.grow():
            if df.status == "open":
                df.status = "capped"
            break
        new_ranks = [_rank_at(df.level(df.depth), p) for p in pts]
        if new_ranks == ranks:
            df.status = "stabilized_at_samples"
            # keep the redundant top level out of the pointwise picture
            break
        ranks = new_ranks
    df.generic_rank = max(ranks)
    return df


@dataclass(frozen=True)
class FlagAtPoint:
    point: PointQ
    bases: tuple          # bases[i]: adapted basis of D_{i+1}(p), rational vectors (prefix-nested)
    growth: tuple         # incremental growth vector
    kappa: int | None     # degree of nonholonomy, None when not bracket-generating
    representatives: tuple = field(default=())   # (level, index into level spans) per basis vector
    labels: tuple = field(default=())

    @property
    def cumulative(self) -> tuple:
        out, s = [], 0
        for g in self.growth:
            s += g
            out.append(s)
        return tuple(out)

    @property
    def dim(self) -> int:
        return len(self.point.chart)

    def to_dict(self):
        return {"point": self.point, "growth_incremental": list(self.growth),
                "growth_cumulative": list(self.cumulative), "kappa": self.kappa,
                "bracket_generating": is_bracket_generating(self),
                "adapted_frame": list(self.labels)}


def flag_at(df: DerivedFlag, p: PointQ) -> FlagAtPoint:
    if p.chart != df.chart:
        raise ChartMismatchError("point lives on another chart")
    n = len(df.chart)
    target = getattr(df, "generic_rank", n)
    echelon = linalg.Echelon()
    basis, reps, labs, growth = [], [], [], []
    level = 1
    while True:
        spans = df.level(level)
        if df.depth < level:
            break
        inc = 0
        for idx in df.new_at(level):
            v = evaluate(spans[idx], p)
            if echelon.add(v):
                basis.append(v)
                reps.append((level, idx))
                labs.append(df.level_labels(level)[idx])
                inc += 1
        growth.append(inc)
        # ranks at p never exceed the generic rank of the last computed level
        if echelon.rank >= target:
            break
        level += 1
    while growth and growth[-1] == 0:
        growth.pop()
    bases = []
    acc = 0
    for g in growth:
        acc += g
        bases.append(tuple(basis[:acc]))
    bg = echelon.rank == n
    return FlagAtPoint(p, tuple(bases), tuple(growth), len(growth) if bg else None,
                       tuple(reps), tuple(labs))


def is_bracket_generating(fp: FlagAtPoint) -> bool:
    return sum(fp.growth) == fp.dim


def coordinates(fp: FlagAtPoint, v: Sequence) -> list:
    """Coordinates of a tangent vector in the adapted basis (must be bracket-generating)."""
    basis = fp.bases[-1] if fp.bases else ()
    cols = [list(b) for b in basis]
    sol = linalg.solve(cols, list(v))
    if sol is None:
        raise InputError("vector is not in the span of the flag at this point")
    return sol


def level_of(fp: FlagAtPoint, v: Sequence) -> int | None:
    """Smallest ``s`` with ``v`` in ``D_s(p)`` (0 for the zero vector)."""
    if not any(v):
        return 0
    for s, basis in enumerate(fp.bases, start=1):
        if linalg.solve([list(b) for b in basis], list(v)) is not None:
            return s
    return None


@dataclass(frozen=True)
class RegularityProbe:
    points: tuple
    growths: tuple
    regular_at_samples: bool

    @property
    def samples(self) -> int:
        return len(self.points)

    def to_dict(self):
        return {"samples": self.samples, "regular_at_samples": self.regular_at_samples,
                "growths": [list(g) for g in self.growths], "points": list(self.points)}


def regularity_probe(df: DerivedFlag, points: Sequence[PointQ]) -> RegularityProbe:
    """Growth vectors at the given points; never a global regularity claim."""
    points = tuple(points)
    if not points:
        raise InputError("at least one probe point is required")
    growths = tuple(flag_at(df, p).growth for p in points)
    return RegularityProbe(points, growths, len(set(growths)) == 1)


@dataclass(frozen=True)
class CauchySpace:
    level: int
    point: PointQ
    basis: tuple               # vectors in T_p spanning the characteristic directions
    degree_bound: int

    @property
    def dim(self) -> int:
        return len(self.basis)


def cauchy_characteristic_space(df: DerivedFlag, level: int, p: PointQ,
                                degree_bound: int | None = None) -> CauchySpace:
    """Directions ``v`` in ``D_level(p)`` realised by a combination ``zeta`` of
    spans of ``D_level`` with ``[zeta, D_level](p)`` inside ``D_level(p)``.

    Only the values of the combination coefficients at ``p`` enter the bracket
    condition modulo ``D_level(p)``, so constant coefficients already realise
    every direction a bounded-degree polynomial combination could; the bound
    is recorded for the report.
    """
    if level < 1:
        raise InputError("level must be >= 1")
    if degree_bound is None:
        degree_bound = max(X.degree() for X in df.frame) + 2
    spans = df.level(level)
    if df.depth < level:
        raise InputError(f"flag has only {df.depth} levels")
    n = len(df.chart)
    values = [evaluate(s, p) for s in spans]
    # annihilator of D_level(p)
    ann = linalg.nullspace([list(v) for v in values], n)
    m = len(spans)
    rows = []
    if ann:
        brackets = [[evaluate(lie_bracket(spans[a], spans[b]), p) for a in range(m)]
                    for b in range(m)]
        for b in range(m):
            for w in ann:
                rows.append([sum((wi * ci for wi, ci in zip(w, brackets[b][a])), Fraction(0))
                             for a in range(m)])
    coeffs = linalg.nullspace(rows, m)
    e = linalg.Echelon()
    out = []
    for c in coeffs:
        v = [sum((ci * val[k] for ci, val in zip(c, values)), Fraction(0)) for k in range(n)]
        if any(v) and e.add(v):
            out.append(tuple(v))
    return CauchySpace(level, p, tuple(out), degree_bound)
