"""Finite-type criteria for the symmetry algebra of a distribution.

``h0`` is the part of ``g_0`` acting trivially below grade -1, viewed inside
``gl(g_{-1})``.  The characteristic variety is the set of covectors ``p`` for
which some ``q != 0`` makes ``q p^T`` an element of the complexified ``h0``;
its emptiness forces finite type.  :func:`char_variety` decides this exactly
where it can and says ``undecided`` (naming the stage) where the budget runs
out.

With ``B_1 .. B_c`` spanning the annihilator of ``h0`` under the trace pairing
``<B, M> = sum B_ab M_ab``, a rank one matrix ``q p^T`` lies in ``h0`` iff
``K(p) q = 0`` where the rows of ``K(p)`` are ``(B_alpha p)^T``.  So ``p`` is
characteristic iff all maximal minors of ``K(p)`` vanish.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import groebner, linalg
from .config import Config
from .errors import InputError, NonRegularPointError, NotBracketGeneratingError, SizeGuardError
from .fieldalg import PointQ, Polynomial, determinant, format_rational
from .flag import derived_flag, flag_at, is_bracket_generating, probe_points
from .gnla import GNLA, free_total_dim, gnla_at
from .prolong import Prolongation, tanaka_prolongation

DEFAULT_GRID_BOUND = 2
DEFAULT_GRID_CAP = 20000
DEFAULT_RANDOM_SAMPLES = 64
DEFAULT_LINES = 6
DEFAULT_MINOR_CAP = 4000


# -- h0 ----------------------------------------------------------------------

@dataclass(frozen=True)
class H0Subspace:
    n: int
    basis: tuple          # n x n matrices M with M[r][c] = coefficient of e_r in u(e_c)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def flat(self) -> list:
        return [[x for row in M for x in row] for M in self.basis]

    def to_dict(self):
        return {"n": self.n, "dim": self.dim, "basis": [[list(r) for r in M] for M in self.basis]}


def h0(pro: Prolongation) -> H0Subspace:
    a = pro.gnla
    n = a.grade_dim(-1)
    if not pro.levels:
        raise InputError("level 0 of the prolongation is not computed")
    g0 = pro.levels[0].basis
    low = [b for b, g in enumerate(a.grades) if g < -1]
    # combinations of g0 basis vanishing on every grade below -1
    rows = {}
    for alpha, u in enumerate(g0):
        for b in low:
            for r, c in enumerate(u[b]):
                if c:
                    rows.setdefault((b, r), {})[alpha] = c
    combos = linalg.nullspace(list(rows.values()), len(g0))
    minus1 = a.grade_range(-1)
    mats = []
    for c in combos:
        M = [[Fraction(0)] * n for _ in range(n)]
        for alpha, ca in enumerate(c):
            if ca:
                for col, b in enumerate(minus1):
                    for r, v in enumerate(g0[alpha][b]):
                        M[r][col] += ca * v
        mats.append(tuple(tuple(row) for row in M))
    return H0Subspace(n, tuple(mats))


def h0_from_matrices(n: int, matrices: Sequence) -> H0Subspace:
    """An ``H0Subspace`` from explicit matrices (independent subset kept)."""
    flat = [[Fraction(x) for row in M for x in row] for M in matrices]
    for f in flat:
        if len(f) != n * n:
            raise InputError(f"matrices must be {n}x{n}")
    keep = linalg.independent_subset(flat)
    mats = tuple(tuple(tuple(flat[i][r * n:(r + 1) * n]) for r in range(n)) for i in keep)
    return H0Subspace(n, mats)


# -- quadratic extensions ---------------------------------------------------

def _squarefree(d: int) -> tuple:
    """``d = s^2 * f`` with ``f`` squarefree; returns ``(s, f)``."""
    s, f, k = 1, d, 2
    while k * k <= f:
        while f % (k * k) == 0:
            f //= k * k
            s *= k
        k += 1
    return s, f


class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a, b`` and squarefree ``d > 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _lift(self, o):
        if isinstance(o, QuadraticNumber):
            if o.d != self.d and o.b and self.b:
                raise ValueError("mixed quadratic fields")
            return o
        return QuadraticNumber(o, 0, self.d)

    def __add__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * self.d,
                               self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        norm = self.a * self.a - self.b * self.b * self.d
        if not norm:
            raise ZeroDivisionError("zero in quadratic field")
        return QuadraticNumber(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return not self.b and self.a == o
        if isinstance(o, QuadraticNumber):
            return self.a == o.a and self.b == o.b and (not self.b or self.d == o.d)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 0))

    def __str__(self):
        if not self.b:
            return format_rational(self.a)
        rad = f"sqrt({self.d})" if self.b == 1 else f"{format_rational(self.b)}*sqrt({self.d})"
        if not self.a:
            return rad
        sign = "+" if not rad.startswith("-") else ""
        return f"{format_rational(self.a)}{sign}{rad}"

    __repr__ = __str__


# -- univariate helpers (dict degree -> Fraction) ---------------------------

def _u_trim(f):
    return {k: v for k, v in f.items() if v}


def _u_deg(f):
    return max(f) if f else -1


def _u_divmod(f, g):
    f = dict(f)
    q = {}
    dg, lg = _u_deg(g), g[_u_deg(g)]
    while f and _u_deg(f) >= dg:
        df = _u_deg(f)
        c = f[df] / lg
        q[df - dg] = c
        for k, v in g.items():
            f[k + df - dg] = f.get(k + df - dg, 0) - c * v
        f = _u_trim(f)
    return q, f


def _u_gcd(f, g):
    while g:
        f, g = g, _u_divmod(f, g)[1]
    if not f:
        return f
    lc = f[_u_deg(f)]
    return {k: v / lc for k, v in f.items()}


def _divisors(m: int, cap: int = 5000):
    m = abs(m)
    if m > 10 ** 10:
        return None
    out = []
    for k in range(1, math.isqrt(m) + 1):
        if m % k == 0:
            out.extend({k, m // k})
            if len(out) > cap:
                return None
    return out


def _rational_roots(f):
    """Rational roots of a univariate polynomial (None if the search is too large)."""
    f = _u_trim(f)
    roots = []
    if not f:
        return roots
    low = min(f)
    if low > 0:
        roots.append(Fraction(0))
        f = {k - low: v for k, v in f.items()}
    den = 1
    for v in f.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {k: int(v * den) for k, v in f.items()}
    lead, const = ints[_u_deg(ints)], ints.get(0, 0)
    if not const:
        return roots
    ps, qs = _divisors(const), _divisors(lead)
    if ps is None or qs is None:
        return None
    for pn in ps:
        for qd in qs:
            for s in (1, -1):
                r = Fraction(s * pn, qd)
                if r not in roots and sum(v * r ** k for k, v in f.items()) == 0:
                    roots.append(r)
    return roots


# -- characteristic variety -------------------------------------------------

@dataclass(frozen=True)
class CharVarietyBudget:
    grid_bound: int = DEFAULT_GRID_BOUND
    grid_cap: int = DEFAULT_GRID_CAP
    random_samples: int = DEFAULT_RANDOM_SAMPLES
    lines: int = DEFAULT_LINES
    groebner_budget: int = groebner.DEFAULT_BUDGET
    minor_cap: int = DEFAULT_MINOR_CAP
    seed: int = 0

    def to_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class CharVarietyVerdict:
    verdict: str                     # "empty" | "nonempty" | "undecided"
    witness_p: tuple | None = None
    witness_q: tuple | None = None
    stage: str = ""                  # pipeline stage that settled (or exhausted) the question
    certificate: str = ""
    groebner_steps: int = 0
    budget: CharVarietyBudget = field(default_factory=CharVarietyBudget)

    @property
    def has_witness(self) -> bool:
        return self.witness_p is not None

    def to_dict(self):
        d = {"verdict": self.verdict,
             "witness_p": [str(x) for x in self.witness_p] if self.witness_p else None,
             "witness_q": [str(x) for x in self.witness_q] if self.witness_q else None,
             "stage": self.stage, "certificate": self.certificate,
             "groebner_steps": self.groebner_steps}
        if self.verdict == "undecided":
            d["exhausted"] = self.stage
        return d


def annihilator(h: H0Subspace) -> list:
    """Basis of ``{B : sum B_ab M_ab = 0 for all M in h}`` as n x n matrices."""
    n = h.n
    null = linalg.nullspace(h.flat(), n * n)
    return [[v[r * n:(r + 1) * n] for r in range(n)] for v in null]


def _k_matrix(ann, p):
    # row alpha: (B_alpha p)^T, i.e. entries sum_b B[a][b] p_b
    return [[sum((B[a][b] * p[b] for b in range(len(p))), p[0] * 0) for a in range(len(p))]
            for B in ann]


def _kernel_q(ann, p, zero, one):
    n = len(p)
    K = _k_matrix(ann, p)
    if not K:
        v = [zero] * n
        v[0] = one
        return v
    ker = linalg.nullspace_generic(K, n, zero, one)
    return ker[0] if ker else None


def validate_witness(h: H0Subspace, p: Sequence, q: Sequence) -> bool:
    """Exact check that ``q p^T`` lies in the span of ``h`` (over the witness field)."""
    if not any(p) or not any(q):
        return False
    n = h.n
    if len(p) != n or len(q) != n:
        return False
    sample = next((x for x in list(p) + list(q) if isinstance(x, QuadraticNumber)), None)
    if sample is None:
        zero, one = Fraction(0), Fraction(1)
    else:
        zero, one = QuadraticNumber(0, 0, sample.d), QuadraticNumber(1, 0, sample.d)
    target = [q[r] * p[c] + zero for r in range(n) for c in range(n)]
    cols = [[x + zero for x in f] for f in h.flat()]
    if not cols:
        return False
    return linalg.solve_generic(cols, target, zero, one) is not None


def _primitive_covectors(n, bound):
    seen = set()
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(v):
            continue
        first = next(x for x in v if x)
        if first < 0:
            continue
        g = 0
        for x in v:
            g = math.gcd(g, x)
        if g != 1:
            continue
        if v not in seen:
            seen.add(v)
            yield tuple(Fraction(x) for x in v)


def minor_ideal(h: H0Subspace, minor_cap: int = DEFAULT_MINOR_CAP) -> list:
    """Q-independent maximal minors of ``K(p)`` as polynomials in ``p1..pn``."""
    n = h.n
    ann = annihilator(h)
    names = [f"p{i + 1}" for i in range(n)]
    pv = [Polynomial.variable(names, x) for x in names]
    zero = Polynomial.zero(names)
    K = _k_matrix(ann, pv) if ann else []
    if len(K) < n:
        return []
    count = math.comb(len(K), n)
    if count > minor_cap:
        raise SizeGuardError(f"{count} maximal minors exceed the cap {minor_cap}")
    ech = linalg.Echelon()
    out = []
    for rows in itertools.combinations(range(len(K)), n):
        d = determinant([K[r] for r in rows], zero)
        if d and ech.add(dict(d.terms)):
            out.append(d)
    return out


def _line_candidates(ann, minors, n, rng, lines):
    """Points of the variety on random lines ``p0 + t p1`` (rational and real quadratic)."""
    for _ in range(lines):
        p0 = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        p1 = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        if not any(p1):
            continue
        g = None
        for m in minors:
            # restrict to the line by substitution into a univariate dict
            uni = {}
            for e, c in m.terms.items():
                term = {0: Fraction(c)}
                for i, k in enumerate(e):
                    for _ in range(k):
                        lin = {0: p0[i], 1: p1[i]}
                        nxt = {}
                        for a, x in term.items():
                            for b, y in lin.items():
                                if y:
                                    nxt[a + b] = nxt.get(a + b, 0) + x * y
                        term = nxt
                for a, x in term.items():
                    uni[a] = uni.get(a, 0) + x
            uni = _u_trim(uni)
            g = uni if g is None else _u_gcd(g, uni)
            if g is not None and _u_deg(g) == 0:
                break
        if not g or _u_deg(g) <= 0:
            continue
        roots = _rational_roots(g)
        if roots is None:
            continue
        for r in roots:
            yield [a + r * b for a, b in zip(p0, p1)]
        rest = g
        for r in roots:
            while True:
                q, rem = _u_divmod(rest, {0: -r, 1: Fraction(1)})
                if rem:
                    break
                rest = q
        if _u_deg(rest) == 2:
            A, B, C = rest.get(2, 0), rest.get(1, 0), rest.get(0, 0)
            disc = B * B - 4 * A * C
            if disc > 0:
                num = disc.numerator * disc.denominator
                s, d = _squarefree(num)
                if d > 1:
                    # sqrt(disc) = s*sqrt(d)/den
                    root = QuadraticNumber(-B / (2 * A), Fraction(s, disc.denominator) / (2 * A), d)
                    yield [root * b + a for a, b in zip(p0, p1)]


def char_variety(h: H0Subspace, budget: CharVarietyBudget | None = None) -> CharVarietyVerdict:
    budget = budget or CharVarietyBudget()
    n = h.n

    def done(verdict, stage, p=None, q=None, certificate="", steps=0):
        return CharVarietyVerdict(verdict, tuple(p) if p is not None else None,
                                  tuple(q) if q is not None else None, stage, certificate, steps, budget)

    if h.dim == 0:
        return done("empty", "trivial", certificate="h0 = 0")
    for M in h.basis:
        if linalg.rank(M) == 1:
            col = next(c for c in range(n) if any(M[r][c] for r in range(n)))
            q = [M[r][col] for r in range(n)]
            r0 = next(r for r in range(n) if q[r])
            p = [M[r0][c] / q[r0] for c in range(n)]
            return done("nonempty", "trivial", p, q, "rank one basis matrix")

    ann = annihilator(h)
    zero, one = Fraction(0), Fraction(1)

    def try_p(p):
        q = _kernel_q(ann, p, zero, one) if not isinstance(p[0], QuadraticNumber) else \
            _kernel_q(ann, p, QuadraticNumber(0, 0, p[0].d), QuadraticNumber(1, 0, p[0].d))
        if q is not None and validate_witness(h, p, q):
            return q
        return None

    # grid of small primitive covectors
    for count, p in enumerate(_primitive_covectors(n, budget.grid_bound)):
        if count >= budget.grid_cap:
            break
        q = try_p(p)
        if q is not None:
            return done("nonempty", "grid", p, q, "rational witness")

    rng = random.Random(budget.seed)
    for _ in range(budget.random_samples):
        p = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
        if not any(p):
            continue
        q = try_p(p)
        if q is not None:
            return done("nonempty", "random", p, q, "rational witness")

    try:
        minors = minor_ideal(h, budget.minor_cap)
    except SizeGuardError as exc:
        return done("undecided", "minors", certificate=str(exc))
    if not minors:
        # fewer annihilator rows than n: every p has a kernel (already caught above)
        return done("undecided", "minors", certificate="no maximal minors")

    for p in _line_candidates(ann, minors, n, rng, budget.lines):
        if not any(p):
            continue
        q = try_p(p)
        if q is not None:
            kind = "quadratic witness" if isinstance(p[0], QuadraticNumber) or any(
                isinstance(x, QuadraticNumber) and x.b for x in p) else "rational witness"
            return done("nonempty", "line", p, q, kind)

    counter = groebner.Counter(budget.groebner_budget)
    gens = [dict(m.terms) for m in minors]
    for i in range(n):
        chart = list(gens)
        e = [0] * n
        e[i] = 1
        chart.append({tuple(e): Fraction(1), (0,) * n: Fraction(-1)})
        try:
            G = groebner.groebner(chart, n, counter=counter)
        except groebner.BudgetExhausted as exc:
            return done("undecided", "groebner", certificate=str(exc), steps=exc.steps)
        if not groebner.is_unit_ideal(G):
            return done("nonempty", "groebner", certificate=(
                f"complex certificate via ideal non-triviality (chart p{i + 1}=1)"), steps=counter.steps)
    return done("empty", "groebner", certificate="1 lies in every chart ideal", steps=counter.steps)


# -- growth criterion and bounds ----------------------------------------------

def theorem2_status(growth: Sequence[int]) -> str:
    """``finite`` or ``inconclusive`` from the first entries of the growth vector."""
    g = list(growth)
    if not g:
        raise InputError("growth vector must be nonempty")
    n = g[0]
    if n > 2:
        if len(g) < 2:
            return "inconclusive"
        return "finite" if g[0] + g[1] > n * (n - 1) // 2 + 2 else "inconclusive"
    if n == 2:
        if len(g) < 3:
            return "inconclusive"
        return "finite" if g[0] + g[1] + g[2] == 5 else "inconclusive"
    return "inconclusive"


def theorem2_finite(growth: Sequence[int]) -> bool:
    return theorem2_status(growth) == "finite"


def symmetry_bound_free(n: int, k: int) -> int | None:
    """Upper bound for the symmetry dimension of a distribution with free symbol."""
    if n < 2 or k < 2:
        raise InputError("need n >= 2 and k >= 2")
    if k == 2 and n == 2:
        return None
    if k == 2:
        return 2 * n * n + n
    if k == 3 and n == 2:
        return 14
    return free_total_dim(n, k) + n * n


# -- combined report ----------------------------------------------------------

@dataclass(frozen=True)
class SampleRecord:
    point: PointQ
    growth: tuple
    status: str                 # "ok" | "not_bracket_generating" | "non_regular" | "size_guard"
    fingerprint: str | None = None
    tanaka: dict | None = None

    def to_dict(self):
        return {"point": self.point, "growth": list(self.growth), "status": self.status,
                "fingerprint": self.fingerprint, "tanaka": self.tanaka}


@dataclass(frozen=True)
class FinitenessReport:
    model: str
    point: PointQ
    growth: tuple
    kappa: int | None
    bracket_generating: bool
    gnla: GNLA
    prolongation: Prolongation
    h0: H0Subspace
    char_variety: CharVarietyVerdict
    theorem1_bound: int | None
    theorem2: str
    finiteness_verdict: str
    finite_routes: tuple
    samples: tuple
    strong_regularity: str
    adapted_frame: tuple
    config: Config
    version: str

    @property
    def growth_cumulative(self) -> tuple:
        return tuple(itertools.accumulate(self.growth))

    def to_dict(self):
        from .modelio import SCHEMA_VERSION
        return {
            "schema": SCHEMA_VERSION,
            "version": self.version,
            "model": self.model,
            "point": self.point,
            "growth_incremental": list(self.growth),
            "growth_cumulative": list(self.growth_cumulative),
            "kappa": self.kappa,
            "bracket_generating": self.bracket_generating,
            "tanaka": self.prolongation.to_dict(),
            "h0_dim": self.h0.dim,
            "char_variety": self.char_variety.to_dict(),
            "theorem1_bound": self.theorem1_bound,
            "theorem1_scope": "minimum over probe points",
            "theorem2_finite": self.theorem2 == "finite",
            "theorem2": self.theorem2,
            "finiteness_verdict": self.finiteness_verdict,
            "finite_routes": list(self.finite_routes),
            "samples": [s.to_dict() for s in self.samples],
            "strong_regularity": self.strong_regularity,
            "adapted_frame": list(self.adapted_frame),
            "seed": self.config.seed,
            "config": self.config.to_dict(),
        }


def finiteness_report(model, point: PointQ | None = None, config: Config | None = None) -> FinitenessReport:
    from . import __version__ as VERSION

    config = config or Config()
    point = point or model.point()
    if point.chart != tuple(model.coords):
        raise InputError("point does not live on the model chart")
    df = derived_flag(model.frame, config.kappa_cap, model.distribution,
                      config.probe_samples, config.seed)
    fp = flag_at(df, point)
    if not is_bracket_generating(fp):
        raise NotBracketGeneratingError(
            f"distribution is not bracket-generating at the point (growth {list(fp.growth)})")
    a = gnla_at(df, point, fp)
    pro = tanaka_prolongation(a, config.max_degree, config.unknown_cap)
    h = h0(pro)
    cv = char_variety(h, CharVarietyBudget(groebner_budget=config.groebner_budget, seed=config.seed))

    # probe points: the base point and seeded samples; identical symbols share a prolongation
    cache = {a.fingerprint(): pro}
    samples = [SampleRecord(point, fp.growth, "ok", a.fingerprint(), pro.to_dict())]
    for p in probe_points(model.coords, config.probe_samples, config.seed, include_origin=False):
        fq = flag_at(df, p)
        if not is_bracket_generating(fq):
            samples.append(SampleRecord(p, fq.growth, "not_bracket_generating"))
            continue
        try:
            b = gnla_at(df, p, fq)
        except NonRegularPointError:
            samples.append(SampleRecord(p, fq.growth, "non_regular"))
            continue
        fpr = b.fingerprint()
        if fpr not in cache:
            try:
                cache[fpr] = tanaka_prolongation(b, config.max_degree, config.unknown_cap)
            except SizeGuardError:
                samples.append(SampleRecord(p, fq.growth, "size_guard", fpr))
                continue
        samples.append(SampleRecord(p, fq.growth, "ok", fpr, cache[fpr].to_dict()))

    ok = [s for s in samples if s.status == "ok"]
    bound = None
    if len(ok) == len(samples) and all(s.tanaka["terminated"] for s in ok):
        bound = min(s.tanaka["total"] for s in ok)

    growths = {s.growth for s in samples}
    prints = {s.fingerprint for s in ok}
    if len(growths) > 1 or len(ok) != len(samples):
        regularity = "not regular at samples"
    elif len(prints) == 1:
        regularity = "consistent at samples"
    else:
        regularity = "isomorphism undetermined"

    t2 = theorem2_status(fp.growth)
    routes = []
    if cv.verdict == "empty":
        routes.append("finite_char_variety")
    if t2 == "finite":
        routes.append("finite_theorem2")
    verdict = routes[0] if routes else "inconclusive"
    return FinitenessReport(model.name, point, fp.growth, fp.kappa, True, a, pro, h, cv, bound,
                            t2, verdict, tuple(routes), tuple(samples), regularity,
                            fp.labels, config, VERSION)
