"""Exact polynomial kernel: sparse polynomials over Q and the polynomial
vector fields built from them, with their Lie brackets.

Rationals are :class:`fractions.Fraction` throughout.  Polynomials are stored
as ``{exponent tuple: Fraction}`` maps and printed in graded reverse
lexicographic order, so printing and hashing are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ChartMismatchError, DegreeCapError, InputError

#: Products whose total degree exceeds this raise :class:`DegreeCapError`.
MAX_DEGREE = 64


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r}")


def grevlex_key(exponent: Sequence[int]):
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(exponent), tuple(-e for e in reversed(exponent)))


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable sparse polynomial in a fixed ordered list of variables."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nv:
                raise InputError(f"exponent {exp} does not match {nv} variables")
            c = as_rational(c)
            if c:
                clean[exp] = c
        self.terms = clean
        self._hash = None
        if clean and self.degree() > MAX_DEGREE:
            raise DegreeCapError(f"total degree {self.degree()} exceeds cap {MAX_DEGREE}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None
        exp = [0] * len(variables)
        exp[i] = 1
        return cls(variables, {tuple(exp): 1})

    @classmethod
    def _raw(cls, variables, terms):
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ChartMismatchError(
                    f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        return Polynomial.constant(self.variables, as_rational(other))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial._raw(self.variables, {})
        return Polynomial._raw(self.variables, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, VectorField):
            return other.__rmul__(self)
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if self.terms and other.terms and self.degree() + other.degree() > MAX_DEGREE:
            raise DegreeCapError(
                f"product degree {self.degree() + other.degree()} exceeds cap {MAX_DEGREE}")
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.variables, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial exponents must be non-negative integers")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.variables, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # -- calculus ---------------------------------------------------------
    def diff(self, var) -> "Polynomial":
        i = var if isinstance(var, int) else self._index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Polynomial._raw(self.variables, out)

    def _index(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None

    def evaluate(self, values: Sequence) -> Fraction:
        if len(values) != len(self.variables):
            raise ChartMismatchError("point has wrong number of coordinates")
        vals = [as_rational(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, values: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Compose: replace variables by polynomials (in this polynomial's variables)."""
        out = Polynomial.zero(self.variables)
        gens = [values.get(v, Polynomial.variable(self.variables, v)) for v in self.variables]
        for e, c in self.terms.items():
            term = Polynomial.constant(self.variables, c)
            for g, k in zip(gens, e):
                if k:
                    term = term * g ** k
            out = out + term
        return out

    def rename(self, variables: Sequence[str]) -> "Polynomial":
        """Re-embed into a larger (or reordered) variable list by name."""
        variables = tuple(variables)
        idx = []
        for v in self.variables:
            if v not in variables:
                raise ChartMismatchError(f"variable {v!r} missing from target chart")
            idx.append(variables.index(v))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in zip(idx, e):
                ne[i] += k
            out[tuple(ne)] = c
        return Polynomial._raw(variables, out)

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                s = format_rational(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{format_rational(abs(c))}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def poly_vars(variables: Sequence[str]):
    """Coordinate functions as polynomials, e.g. ``x, y = poly_vars('xy')``."""
    variables = tuple(variables)
    return tuple(Polynomial.variable(variables, v) for v in variables)


class VectorField:
    """Polynomial vector field ``sum_i components[i] * d/d chart[i]``."""

    __slots__ = ("chart", "components", "_hash")

    def __init__(self, chart: Sequence[str], components: Sequence):
        self.chart = tuple(chart)
        if len(components) != len(self.chart):
            raise ChartMismatchError(
                f"{len(components)} components for a chart of dimension {len(self.chart)}")
        comps = []
        for c in components:
            if isinstance(c, Polynomial):
                if c.variables != self.chart:
                    raise ChartMismatchError("component variables differ from the chart")
                comps.append(c)
            else:
                comps.append(Polynomial.constant(self.chart, as_rational(c)))
        self.components = tuple(comps)
        self._hash = None

    @classmethod
    def zero(cls, chart):
        return cls(chart, [0] * len(chart))

    @classmethod
    def coordinate(cls, chart, name, coefficient=1):
        """The field ``coefficient * d/d name``."""
        chart = tuple(chart)
        if name not in chart:
            raise InputError(f"unknown coordinate {name!r}")
        comps = [Polynomial.zero(chart)] * len(chart)
        c = coefficient if isinstance(coefficient, Polynomial) else Polynomial.constant(chart, coefficient)
        comps[chart.index(name)] = c
        return cls(chart, comps)

    def _check(self, other):
        if not isinstance(other, VectorField):
            raise InputError(f"expected a VectorField, got {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatchError(f"charts differ: {self.chart} vs {other.chart}")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def __add__(self, other):
        self._check(other)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.components])

    def __rmul__(self, other):
        if isinstance(other, Polynomial):
            if other.variables != self.chart:
                raise ChartMismatchError("coefficient polynomial lives on another chart")
            return VectorField(self.chart, [other * a for a in self.components])
        c = as_rational(other)
        return VectorField(self.chart, [a.scale(c) for a in self.components])

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, self.components))
        return self._hash

    def rename(self, chart: Sequence[str]) -> "VectorField":
        """Embed into a chart containing this one (new coordinates get zero components)."""
        chart = tuple(chart)
        comps = [Polynomial.zero(chart)] * len(chart)
        for name, c in zip(self.chart, self.components):
            if name not in chart:
                raise ChartMismatchError(f"coordinate {name!r} missing from target chart")
            comps[chart.index(name)] = c.rename(chart)
        return VectorField(chart, comps)

    def __str__(self):
        parts = []
        for name, c in zip(self.chart, self.components):
            if c.is_zero():
                continue
            if c == 1:
                parts.append(f"d/d{name}")
            elif len(c.terms) == 1:
                s = str(c)
                parts.append(f"{s} d/d{name}" if not s.startswith("-") else f"({s}) d/d{name}")
            else:
                parts.append(f"({c}) d/d{name}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorField({str(self)!r})"


class PointQ:
    """A rational point on a chart."""

    __slots__ = ("chart", "values")

    def __init__(self, chart: Sequence[str], values: Sequence):
        self.chart = tuple(chart)
        if len(values) != len(self.chart):
            raise ChartMismatchError("point has wrong number of coordinates")
        self.values = tuple(as_rational(v) for v in values)

    @classmethod
    def origin(cls, chart):
        return cls(chart, [0] * len(tuple(chart)))

    def __eq__(self, other):
        return isinstance(other, PointQ) and (self.chart, self.values) == (other.chart, other.values)

    def __hash__(self):
        return hash((self.chart, self.values))

    def __repr__(self):
        vals = ", ".join(f"{n}={format_rational(v)}" for n, v in zip(self.chart, self.values))
        return f"PointQ({vals})"


def _same_chart(*objs):
    chart = objs[0].chart
    for o in objs[1:]:
        if o.chart != chart:
            raise ChartMismatchError(f"charts differ: {chart} vs {o.chart}")


def apply(X: VectorField, f: Polynomial) -> Polynomial:
    """Directional derivative ``X(f)``."""
    if f.variables != X.chart:
        raise ChartMismatchError("function and field live on different charts")
    out = Polynomial.zero(X.chart)
    for i, c in enumerate(X.components):
        if c.terms:
            d = f.diff(i)
            if d.terms:
                out = out + c * d
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]`` with components ``X(Y_i) - Y(X_i)``."""
    _same_chart(X, Y)
    comps = [apply(X, b) - apply(Y, a) for a, b in zip(X.components, Y.components)]
    return VectorField(X.chart, comps)


def evaluate(X: VectorField, p: PointQ) -> tuple:
    _same_chart(X, p)
    return tuple(c.evaluate(p.values) for c in X.components)


def translate(X: VectorField, p: PointQ) -> VectorField:
    """Pull ``X`` back along ``x -> x + p`` (so the new origin sits at ``p``)."""
    _same_chart(X, p)
    gens = poly_vars(X.chart)
    shift = {v: g + c for v, g, c in zip(X.chart, gens, p.values)}
    return VectorField(X.chart, [c.substitute(shift) for c in X.components])


def span_frame(fields: Iterable[VectorField]) -> tuple:
    fields = tuple(fields)
    if fields:
        _same_chart(*fields)
    return fields


def determinant(M, zero):
    """Determinant of a square matrix over any commutative ring with ``zero``.

    Laplace expansion along rows, memoised on the set of used columns, so the
    cost is ``n * 2^n`` ring operations.
    """
    n = len(M)
    memo = {}

    def rec(i, used):
        if i == n:
            return zero + 1
        if used in memo:
            return memo[used]
        acc = zero
        pos = 0     # position of column j among the unused columns fixes the sign
        for j in range(n):
            if used & (1 << j):
                continue
            entry = M[i][j]
            if entry:
                term = entry * rec(i + 1, used | (1 << j))
                acc = acc + term if pos % 2 == 0 else acc - term
            pos += 1
        memo[used] = acc
        return acc

    return rec(0, 0)
