"""Reading and writing models in the description language, plus JSON reports.

A model file looks like::

    model E13
    coords x y z z1 z2 z3
    field Dx = d/dx + z3^2*d/dy + z1*d/dz + z2*d/dz1 + z3*d/dz2
    field V = d/dz3
    distribution D = [Dx, V]
    marked V = V
    point 0 0 0 0 0 0

Expressions are Q[coords]-linear combinations of ``d/d<coord>`` tokens and
previously defined field names, built with ``+ - * ^`` and parentheses.
Rationals are written ``a/b``; ``#`` starts a comment.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ParseError
from .fieldalg import Polynomial, PointQ, VectorField, format_rational

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=True)
class Model:
    name: str
    coords: tuple
    fields: Mapping[str, VectorField]
    distribution: tuple
    distribution_name: str = "D"
    marked: Mapping[str, VectorField] = field(default_factory=dict)
    base_point: PointQ | None = None

    @property
    def frame(self) -> tuple:
        return tuple(self.fields[n] for n in self.distribution)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def point(self) -> PointQ:
        return self.base_point if self.base_point is not None else PointQ.origin(self.coords)


# -- tokenizer ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<basis>d/d(?P<bname>[A-Za-z_][A-Za-z_0-9]*))
  | (?P<number>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^()\[\],=])
""", re.VERBOSE)


def _tokenize(text, line, col0):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
        kind = m.lastgroup
        if kind == "bname":
            kind = "basis"
        if kind != "ws":
            value = m.group("bname") if kind == "basis" else m.group(0)
            out.append((kind, value, col0 + pos + 1))
        pos = m.end()
    out.append(("end", "", col0 + len(text) + 1))
    return out


class _ExprParser:
    """Recursive descent over one expression; values are Polynomial or VectorField."""

    def __init__(self, tokens, coords, fields, line):
        self.toks = tokens
        self.i = 0
        self.coords = coords
        self.fields = fields
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def parse(self):
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()
            rhs = self.term()
            v = self.combine(v, rhs, op)
        return v

    def combine(self, a, b, op):
        if isinstance(a, VectorField) != isinstance(b, VectorField):
            self.error("cannot add a function and a vector field", op)
        return a + b if op[1] == "+" else a - b

    def term(self):
        v = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
            elif t[0] in ("number", "name", "basis") or (t[0] == "op" and t[1] == "("):
                pass  # implicit multiplication
            else:
                return v
            rhs = self.power()
            if isinstance(v, VectorField) and isinstance(rhs, VectorField):
                self.error("product of two vector fields", t)
            v = rhs * v if isinstance(rhs, VectorField) else (v * rhs if not isinstance(v, VectorField) else rhs * v)

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^", self.peek()[2]):
            tok = self.take()
            e = self.take()
            if e[0] != "number" or "/" in e[1]:
                self.error("exponent must be a non-negative integer", e)
            if isinstance(base, VectorField):
                self.error("cannot raise a vector field to a power", tok)
            base = base ** int(e[1])
        return base

    def atom(self):
        t = self.take()
        kind, val, col = t
        if kind == "number":
            return Polynomial.constant(self.coords, Fraction(val))
        if kind == "basis":
            if val not in self.coords:
                self.error(f"unknown coordinate {val!r} in d/d{val}", t)
            return VectorField.coordinate(self.coords, val)
        if kind == "name":
            if val in self.coords:
                return Polynomial.variable(self.coords, val)
            if val in self.fields:
                return self.fields[val]
            self.error(f"undefined name {val!r}", t)
        if kind == "op" and val == "(":
            v = self.expr()
            if self.take()[1] != ")":
                self.error("expected ')'")
            return v
        if kind == "op" and val == "-":
            return -self.power()
        self.error(f"unexpected token {val!r}", t)


def parse_expression(text: str, coords: Sequence[str], fields: Mapping[str, VectorField] | None = None,
                     line: int = 1, column: int = 0):
    toks = _tokenize(text, line, column)
    return _ExprParser(toks, tuple(coords), dict(fields or {}), line).parse()


def parse_field(text: str, model: Model) -> VectorField:
    """Parse a vector field expression on the model chart (field names allowed)."""
    v = parse_expression(text, model.coords, {**model.fields, **model.marked})
    if not isinstance(v, VectorField):
        raise ParseError("expression is a function, not a vector field", 1, 1)
    return v


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def parse_model(text: str) -> Model:
    name = "model"
    coords = None
    fields: dict = {}
    dist = None
    dist_name = "D"
    marked: dict = {}
    point = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        keyword, _, rest = stripped.partition(" ")
        rest_col = indent + len(keyword) + 1
        rest = rest.strip() if rest else ""
        if keyword == "model":
            if not rest or not _IDENT.match(rest):
                raise ParseError("model name must be an identifier", lineno, rest_col + 1)
            name = rest
        elif keyword == "coords":
            names = rest.split()
            if not names:
                raise ParseError("empty coordinate list", lineno, rest_col + 1)
            for n in names:
                if not _IDENT.match(n):
                    raise ParseError(f"bad coordinate name {n!r}", lineno, line.find(n) + 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate coordinate names", lineno, rest_col + 1)
            coords = tuple(names)
        elif keyword in ("field", "marked"):
            if coords is None:
                raise ParseError("coords must precede field definitions", lineno, 1)
            lhs, eq, rhs = rest.partition("=")
            lhs = lhs.strip()
            if not eq or not _IDENT.match(lhs):
                raise ParseError(f"expected '{keyword} NAME = expression'", lineno, rest_col + 1)
            if lhs in coords:
                raise ParseError(f"name {lhs!r} clashes with a coordinate", lineno, rest_col + 1)
            col = line.index("=", rest_col - 1) + 1
            value = parse_expression(rhs, coords, fields, lineno, col)
            if not isinstance(value, VectorField):
                raise ParseError("expression is a function, not a vector field", lineno, col + 1)
            if keyword == "field":
                if lhs in fields:
                    raise ParseError(f"field {lhs!r} defined twice", lineno, rest_col + 1)
                fields[lhs] = value
            else:
                marked[lhs] = value
        elif keyword == "distribution":
            m = re.match(r"([A-Za-z_][A-Za-z_0-9]*)\s*=\s*\[(.*)\]\s*$", rest)
            if not m:
                raise ParseError("expected 'distribution NAME = [F1, F2, ...]'", lineno, rest_col + 1)
            dist_name = m.group(1)
            names = [s.strip() for s in m.group(2).split(",") if s.strip()]
            if not names:
                raise ParseError("distribution must be nonempty", lineno, rest_col + 1)
            for n in names:
                if n not in fields:
                    raise ParseError(f"undefined field {n!r} in distribution", lineno, line.find(n) + 1)
            dist = tuple(names)
        elif keyword == "point":
            if coords is None:
                raise ParseError("coords must precede point", lineno, 1)
            vals = rest.split()
            if len(vals) != len(coords):
                raise ParseError(f"point needs {len(coords)} values", lineno, rest_col + 1)
            try:
                point = PointQ(coords, [Fraction(v) for v in vals])
            except (ValueError, ZeroDivisionError):
                raise ParseError("point values must be rationals a/b", lineno, rest_col + 1) from None
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, indent + 1)
    if coords is None:
        raise ParseError("missing coords line", None)
    if dist is None:
        raise ParseError("missing distribution line", None)
    return Model(name, coords, fields, dist, dist_name, marked, point)


def format_field(X: VectorField) -> str:
    """DSL text for a field; re-parses exactly."""
    parts = []
    for name, c in zip(X.chart, X.components):
        if c.is_zero():
            continue
        if c == 1:
            parts.append(f"d/d{name}")
        else:
            parts.append(f"({c})*d/d{name}")
    return " + ".join(parts) if parts else "0*d/d" + X.chart[0]


def print_model(m: Model) -> str:
    lines = [f"model {m.name}", "coords " + " ".join(m.coords)]
    for n, X in m.fields.items():
        lines.append(f"field {n} = {format_field(X)}")
    lines.append(f"distribution {m.distribution_name} = [{', '.join(m.distribution)}]")
    for role, X in m.marked.items():
        lines.append(f"marked {role} = {format_field(X)}")
    if m.base_point is not None:
        lines.append("point " + " ".join(format_rational(v) for v in m.base_point.values))
    return "\n".join(lines) + "\n"


# -- JSON ---------------------------------------------------------------------

def jsonable(obj):
    """Convert nested results to JSON-ready values; rationals become strings."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, PointQ):
        return {n: format_rational(v) for n, v in zip(obj.chart, obj.values)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


REPORT_KEYS = (
    "schema", "version", "model", "point", "growth_incremental", "growth_cumulative",
    "kappa", "bracket_generating", "tanaka", "h0_dim", "char_variety",
    "theorem1_bound", "theorem2_finite", "finiteness_verdict", "samples", "seed",
)


def emit_report(report) -> str:
    """Deterministic JSON text for a report object or plain mapping.

    Schema keys come first in a fixed order, any extra keys follow sorted.
    """
    data = jsonable(report)
    ordered = {}
    if isinstance(data, dict):
        for k in REPORT_KEYS:
            if k in data:
                ordered[k] = data[k]
        for k in sorted(data):
            if k not in ordered:
                ordered[k] = data[k]
    else:
        ordered = data
    return json.dumps(ordered, indent=2, ensure_ascii=False) + "\n"
