"""Buchberger's algorithm over Q in degrevlex order.

Small and budgeted: every monomial cancellation during reduction counts as
one step, and :class:`BudgetExhausted` is raised once the budget is spent.
Polynomials here are plain ``{exponent tuple: Fraction}`` dicts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .fieldalg import Polynomial, grevlex_key

DEFAULT_BUDGET = 50000


class BudgetExhausted(Exception):
    def __init__(self, steps):
        super().__init__(f"Groebner budget exhausted after {steps} reduction steps")
        self.steps = steps


def _lead(f: dict):
    return max(f, key=grevlex_key)


def _monic(f: dict) -> dict:
    c = f[_lead(f)]
    return {e: v / c for e, v in f.items()}


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_mul(f: dict, c: Fraction, shift, g: dict) -> dict:
    out = dict(f)
    for e, v in g.items():
        ne = tuple(x + y for x, y in zip(e, shift))
        s = out.get(ne, 0) - c * v
        if s:
            out[ne] = s
        else:
            out.pop(ne, None)
    return out


class Counter:
    def __init__(self, budget):
        self.budget = budget
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExhausted(self.steps)


def reduce(f: dict, G: Sequence[dict], counter: Counter | None = None) -> dict:
    """Full normal form of ``f`` modulo ``G`` (G elements monic)."""
    counter = counter or Counter(float("inf"))
    f = dict(f)
    rem: dict = {}
    leads = [(_lead(g), g) for g in G]
    while f:
        lt = _lead(f)
        c = f[lt]
        for lg, g in leads:
            if _divides(lg, lt):
                shift = tuple(x - y for x, y in zip(lt, lg))
                f = _sub_mul(f, c, shift, g)
                counter.tick()
                break
        else:
            rem[lt] = c
            del f[lt]
    return rem


def groebner(F: Iterable[dict], nvars: int, budget: int = DEFAULT_BUDGET,
             counter: Counter | None = None) -> list:
    """Reduced Groebner basis (monic, sorted by leading monomial).

    Pass a shared ``counter`` to spend one budget across several runs; it
    overrides ``budget``.
    """
    counter = counter or Counter(budget)
    G = []
    for f in F:
        f = {tuple(e): Fraction(c) for e, c in f.items() if c}
        if f:
            r = reduce(f, G, counter)
            if r:
                G.append(_monic(r))
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        # normal selection strategy: smallest lcm of leading monomials first
        pairs.sort(key=lambda ij: grevlex_key(_lcm(_lead(G[ij[0]]), _lead(G[ij[1]]))), reverse=True)
        i, j = pairs.pop()
        f, g = G[i], G[j]
        lf, lg = _lead(f), _lead(g)
        if all(min(x, y) == 0 for x, y in zip(lf, lg)):
            continue  # coprime leading monomials: S-polynomial reduces to 0
        l = _lcm(lf, lg)
        s = _sub_mul({tuple(x + y for x, y in zip(e, tuple(a - b for a, b in zip(l, lf)))): v
                      for e, v in f.items()}, Fraction(1), tuple(a - b for a, b in zip(l, lg)), g)
        counter.tick()
        r = reduce(s, G, counter)
        if r:
            G.append(_monic(r))
            k = len(G) - 1
            pairs.extend((k, m) for m in range(k))
            if len(r) == 1 and not any(_lead(r)):
                return [{(0,) * nvars: Fraction(1)}]
    return _interreduce(G, counter)


def _interreduce(G: list, counter) -> list:
    G = sorted(G, key=lambda g: grevlex_key(_lead(g)))
    out = []
    for g in G:
        lg = _lead(g)
        if any(_divides(_lead(h), lg) for h in out):
            continue
        out.append(g)
    final = []
    for i, g in enumerate(out):
        r = reduce(g, out[:i] + out[i + 1:], counter)
        final.append(_monic(r))
    return sorted(final, key=lambda g: grevlex_key(_lead(g)))


def is_unit_ideal(G: Sequence[dict]) -> bool:
    return any(len(g) == 1 and not any(next(iter(g))) for g in G)


def from_polynomial(p: Polynomial) -> dict:
    return dict(p.terms)


def to_polynomial(f: dict, variables) -> Polynomial:
    return Polynomial(variables, f)
