"""Sparse multivariate polynomials as ``{exponent tuple: coefficient}`` dicts.

Coefficients may be ints or Fractions; zero terms are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

Poly = dict[tuple[int, ...], int | Fraction]


def _clean(p: Mapping) -> Poly:
    return {e: c for e, c in p.items() if c != 0}


def const(c, nvars: int) -> Poly:
    return _clean({(0,) * nvars: c})


def var(i: int, nvars: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def linear(coeffs: Sequence) -> Poly:
    n = len(coeffs)
    return _clean({tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})


def add(p: Mapping, q: Mapping) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return _clean(out)


def scale(p: Mapping, c) -> Poly:
    return _clean({e: c * v for e, v in p.items()})


def sub(p: Mapping, q: Mapping) -> Poly:
    return add(p, scale(q, -1))


def mul(p: Mapping, q: Mapping) -> Poly:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return _clean(out)


def power(p: Mapping, k: int, nvars: int) -> Poly:
    out = const(1, nvars)
    for _ in range(k):
        out = mul(out, p)
    return out


def degree(p: Mapping) -> int:
    return max((sum(e) for e in p), default=-1)


def is_integral(p: Mapping) -> bool:
    return all(Fraction(c).denominator == 1 for c in p.values())


def compose_linear(p: Mapping, images: Sequence[Mapping], nvars_out: int) -> Poly:
    """Substitute ``x_i -> images[i]`` into ``p``."""
    out: Poly = {}
    for e, c in p.items():
        term = const(c, nvars_out)
        for i, k in enumerate(e):
            if k:
                term = mul(term, power(images[i], k, nvars_out))
        out = add(out, term)
    return out


def monomials(nvars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree ``d``, lexicographically descending."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def monomial_str(e: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for n, k in zip(names, e):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts) or "1"


def to_str(p: Mapping, names: Sequence[str]) -> str:
    if not p:
        return "0"
    out = []
    for e in sorted(p, reverse=True):
        c = p[e]
        m = monomial_str(e, names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if m == "1":
            body = str(a)
        elif a == 1:
            body = m
        else:
            body = f"{a}*{m}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s
