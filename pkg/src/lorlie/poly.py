"""Exact univariate polynomials over Q: characteristic polynomials and Sturm sequences.

Polynomials are lists of rationals, lowest degree first, with no trailing zeros
(the zero polynomial is ``[]``).
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .exact import eye, is_exact, q, trace


def trim(p):
    p = [q(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(p) - 1


def evaluate(p, x):
    acc = mpq(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([k * c for k, c in enumerate(p)][1:])


def divmod_poly(a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    lead = b[-1]
    while rem and len(rem) >= len(b):
        shift = len(rem) - len(b)
        f = rem[-1] / lead
        quot[shift] = f
        for i, c in enumerate(b):
            rem[shift + i] -= f * c
        rem = trim(rem)
    return trim(quot), rem


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return []
    return [c / a[-1] for c in a]


def squarefree_part(p):
    p = trim(p)
    g = gcd_poly(p, derivative(p))
    return divmod_poly(p, g)[0] if g else p


def charpoly(a: np.ndarray):
    """det(xI - A) by Faddeev-LeVerrier; exact for rational matrices."""
    if not is_exact(a):
        raise TypeError("charpoly works in exact mode only")
    n = a.shape[0]
    coeffs = [mpq(0)] * (n + 1)
    coeffs[n] = mpq(1)
    m = eye(n)
    ident = eye(n)
    c = mpq(1)
    for k in range(1, n + 1):
        am = a @ m
        c = -trace(am) / k
        coeffs[n - k] = c
        m = am + c * ident
    return trim(coeffs)


def sturm_sequence(p):
    p = trim(p)
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo=None, hi=None) -> int:
    """Number of distinct real roots in (lo, hi]; ``None`` bounds mean infinity."""
    seq = sturm_sequence(p)
    if not seq or degree(seq[0]) <= 0:
        return 0

    def at(x, sign_at_inf):
        if x is None:
            return [c[-1] * (sign_at_inf ** degree(c)) for c in seq]
        return [evaluate(c, x) for c in seq]

    return _sign_changes(at(lo, -1)) - _sign_changes(at(hi, 1))


def all_roots_real(p) -> bool:
    """True iff every complex root of ``p`` is real (Sturm count on the square-free part)."""
    sf = squarefree_part(p)
    return count_real_roots(sf) == degree(sf)


def rational_roots(p):
    """Distinct rational roots of ``p``, sorted."""
    import sympy

    p = trim(p)
    if degree(p) < 1:
        return []
    x = sympy.Symbol("x")
    expr = sympy.Poly(
        [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(p)], x, domain="QQ"
    )
    roots = []
    for factor, _ in expr.factor_list()[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            r = -b / a
            roots.append(mpq(int(r.p), int(r.q)))
    return sorted(set(roots))
