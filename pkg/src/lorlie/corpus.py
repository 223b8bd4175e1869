"""Random pseudo-Euclidean Lie algebras for property checks.

Members are built from constructions that satisfy Jacobi by design (matrix Lie
algebras, semidirect products, direct sums, double extensions), written in a
scrambled rational basis and paired with a random metric of random signature.
A slice of the corpus is Einstein on purpose.  Every draw is seeded by
``(seed, index)`` so members can be regenerated individually.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from . import lie
from .lie import LieAlgebra
from .metric import PseudoEuclideanLieAlgebra
from .pseudo import MetricTensor

MAX_DIM = 6


@dataclass(frozen=True, eq=False)
class Member:
    name: str
    index: int
    algebra: PseudoEuclideanLieAlgebra


# -- building blocks --------------------------------------------------------------

def from_matrices(mats) -> LieAlgebra:
    """Structure constants of the span of linearly independent matrices under commutators."""
    flat = np.column_stack([m.ravel() for m in mats])
    n = len(mats)
    c = ex.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            coords = ex.coordinates(flat, comm.ravel())
            c[:, i, j] = coords
            c[:, j, i] = -coords
    return LieAlgebra(c)


def _elementary(k, i, j):
    m = ex.zeros((k, k))
    m[i, j] = mpq(1)
    return m


def upper_triangular(k: int, strict: bool = False, traceless: bool = False) -> LieAlgebra:
    mats = [_elementary(k, i, j) for i in range(k) for j in range(i + int(strict), k) if i != j or not traceless]
    if traceless:
        mats += [_elementary(k, i, i) - _elementary(k, i + 1, i + 1) for i in range(k - 1)]
    return from_matrices(mats)


def heisenberg(m: int = 1) -> LieAlgebra:
    """``h_{2m+1}``: ``[x_i, y_i] = z``."""
    n = 2 * m + 1
    return LieAlgebra.from_brackets(n, {(i, m + i): ex.unit(n, n - 1) for i in range(m)})


def sl2() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): [0, 2, 0], (0, 2): [0, 0, -2], (1, 2): [1, 0, 0]})


def so3() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (2, 0): [0, 1, 0]})


def euclidean_motions() -> LieAlgebra:
    """``e(2)``: ``[e1, e2] = e3``, ``[e1, e3] = -e2``."""
    return LieAlgebra.from_brackets(3, {(0, 1): [0, 0, 1], (0, 2): [0, -1, 0]})


def semidirect(a: LieAlgebra, d: np.ndarray) -> LieAlgebra:
    """``R t ⋉_d a`` with ``[t, x] = d x``; ``d`` must be a derivation of ``a``.  ``t`` is first."""
    n = a.dim
    c = ex.zeros((n + 1, n + 1, n + 1), a.exact)
    c[1:, 1:, 1:] = a.c
    c[1:, 0, 1:] = d
    c[1:, 1:, 0] = -np.asarray(d)
    return LieAlgebra(c)


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    n, m = a.dim, b.dim
    c = ex.zeros((n + m,) * 3, a.exact)
    c[:n, :n, :n] = a.c
    c[n:, n:, n:] = b.c
    return LieAlgebra(c)


# -- random rational data -----------------------------------------------------------

def small_int(rng, bound: int = 2) -> mpq:
    return mpq(int(rng.integers(-bound, bound + 1)))


def small_rational(rng, bound: int = 2) -> mpq:
    return mpq(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def unimodular_basis_change(rng, n: int) -> np.ndarray:
    """``L U`` with unit-triangular integer factors, so the inverse stays integral."""
    lo, up = ex.eye(n), ex.eye(n)
    for i in range(n):
        for j in range(i):
            lo[i, j] = small_int(rng, 1)
            up[j, i] = small_int(rng, 1)
    return lo @ up


def random_metric(rng, n: int, negatives: int) -> MetricTensor:
    """Integer metric ``P^T diag(+-d_i) P``; its signature is ``(negatives, n - negatives)``."""
    p = unimodular_basis_change(rng, n)
    d = ex.zeros((n, n))
    for i in range(n):
        d[i, i] = mpq(int(rng.integers(1, 4)) * (-1 if i < negatives else 1))
    return MetricTensor(p.T @ d @ p)


def random_signature(rng, n: int) -> int:
    r = rng.random()
    if r < 0.35:
        return 0
    if r < 0.8:
        return min(1, n)
    return int(rng.integers(0, n + 1))


# -- families ------------------------------------------------------------------------

def _abelian(rng):
    return LieAlgebra.abelian(int(rng.integers(1, MAX_DIM + 1)))


def _nilpotent(rng):
    choice = int(rng.integers(4))
    if choice == 0:
        return direct_sum(heisenberg(1), LieAlgebra.abelian(int(rng.integers(1, 4)))) if rng.integers(2) else heisenberg(1)
    if choice == 1:
        return heisenberg(2)
    if choice == 2:
        return upper_triangular(4, strict=True)
    d = ex.zeros((4, 4))  # filiform-type shift on R^4
    for i in range(3):
        d[i + 1, i] = mpq(1)
    return semidirect(LieAlgebra.abelian(4), d)


def _matrix_solvable(rng):
    choice = int(rng.integers(3))
    if choice == 0:
        return upper_triangular(2)
    if choice == 1:
        return upper_triangular(3, traceless=True)
    return upper_triangular(3)


def _semidirect_abelian(rng):
    m = int(rng.integers(1, MAX_DIM))
    d = ex.zeros((m, m))
    for i in range(m):
        for j in range(m):
            d[i, j] = small_int(rng)
    return semidirect(LieAlgebra.abelian(m), d)


def _semidirect_heisenberg(rng):
    h = heisenberg(1)
    ders = lie.derivation_space(h)
    d = sum((small_int(rng) * x for x in ders), ex.zeros((3, 3)))
    alg = semidirect(h, d)
    if rng.integers(2) and alg.dim < MAX_DIM:
        alg = direct_sum(alg, LieAlgebra.abelian(1))
    return alg


def _classical(rng):
    base = [sl2, so3, euclidean_motions][int(rng.integers(3))]()
    extra = int(rng.integers(0, 3))
    return direct_sum(base, LieAlgebra.abelian(extra)) if extra else base


def _product(rng):
    r2 = LieAlgebra.from_brackets(2, {(0, 1): [0, 1]})
    choice = int(rng.integers(3))
    if choice == 0:
        return direct_sum(r2, r2)
    if choice == 1:
        return direct_sum(r2, heisenberg(1))
    return direct_sum(euclidean_motions(), euclidean_motions())


FAMILIES = {
    "abelian": _abelian,
    "nilpotent": _nilpotent,
    "matrix_solvable": _matrix_solvable,
    "semidirect_abelian": _semidirect_abelian,
    "semidirect_heisenberg": _semidirect_heisenberg,
    "classical": _classical,
    "product": _product,
}


def random_double_extension(rng, einstein: bool = False):
    """Lorentzian double extension over an abelian ``g0``; Ricci-flat when ``einstein``."""
    from .double_ext import DoubleExtensionParams, build
    from .search import SearchConfig, candidate, k_constraint_space

    if einstein:
        for attempt in range(200):
            n = int(rng.integers(2, MAX_DIM - 1))
            cfg = SearchConfig(n, int(rng.integers(2**31)), 1, 2)
            out = candidate(cfg, attempt)
            if not isinstance(out, str):
                return build(out.params)
        raise RuntimeError("no Einstein double extension found")
    n = int(rng.integers(1, MAX_DIM - 1))
    d = ex.mat([[small_int(rng) for _ in range(n)] for _ in range(n)])
    mu = small_int(rng)
    space = k_constraint_space(d, mu)
    k = sum((small_int(rng) * s for s in space), ex.zeros((n, n)))
    b = ex.mat([small_int(rng) for _ in range(n)])
    return build(DoubleExtensionParams.over_abelian(k, d, mu, b))


def _killing_metric_sl2():
    alg = sl2()
    return PseudoEuclideanLieAlgebra(alg, MetricTensor(lie.killing_form(alg)))


def scramble(p: PseudoEuclideanLieAlgebra, rng) -> PseudoEuclideanLieAlgebra:
    return p.change_basis(unimodular_basis_change(rng, p.dim))


def member(seed: int, index: int) -> Member:
    """The ``index``-th corpus member for ``seed``; about one in eight is Einstein by design."""
    rng = np.random.default_rng([seed, index])
    r = rng.random()
    if r < 0.125:
        kind = int(rng.integers(3))
        if kind == 0:
            n = int(rng.integers(1, MAX_DIM + 1))
            p = PseudoEuclideanLieAlgebra(LieAlgebra.abelian(n), random_metric(rng, n, random_signature(rng, n)))
            name = "einstein:abelian"
        elif kind == 1:
            p, name = random_double_extension(rng, einstein=True), "einstein:double_extension"
        else:
            p, name = _killing_metric_sl2(), "einstein:sl2_killing"
        return Member(name, index, scramble(p, rng))
    if r < 0.25:
        return Member("double_extension", index, scramble(random_double_extension(rng), rng))
    names = list(FAMILIES)
    name = names[int(rng.integers(len(names)))]
    alg = FAMILIES[name](rng)
    alg = alg.change_basis(unimodular_basis_change(rng, alg.dim))
    metric = random_metric(rng, alg.dim, random_signature(rng, alg.dim))
    return Member(name, index, PseudoEuclideanLieAlgebra(alg, metric))


def corpus(seed: int, size: int) -> list[Member]:
    return [member(seed, i) for i in range(size)]
