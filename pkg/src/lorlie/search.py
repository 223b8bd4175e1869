"""Generator of Ricci-flat Lorentzian double extensions of abelian Euclidean algebras.

Over an abelian ``g0 = R^n`` with the identity metric the Lie conditions reduce to
the linear system ``K D + D^T K = mu K`` on skew ``K`` and the Einstein condition
to one scalar equation, which fixes the scale of ``K``.  The linear system has a
nonzero solution only when ``mu`` is a sum of two eigenvalues of ``D``, so ``D``
is drawn from a prescribed spectrum and conjugated by a rational orthogonal
matrix.  Every candidate is rebuilt and re-verified before it is emitted.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from . import lie
from .double_ext import DoubleExtensionParams, build, einstein_conditions, unimodularity
from .metric import CrossCheckMismatch, ricci_direct, ricci_operator_formula

D_FAMILIES = ("diagonal", "triangular", "rotation", "general")


@dataclass(frozen=True)
class SearchConfig:
    dim_g0: int
    seed: int
    samples: int = 20
    entry_bound: int = 3

    def __post_init__(self):
        if self.dim_g0 < 1:
            raise ValueError("dim_g0 must be at least 1")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be at least 1")


@dataclass(frozen=True, eq=False)
class Certificate:
    """A verified Ricci-flat double extension.

    ``checks`` holds the independently recomputed facts: the Jacobi defect, the
    mean curvature, both Ricci operators, the complete-solvability outcome and a
    derivation of nonzero trace when one exists.  ``flags`` lists reasons the
    example falls outside the unimodular completely solvable setting.
    """

    index: int
    family: str
    params: DoubleExtensionParams
    checks: dict
    flags: tuple = ()


@dataclass(frozen=True)
class SearchResult:
    certificates: tuple
    rejected: Counter = field(default_factory=Counter)

    @property
    def empty(self) -> bool:
        return not self.certificates


# -- linear algebra of the constraints ---------------------------------------------

def _skew_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            a = ex.zeros((n, n))
            a[i, j], a[j, i] = mpq(1), mpq(-1)
            out.append(a)
    return out


def k_constraint_space(D, mu, metric=None) -> list[np.ndarray]:
    """Basis of ``{K skew : K D + D* K = mu K}`` for abelian Euclidean ``g0``."""
    d = ex.mat(D)
    n = d.shape[0]
    g = ex.eye(n) if metric is None else ex.mat(metric)
    ginv = ex.inverse(g)
    ds = ginv @ d.T @ g
    mu = ex.q(mu)
    gens = [ginv @ a for a in _skew_basis(n)]
    if not gens:
        return []
    cols = [(k @ d + ds @ k - mu * k).ravel() for k in gens]
    ns = ex.nullspace(np.column_stack(cols))
    return [sum((ns[t, s] * gens[t] for t in range(len(gens))), ex.zeros((n, n))) for s in range(ns.shape[1])]


def einstein_rhs(D, mu, metric=None):
    """``2 tr D^2 + 2 tr(D D*) - 4 mu tr D``; must equal ``-tr K^2`` for a Ricci-flat extension."""
    d = ex.mat(D)
    n = d.shape[0]
    g = ex.eye(n) if metric is None else ex.mat(metric)
    ds = ex.inverse(g) @ d.T @ g
    return 2 * ex.trace(d @ d) + 2 * ex.trace(d @ ds) - 4 * ex.q(mu) * ex.trace(d)


def scale_to_einstein(K, D, mu, metric=None):
    """Rational ``t > 0`` with ``tr((tK)^2) = 4 mu tr D - 2 tr D^2 - 2 tr(D D*)``, else ``None``."""
    k = ex.mat(K)
    kk = -ex.trace(k @ k)
    if kk == 0:
        return None
    t2 = einstein_rhs(D, mu, metric) / kk
    if t2 <= 0:
        return None
    return ex.rational_sqrt(t2)


# -- sampling ---------------------------------------------------------------------

def _rational(rng, bound: int) -> mpq:
    den = int(rng.integers(1, bound + 1))
    return mpq(int(rng.integers(-bound * den, bound * den + 1)), den)


def _cayley(rng, n: int, bound: int) -> np.ndarray:
    """Rational orthogonal matrix ``(I - A)(I + A)^-1`` from a random skew ``A``."""
    a = ex.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = mpq(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
            a[i, j], a[j, i] = v, -v
    ident = ex.eye(n)
    return (ident - a) @ ex.inverse(ident + a)


def sample_d(rng, n: int, bound: int, family: str, unimodular: bool = True):
    """Draw ``(D, mu)`` so that ``mu`` equals the sum of the first two weights of ``D``.

    With ``unimodular`` the remaining freedom is spent on ``mu = -tr D``.
    """
    rest = [_rational(rng, bound) for _ in range(max(n - 2, 0))]
    t = ex.zeros((n, n))
    if n == 1:
        t[0, 0] = _rational(rng, bound)
        mu = -t[0, 0] if unimodular else _rational(rng, bound)
        return t, mu
    s = sum(rest, mpq(0))
    if family == "rotation":
        c = _rational(rng, bound) or mpq(1)
        a = -s / 4 if unimodular else _rational(rng, bound)
        t[0, 0], t[1, 1], t[0, 1], t[1, 0] = a, a, -c, c
        mu = 2 * a
    else:
        l1 = _rational(rng, bound)
        l2 = (-s / 2 - l1) if unimodular else _rational(rng, bound)
        t[0, 0], t[1, 1] = l1, l2
        mu = l1 + l2
    for i, r in enumerate(rest):
        t[i + 2, i + 2] = r
    if family in ("triangular", "general"):
        for i in range(n):
            for j in range(i + 1, n):
                if family == "general" or rng.integers(2):
                    t[i, j] = _rational(rng, bound)
    if family in ("rotation", "general", "diagonal") and rng.integers(2):
        q = _cayley(rng, n, bound)
        t = q @ t @ q.T
    return t, mu


def _nonzero_trace_derivation(alg):
    for d in lie.derivation_space(alg):
        if ex.trace(d) != 0:
            return d
    return None


def certify(params: DoubleExtensionParams, index: int = 0, family: str = "") -> Certificate:
    """Re-verify a candidate with independent routines; raise on any disagreement."""
    built = build(params)
    jac = lie.jacobi_defect(built.alg)
    uni = unimodularity(params)
    cond = einstein_conditions(params)
    direct = ricci_direct(built)
    op = ricci_operator_formula(built)
    problems = []
    if not jac.is_zero:
        problems.append("jacobi")
    if not uni.formula_holds:
        problems.append("mean curvature formula")
    if not cond.einstein:
        problems.append("einstein conditions")
    if not direct.ricci_flat:
        problems.append("ricci_direct")
    if not ex.allclose(direct.Ric, op.Ric):
        problems.append("operator formula")
    if problems:
        raise CrossCheckMismatch(f"candidate {index} failed re-verification: {', '.join(problems)}")
    alg = lie.LieAlgebra(built.alg.c)
    cs = lie.complete_solvability(alg)
    der = _nonzero_trace_derivation(alg)
    flags = []
    if not uni.is_unimodular:
        flags.append("not unimodular")
    if not cs.holds:
        flags.append("not completely solvable")
    if der is None:
        flags.append("no derivation of nonzero trace")
    checks = {
        "jacobi": jac.norm,
        "unimodular": uni.is_unimodular,
        "H": uni.H,
        "ricci_operator": op.Ric,
        "ricci_direct_zero": direct.ricci_flat,
        "einstein_lambda": direct.einstein_lambda,
        "completely_solvable": cs.holds,
        "flag": cs.flag,
        "nonzero_trace_derivation": der,
    }
    return Certificate(index, family, params, checks, tuple(flags))


def candidate(config: SearchConfig, index: int, unimodular: bool = True, attempts: int = 8):
    """One draw: a :class:`Certificate` or the reason it was discarded.

    A draw tries up to ``attempts`` fresh ``D`` before giving up, since a random
    spectrum rarely makes the required scale a rational square.
    """
    rng = np.random.default_rng([config.seed, index])
    n, bound = config.dim_g0, config.entry_bound
    reason = "no rational scale"
    for _ in range(attempts):
        family = D_FAMILIES[int(rng.integers(len(D_FAMILIES)))]
        d, mu = sample_d(rng, n, bound, family, unimodular)
        if not np.any(d != 0):
            reason = "D = 0"
            continue
        space = k_constraint_space(d, mu)
        if not space:
            reason = "no skew K"
            continue
        t = None
        for _ in range(12):
            coeffs = rng.integers(-2, 3, len(space))
            if not coeffs.any():
                continue
            k = sum((int(c) * s for c, s in zip(coeffs, space)), ex.zeros((n, n)))
            t = scale_to_einstein(k, d, mu)
            if t is not None:
                break
        if t is None:
            reason = "no rational scale"
            continue
        b = ex.mat([_rational(rng, bound) for _ in range(n)])
        params = DoubleExtensionParams.over_abelian(t * k, d, mu, b)
        return certify(params, index, family)
    return reason


def search(config: SearchConfig, workers: int = 1, unimodular: bool = True) -> SearchResult:
    """Run ``config.samples`` draws; output order follows the draw index for any ``workers``."""
    indices = range(config.samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda i: candidate(config, i, unimodular), indices))
    else:
        outcomes = [candidate(config, i, unimodular) for i in indices]
    certs = tuple(o for o in outcomes if isinstance(o, Certificate))
    rejected = Counter(o for o in outcomes if isinstance(o, str))
    return SearchResult(certs, rejected)


def generate(config: SearchConfig, workers: int = 1, unimodular: bool = True) -> Iterator[Certificate]:
    yield from search(config, workers, unimodular).certificates
