"""Double extensions ``g = Re + g0 + Re_bar`` of a Euclidean Lie algebra, and their inverse.

The extended algebra uses the basis ``(e, e_bar, f_1, ..., f_n)`` where the
``f_i`` are the basis of ``g0``; the metric is ``<e, e_bar> = 1``, ``e`` and
``e_bar`` isotropic and orthogonal to ``g0``.  Brackets::

    [e_bar, e] = mu e
    [e_bar, u] = D u + <b, u>_0 e
    [u, v]     = [u, v]_0 + <K u, v>_0 e        (u, v in g0)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from . import lie
from .lie import LieAlgebra
from .metric import (
    CrossCheckMismatch,
    HypothesisFailed,
    J_map,
    PseudoEuclideanLieAlgebra,
    einstein_check,
    mean_curvature,
    ricci_operator_formula,
    structure_endos,
)
from .pseudo import (
    MetricTensor,
    Subspace,
    complete_witt_basis,
    gram_schmidt,
    is_skew_symmetric,
    metric_adjoint,
    orthogonal_complement,
    radical,
    rational_isotropic_vector,
    restrict_metric,
    witt_from,
)


class ShapeMismatch(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class NondegenerateSubspace(ValueError):
    """The degeneracy premise of an extraction mode does not hold."""


@dataclass(frozen=True, eq=False)
class DoubleExtensionParams:
    g0: PseudoEuclideanLieAlgebra
    K: np.ndarray
    D: np.ndarray
    mu: object
    b: np.ndarray

    def __post_init__(self):
        n = self.g0.dim
        if self.g0.metric.signature[0] != 0:
            raise ValueError("g0 must be Euclidean")
        exact = self.g0.exact
        conv = ex.mat if exact else ex.fmat
        k, d, b = conv(self.K), conv(self.D), conv(self.b)
        if k.shape != (n, n) or d.shape != (n, n) or b.shape != (n,):
            raise ShapeMismatch(f"K, D must be {n}x{n} and b of length {n}")
        if not is_skew_symmetric(k, self.g0.metric):
            raise ValueError("K must be skew-symmetric with respect to the metric of g0")
        for name, v in (("K", k), ("D", d), ("b", b)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        object.__setattr__(self, "mu", ex.q(self.mu) if exact else float(self.mu))

    @classmethod
    def over_abelian(cls, K, D, mu, b, metric=None, exact: bool = True) -> "DoubleExtensionParams":
        conv = ex.mat if exact else ex.fmat
        d = conv(D)
        n = d.shape[0]
        g = ex.eye(n, exact) if metric is None else conv(metric)
        g0 = PseudoEuclideanLieAlgebra(LieAlgebra.abelian(n, exact), MetricTensor(g))
        return cls(g0, K, D, mu, b)

    @property
    def n(self) -> int:
        return self.g0.dim

    @property
    def exact(self) -> bool:
        return self.g0.exact

    @property
    def D_star(self) -> np.ndarray:
        return metric_adjoint(self.D, self.g0.metric)


def build(params: DoubleExtensionParams) -> PseudoEuclideanLieAlgebra:
    """The extended algebra; Jacobi is not enforced so broken parameters can be probed."""
    n = params.n
    exact = params.exact
    big = n + 2
    g0c = params.g0.alg.c
    gram0 = params.g0.g
    c = ex.zeros((big, big, big), exact)

    def put(k, i, j, val):
        c[k, i, j] = c[k, i, j] + val
        c[k, j, i] = c[k, j, i] - val

    put(0, 1, 0, params.mu)
    gb = gram0 @ params.b
    omega = params.K.T @ gram0  # omega[i, j] = <K f_i, f_j>_0
    for j in range(n):
        for k in range(n):
            put(2 + k, 1, 2 + j, params.D[k, j])
        put(0, 1, 2 + j, gb[j])
        for i in range(j):
            put(0, 2 + i, 2 + j, omega[i, j])
            for k in range(n):
                put(2 + k, 2 + i, 2 + j, g0c[k, i, j])
    g = ex.zeros((big, big), exact)
    one = mpq(1) if exact else 1.0
    g[0, 1] = g[1, 0] = one
    g[2:, 2:] = gram0
    return PseudoEuclideanLieAlgebra(LieAlgebra.unchecked(c), MetricTensor(g))


# -- Lie algebra conditions ---------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityReport:
    is_derivation: bool
    is_cocycle: bool
    dext0_residual: np.ndarray
    admissible: bool


def cocycle_defect(params: DoubleExtensionParams) -> np.ndarray:
    """``d omega(u, v, w) = omega([u,v]_0, w) + cyclic`` for ``omega(u, v) = <K u, v>_0``."""
    omega = params.K.T @ params.g0.g
    w = np.tensordot(params.g0.alg.c, omega, axes=([0], [0]))  # omega([f_i, f_j], f_k)
    return w + w.transpose(1, 2, 0) + w.transpose(2, 0, 1)


def dext0_residual(params: DoubleExtensionParams) -> np.ndarray:
    """``K D + D* K - mu K - J_b^0``."""
    k, d = params.K, params.D
    jb = J_map(params.g0, params.b)
    return k @ d + params.D_star @ k - params.mu * k - jb


def admissibility(params: DoubleExtensionParams) -> AdmissibilityReport:
    scale = ex.scale_of(params.K, params.D, params.b, params.g0.alg.c) ** 2
    is_der = lie.is_derivation(params.g0.alg, params.D)
    is_coc = ex.is_zero(cocycle_defect(params), scale)
    res = dext0_residual(params)
    ok = is_der and is_coc and ex.is_zero(res, scale)
    return AdmissibilityReport(is_der, is_coc, res, ok)


@dataclass(frozen=True)
class UnimodularityReport:
    H: np.ndarray
    H_formula: np.ndarray
    formula_holds: bool
    is_unimodular: bool


def unimodularity(params: DoubleExtensionParams) -> UnimodularityReport:
    """Mean curvature of the extension versus ``(mu + tr D) e + H^0``."""
    built = build(params)
    h = mean_curvature(built)
    h0 = mean_curvature(params.g0)
    expected = ex.zeros(params.n + 2, params.exact)
    expected[0] = params.mu + ex.trace(params.D)
    expected[2:] = h0
    holds = ex.allclose(h, expected)
    uni = ex.is_zero(h, ex.scale_of(h, params.D))
    return UnimodularityReport(h, expected, holds, uni)


# -- Einstein conditions --------------------------------------------------------------

@dataclass(frozen=True)
class EinsteinConditionsReport:
    g0_ricci_flat: bool
    dext1_residual: object
    dext2_residuals: np.ndarray
    einstein: bool


def ebar_trace_residual(params: DoubleExtensionParams):
    """``4 tr(ad_b^0) + 4 mu tr D - 2 tr D^2 - 2 tr(D D*) - tr K^2``."""
    k, d, ds = params.K, params.D, params.D_star
    tr_adb = ex.trace(params.g0.alg.ad(params.b))
    return 4 * tr_adb + 4 * params.mu * ex.trace(d) - 2 * ex.trace(d @ d) - 2 * ex.trace(d @ ds) - ex.trace(k @ k)


def ebar_column_residuals(params: DoubleExtensionParams) -> np.ndarray:
    """Per basis vector ``u`` of g0:
    ``tr(J_u^0 K) + 2 tr((D + D*) ad_u^0) - 2 tr(ad^0_{D* u}) - 2 tr(ad^0_{K u})``.

    This equals ``-4 ric(u, e_bar)``. The last two terms are ``<H0, .>`` and vanish
    when g0 is unimodular.
    """
    k, d, ds = params.K, params.D, params.D_star
    g0 = params.g0
    n = params.n
    out = ex.zeros(n, params.exact)
    for j in range(n):
        u = ex.unit(n, j, params.exact)
        out[j] = (
            ex.trace(J_map(g0, u) @ k)
            + 2 * ex.trace((d + ds) @ g0.alg.ad(u))
            - 2 * ex.trace(g0.alg.ad(ds @ u))
            - 2 * ex.trace(g0.alg.ad(k @ u))
        )
    return out


def einstein_conditions(params: DoubleExtensionParams) -> EinsteinConditionsReport:
    if not admissibility(params).admissible:
        raise NotAdmissible("parameters do not define a Lie algebra")
    scale = ex.scale_of(params.K, params.D, params.b, params.g0.alg.c) ** 2
    flat0 = ricci_operator_formula(params.g0).ricci_flat
    r1 = ebar_trace_residual(params)
    r2 = ebar_column_residuals(params)
    ok = flat0 and ex.is_zero(r1, scale) and ex.is_zero(r2, scale)
    return EinsteinConditionsReport(flat0, r1, r2, ok)


# -- inverse construction -----------------------------------------------------------

DERIVED_DEGENERATE = "derived_degenerate"
CENTER_DEGENERATE = "center_degenerate"
MODES = (DERIVED_DEGENERATE, CENTER_DEGENERATE)


@dataclass(frozen=True, eq=False)
class Extraction:
    params: DoubleExtensionParams
    basis: np.ndarray  # columns (e, e_bar, f_1, ...) in the input's coordinates
    mode: str
    einstein_lambda: object
    facts: dict = field(default_factory=dict)


def _complement_in(space: Subspace, e: np.ndarray) -> np.ndarray:
    """Columns of ``space``'s basis that together with ``e`` still span ``space``."""
    cols = [e]
    out = []
    for i in range(space.dim):
        v = space.basis[:, i]
        if ex.rank(np.column_stack(cols + [v])) > len(cols):
            cols.append(v)
            out.append(v)
    return np.column_stack(out) if out else ex.zeros((space.ambient_dim, 0))


def extract(p: PseudoEuclideanLieAlgebra, mode: str) -> Extraction:
    """Recover double-extension parameters over an abelian ``g0``.

    Requires an exact, Lorentzian, completely solvable, unimodular Einstein
    algebra.  ``derived_degenerate`` takes ``e`` spanning ``[g,g] ∩ [g,g]^⊥`` and
    picks the ``f``'s inside ``[g,g]`` and ``[g,g]^⊥``; ``center_degenerate``
    takes ``e`` isotropic and central.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not p.exact:
        raise ValueError("extraction requires exact mode")
    if p.metric.signature[0] != 1:
        raise HypothesisFailed("lorentzian", f"signature {p.metric.signature}")
    alg = p.alg
    n = p.dim
    if mode == DERIVED_DEGENERATE:
        dg = lie.derived_ideal(alg)
        rad = radical(dg, p.metric)
        if rad.dim == 0:
            raise NondegenerateSubspace("[g,g] is nondegenerate")
    else:
        z = lie.center(alg)
        if z.dim == 0:
            raise HypothesisFailed("center nontrivial")
        rad = radical(z, p.metric)
        if rad.dim == 0:
            # a nondegenerate Lorentzian center still holds isotropic central vectors
            iso = rational_isotropic_vector(restrict_metric(p.metric, z).matrix)
            if iso is None:
                raise NondegenerateSubspace("Z(g) is nondegenerate with no isotropic vector")
            rad = Subspace(n, (z.basis @ iso).reshape(-1, 1))
    e = rad.basis[:, 0]
    if not lie.complete_solvability(alg).holds:
        raise HypothesisFailed("completely solvable")
    if not lie.is_unimodular(alg):
        raise HypothesisFailed("unimodular")
    lam = einstein_check(p)
    if lam is None:
        raise HypothesisFailed("einstein")

    if mode == DERIVED_DEGENERATE:
        dg_perp = orthogonal_complement(dg, p.metric)
        fs, _ = gram_schmidt(_complement_in(dg, e), p.metric)
        gs, _ = gram_schmidt(_complement_in(dg_perp, e), p.metric)
        spacelike = fs + gs
        inside = Subspace.span(np.column_stack(spacelike), n) if spacelike else Subspace.zero(n)
        plane = orthogonal_complement(inside, p.metric)
        v = next(plane.basis[:, i] for i in range(plane.dim) if p.inner(e, plane.basis[:, i]) != 0)
        e_bar = witt_from(e, v, p.metric).e_bar
        split = len(fs)
    else:
        w = complete_witt_basis(e, p.metric)
        e_bar, spacelike = w.e_bar, list(w.spacelike)
        split = None

    basis = np.column_stack([e, e_bar, *spacelike])
    local = p.change_basis(basis)
    c, gram = local.alg.c, local.g
    gram0 = gram[2:, 2:]
    g0inv = ex.inverse(gram0)
    mu = c[0, 1, 0]
    d = np.array(c[2:, 1, 2:])
    b = g0inv @ c[0, 1, 2:]
    k = g0inv @ np.array(c[0, 2:, 2:]).T
    params = DoubleExtensionParams(
        PseudoEuclideanLieAlgebra(LieAlgebra.abelian(n - 2), MetricTensor(gram0)), k, d, mu, b
    )

    rebuilt = build(params)
    se = structure_endos(local)
    zero_idx = [0] + list(range(2, n))  # basis of (Re)^⊥
    s_idx = range(2, 2 + split) if split is not None else range(2, n)
    facts = {
        "lambda = 0": lam == 0,
        "rebuild reproduces brackets": ex.allclose(rebuilt.alg.c, c),
        "rebuild reproduces metric": ex.allclose(rebuilt.g, gram),
        "S_i(e) = 0": all(ex.is_zero(se.S[i][:, 0]) for i in s_idx),
        "S_i((Re)^⊥) ⊆ Re": all(ex.is_zero(se.S[i][1:, zero_idx]) for i in s_idx),
    }
    if mode == DERIVED_DEGENERATE:
        facts["<K u, e> = 0 on g0"] = ex.is_zero(se.S[0][1, 2:])
        facts["mu = -tr D"] = mu == -ex.trace(d)
    else:
        facts["K_bar(e_bar) ∈ Re"] = ex.is_zero(se.S[1][1:, 1])
        facts["mu = 0"] = mu == 0
    bad = [name for name, ok in facts.items() if not ok]
    if bad:
        raise CrossCheckMismatch("extraction facts failed: " + ", ".join(bad))
    return Extraction(params, basis, mode, lam, facts)
