"""Curvature of pseudo-Euclidean Lie algebras.

Levi-Civita product, curvature, and the Ricci operator computed three ways:
literally as a trace of the curvature, through ``R_u = L_u - ad_u``, and through
the operator identity ``Ric = -(B + J1)/2 + J2/4 - (ad_H + ad_H*)/2``.  Also the
structure endomorphisms of a basis, the trace identity for ``Q = -J1/2 + J2/4``
and Einstein / flatness predicates.

All matrices act on coordinate columns of the algebra's basis.  Bilinear forms
are stored as Gram-type matrices ``b[i, j] = b(e_i, e_j)``; the operator of a
form is ``g^-1 b``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from . import lie
from .lie import LieAlgebra
from .pseudo import Degenerate, MetricTensor, Subspace, congruence_diagonalize, restrict_metric


class HypothesisFailed(ValueError):
    """A premise of a structural result does not hold for the input."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis failed: {hypothesis}" + (f" ({detail})" if detail else ""))


class CrossCheckMismatch(AssertionError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True, eq=False)
class PseudoEuclideanLieAlgebra:
    alg: LieAlgebra
    metric: MetricTensor

    def __post_init__(self):
        if not isinstance(self.metric, MetricTensor):
            object.__setattr__(self, "metric", MetricTensor(self.metric))
        if self.alg.dim != self.metric.dim:
            raise ValueError("algebra and metric dimensions differ")
        if self.alg.exact != self.metric.exact:
            raise ValueError("algebra and metric must use the same arithmetic mode")

    @classmethod
    def from_arrays(cls, c, g, check: bool = True) -> "PseudoEuclideanLieAlgebra":
        return cls(LieAlgebra(c, checked=check), MetricTensor(g))

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def exact(self) -> bool:
        return self.alg.exact

    @property
    def g(self) -> np.ndarray:
        return self.metric.matrix

    @functools.cached_property
    def ginv(self) -> np.ndarray:
        return ex.inverse(self.g)

    def adjoint(self, f: np.ndarray) -> np.ndarray:
        return self.ginv @ f.T @ self.g

    def inner(self, u, v):
        return u @ self.g @ v

    @functools.cached_property
    def ad_stars(self) -> tuple:
        return tuple(self.adjoint(a) for a in self.alg.ad_basis)

    @functools.cached_property
    def christoffel(self) -> np.ndarray:
        """``gamma[k, i, j]``: coordinates of ``L_{e_i} e_j`` (Koszul formula)."""
        low = np.tensordot(self.g, self.alg.c, axes=([1], [0]))  # <[e_i, e_j], e_w> at [w, i, j]
        twice = low + low.transpose(1, 2, 0) + low.transpose(1, 0, 2)
        gamma = np.tensordot(self.ginv, twice, axes=([1], [0]))
        return gamma / 2 if self.exact else gamma * 0.5

    @functools.cached_property
    def lc_basis(self) -> np.ndarray:
        """``lc_basis[i]`` is the matrix of ``L_{e_i}``."""
        return self.christoffel.transpose(1, 0, 2)

    def to_float(self) -> "PseudoEuclideanLieAlgebra":
        return PseudoEuclideanLieAlgebra(self.alg.to_float(), MetricTensor(ex.to_float(self.g)))

    def change_basis(self, p: np.ndarray) -> "PseudoEuclideanLieAlgebra":
        return PseudoEuclideanLieAlgebra(self.alg.change_basis(p), MetricTensor(p.T @ self.g @ p))


def _half(x, exact):
    return x / 2 if exact else x * 0.5


# -- Levi-Civita product and curvature ----------------------------------------

def levi_civita(p: PseudoEuclideanLieAlgebra, u, v) -> np.ndarray:
    return lc_matrix(p, u) @ np.asarray(v)


def lc_matrix(p: PseudoEuclideanLieAlgebra, u) -> np.ndarray:
    return np.tensordot(p.christoffel, np.asarray(u), axes=([1], [0]))


def curvature(p: PseudoEuclideanLieAlgebra, u, v) -> np.ndarray:
    """``K(u, v) = L_[u,v] - [L_u, L_v]``."""
    lu, lv = lc_matrix(p, u), lc_matrix(p, v)
    return lc_matrix(p, p.alg.bracket(u, v)) - (lu @ lv - lv @ lu)


def curvature_tensor(p: PseudoEuclideanLieAlgebra) -> np.ndarray:
    """``out[a, b]`` is the matrix of ``K(e_a, e_b)``."""
    ls = p.lc_basis
    prod = ls[:, None] @ ls[None, :]
    lbr = np.tensordot(p.alg.c, ls, axes=([0], [0]))
    return lbr - (prod - prod.transpose(1, 0, 2, 3))


def is_flat(p: PseudoEuclideanLieAlgebra) -> bool:
    return ex.is_zero(curvature_tensor(p), _curv_scale(p))


def _curv_scale(p):
    return max(1.0, ex.scale_of(p.christoffel) ** 2, ex.scale_of(p.alg.c) * ex.scale_of(p.christoffel))


# -- Ricci curvature -------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureReport:
    Ric: np.ndarray
    ric: np.ndarray
    H: np.ndarray
    einstein_lambda: object | None
    flat: bool | None
    ricci_flat: bool
    einstein: bool
    method: str = ""


def mean_curvature(p: PseudoEuclideanLieAlgebra) -> np.ndarray:
    """``H`` with ``<H, u> = tr(ad_u)``."""
    t = ex.like(p.g, [ex.trace(a) for a in p.alg.ad_basis])
    return p.ginv @ t


def _report(p, ric, method, flat=None, ric_op=None, h=None) -> CurvatureReport:
    if ric_op is None:
        ric_op = p.ginv @ ric
    lam = _einstein_lambda(ric_op)
    scale = ex.scale_of(ric_op)
    ricci_flat = ex.is_zero(ric_op, scale)
    if flat:
        ricci_flat = True
    return CurvatureReport(
        Ric=ric_op,
        ric=ric,
        H=mean_curvature(p) if h is None else h,
        einstein_lambda=lam,
        flat=flat,
        ricci_flat=ricci_flat,
        einstein=lam is not None,
        method=method,
    )


def _einstein_lambda(ric_op):
    n = ric_op.shape[0]
    if n == 0:
        return None
    exact = ex.is_exact(ric_op)
    lam = ex.trace(ric_op) / n
    if ex.is_zero(ric_op - lam * ex.eye(n, exact), ex.scale_of(ric_op)):
        if not exact and abs(lam) <= ex.get_eps() * ex.scale_of(ric_op):
            lam = 0.0
        return lam
    return None


def _needs_frame(p) -> bool:
    g = p.g
    return not p.exact and not np.array_equal(g, np.diag(np.sign(np.diag(g))))


def _float_frame(p):
    """Orthonormal eigenframe of a float metric: ``(p in the frame, B, B^-1)``.

    Working in this frame avoids multiplying by ``g^-1``, whose error grows
    with the condition number of ``g``.
    """
    lam, q = np.linalg.eigh(p.g)
    root = np.sqrt(np.abs(lam))
    b, binv = q / root, (q * root).T
    c = np.einsum("ka,aij,ib,jc->kbc", binv, p.alg.c, b, b)
    c = 0.5 * (c - c.transpose(0, 2, 1))
    frame = PseudoEuclideanLieAlgebra(LieAlgebra(c, checked=False), MetricTensor(np.diag(np.sign(lam))))
    return frame, b, binv


def _framed(route):
    @functools.wraps(route)
    def wrapper(p, *args, **kwargs):
        if args or kwargs or not _needs_frame(p):
            return route(p, *args, **kwargs)
        frame, b, binv = _float_frame(p)
        rep = route(frame)
        return _report(p, binv.T @ rep.ric @ binv, rep.method, flat=rep.flat,
                       ric_op=b @ rep.Ric @ binv, h=b @ rep.H)
    return wrapper


@_framed
def ricci_direct(p: PseudoEuclideanLieAlgebra) -> CurvatureReport:
    """Ricci form as the literal trace ``ric(u, v) = tr(w -> K(u, w) v)``."""
    kt = curvature_tensor(p)
    ric = np.einsum("awwb->ab", kt)
    flat = ex.is_zero(kt, _curv_scale(p))
    return _report(p, ric, "direct", flat=flat)


@_framed
def ricci_via_r(p: PseudoEuclideanLieAlgebra) -> CurvatureReport:
    """``ric(u, v) = -tr(R_u R_v) - (<ad_H u, v> + <ad_H v, u>)/2`` with ``R_u = L_u - ad_u``."""
    n = p.dim
    rs = [p.lc_basis[i] - p.alg.ad_basis[i] for i in range(n)]
    ric = ex.zeros((n, n), p.exact)
    for a in range(n):
        for b in range(a, n):
            ric[a, b] = ric[b, a] = -ex.trace(rs[a] @ rs[b])
    m = p.alg.ad(mean_curvature(p)).T @ p.g
    ric = ric - _half(m + m.T, p.exact)
    return _report(p, ric, "via-R")


@dataclass(frozen=True)
class Operators:
    B_hat: np.ndarray
    J1: np.ndarray
    J2: np.ndarray
    H: np.ndarray


def J_map(p: PseudoEuclideanLieAlgebra, u) -> np.ndarray:
    """``J_u(v) = ad_v^* u``."""
    u = np.asarray(u)
    return np.column_stack([s @ u for s in p.ad_stars])


def operators(p: PseudoEuclideanLieAlgebra, cross_check: bool = True) -> Operators:
    """``B_hat``, ``J1``, ``J2`` from their trace definitions, and ``H``.

    With ``cross_check`` the two J operators are recomputed from the structure
    endomorphisms of the standard basis and compared; ``tr J1 = tr J2`` is
    asserted as well.
    """
    n = p.dim
    ads, stars = p.alg.ad_basis, p.ad_stars
    js = [J_map(p, ex.unit(n, i, p.exact)) for i in range(n)]
    kil = lie.killing_form(p.alg)
    m1 = ex.zeros((n, n), p.exact)
    m2 = ex.zeros((n, n), p.exact)
    for a in range(n):
        for b in range(n):
            m1[a, b] = ex.trace(ads[a] @ stars[b])
            m2[a, b] = -ex.trace(js[a] @ js[b])
    ops = Operators(p.ginv @ kil, p.ginv @ m1, p.ginv @ m2, mean_curvature(p))
    if cross_check:
        j1, j2 = j_operators_from_endos(structure_endos(p))
        scale = ex.scale_of(ops.J1, ops.J2)
        if not (ex.allclose(j1, ops.J1) and ex.allclose(j2, ops.J2)):
            raise CrossCheckMismatch("J1/J2 from traces and from structure endomorphisms differ")
        if not ex.is_zero(ex.trace(ops.J1) - ex.trace(ops.J2), scale):
            raise CrossCheckMismatch("tr J1 != tr J2")
    return ops


@_framed
def ricci_operator_formula(p: PseudoEuclideanLieAlgebra, ops: Operators | None = None) -> CurvatureReport:
    """``Ric = -(B + J1)/2 + J2/4 - (ad_H + ad_H*)/2``; the last term is dropped when unimodular."""
    ops = ops or operators(p, cross_check=False)
    exact = p.exact
    ric_op = -_half(ops.B_hat + ops.J1, exact) + (ops.J2 / 4 if exact else ops.J2 * 0.25)
    if not lie.is_unimodular(p.alg):
        adh = p.alg.ad(ops.H)
        ric_op = ric_op - _half(adh + p.adjoint(adh), exact)
    return _report(p, p.g @ ric_op, "operator")


def einstein_check(p: PseudoEuclideanLieAlgebra, method: str = "operator"):
    """``lambda`` if ``Ric = lambda Id`` (with ``lambda = tr Ric / n``), else ``None``."""
    rep = ricci_direct(p) if method == "direct" else ricci_operator_formula(p)
    return rep.einstein_lambda


# -- structure endomorphisms ----------------------------------------------------

@dataclass(frozen=True)
class StructureEndos:
    basis: np.ndarray  # columns e_1..e_p
    S: tuple
    metric: np.ndarray = field(repr=False)

    def J(self, u) -> np.ndarray:
        """``J_u = sum_i <u, e_i> S_i``."""
        u = np.asarray(u)
        coeffs = self.basis.T @ self.metric @ u
        out = ex.zeros(self.metric.shape, ex.is_exact(self.metric))
        for c, s in zip(coeffs, self.S):
            out = out + c * s
        return out

    def bracket(self, u, v) -> np.ndarray:
        """``[u, v] = sum_i <S_i u, v> e_i``."""
        coeffs = [(s @ u) @ self.metric @ v for s in self.S]
        return self.basis @ ex.like(self.metric, coeffs)


class SingularBasis(ValueError):
    pass


def structure_endos(p: PseudoEuclideanLieAlgebra, basis: np.ndarray | None = None) -> StructureEndos:
    n = p.dim
    if basis is None:
        basis = ex.eye(n, p.exact)
    try:
        binv = ex.inverse(basis)
    except ex.SingularMatrix:
        raise SingularBasis("basis vectors do not span the algebra") from None
    # beta_i[a, b] = i-th coordinate of [e_a, e_b] in the new basis; S_i = g^-1 beta_i^T
    coords = np.tensordot(binv, p.alg.c, axes=([1], [0]))
    s = tuple(p.ginv @ coords[i].T for i in range(n))
    return StructureEndos(basis, s, p.g)


def j_operators_from_endos(se: StructureEndos):
    """``J1 = -sum <e_i, e_j> S_i S_j`` and ``J2 u = -sum <e_i, u> tr(S_i S_j) e_j``."""
    g, b, s = se.metric, se.basis, se.S
    n = len(s)
    exact = ex.is_exact(g)
    gram = b.T @ g @ b
    j1 = ex.zeros(g.shape, exact)
    t = ex.zeros((n, n), exact)
    for i in range(n):
        for j in range(n):
            prod = s[i] @ s[j]
            if gram[i, j] != 0:
                j1 = j1 - gram[i, j] * prod
            t[i, j] = ex.trace(prod)
    j2 = -(b @ t.T @ b.T @ g)
    return j1, j2


def change_of_basis_endos(se: StructureEndos, new_basis: np.ndarray) -> tuple:
    """Structure endomorphisms for ``new_basis`` as ``K_j = sum_i p[j, i] S_i``.

    ``p[j, i]`` is the ``j``-th coordinate of the old basis vector ``e_i`` in the
    new basis.
    """
    pm = ex.inverse(new_basis) @ se.basis
    n = len(se.S)
    out = []
    for j in range(n):
        acc = ex.zeros(se.metric.shape, ex.is_exact(se.metric))
        for i in range(n):
            if pm[j, i] != 0:
                acc = acc + pm[j, i] * se.S[i]
        out.append(acc)
    return tuple(out)


# -- the trace identity for Q = -J1/2 + J2/4 ------------------------------------

def q_operator(p: PseudoEuclideanLieAlgebra, ops: Operators | None = None) -> np.ndarray:
    if ops is None and _needs_frame(p):
        frame, b, binv = _float_frame(p)
        return b @ q_operator(frame) @ binv
    ops = ops or operators(p, cross_check=False)
    if p.exact:
        return -ops.J1 / 2 + ops.J2 / 4
    return -0.5 * ops.J1 + 0.25 * ops.J2


@dataclass(frozen=True)
class OrthoFrame:
    """Orthogonal basis of the metric together with the data the trace identity needs."""

    basis: np.ndarray
    norms: tuple  # <x_i, x_i>
    alg: LieAlgebra  # structure constants in this basis
    normalized: bool


def ortho_frame(p: PseudoEuclideanLieAlgebra, normalize: bool | None = None) -> OrthoFrame:
    """Exact mode keeps ``<x_i, x_i> = d_i`` (no square roots); float mode normalizes."""
    normalize = (not p.exact) if normalize is None else normalize
    basis, d = congruence_diagonalize(p.g)
    if normalize:
        if p.exact:
            raise ValueError("normalized frames need float mode")
        scale = np.sqrt(np.abs(np.asarray(d, dtype=float)))
        basis = basis / scale
        d = [float(np.sign(x)) for x in d]
    return OrthoFrame(basis, tuple(d), p.alg.change_basis(basis), normalize)


def trace_identity_rhs(frame: OrthoFrame, e: np.ndarray):
    """``1/4 sum_ij <E[x_i,x_j] - [E x_i, x_j] - [x_i, E x_j], [x_i, x_j]> / (d_i d_j)``.

    With a normalized frame ``1/(d_i d_j)`` is the sign product; for a scaled
    frame it absorbs the normalization exactly.
    """
    b = frame.basis
    e_local = ex.inverse(b) @ e @ b
    c = frame.alg.c
    defect = lie.leibniz_defect(frame.alg, e_local)
    d = ex.like(c, list(frame.norms))
    # <X(i,j), C(i,j)> in the frame's diagonal metric
    pair = np.einsum("kij,kij,k->ij", defect, c, d)
    inv = 1 / d if ex.is_exact(c) else 1.0 / d
    total = inv @ pair @ inv
    return total / 4 if ex.is_exact(c) else 0.25 * total


def trace_Q_times(p: PseudoEuclideanLieAlgebra, e: np.ndarray, frame: OrthoFrame | None = None,
                  q: np.ndarray | None = None):
    """Both sides of ``tr(Q E) = (1/4) sum eps_i eps_j <E[e_i,e_j] - ..., [e_i,e_j]>``."""
    q = q_operator(p) if q is None else q
    frame = frame or ortho_frame(p)
    return ex.trace(q @ e), trace_identity_rhs(frame, e)


# -- Einstein algebras with nondegenerate center -----------------------------------

@dataclass(frozen=True)
class CenterReport:
    branch: str  # "euclidean" or "lorentzian"
    einstein_lambda: object
    quarter_tr_K2: object | None = None
    K: np.ndarray | None = None
    flat: bool | None = None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_nondegenerate_center_prop(p: PseudoEuclideanLieAlgebra) -> CenterReport:
    """Check the structure of an Einstein Lorentzian solvable unimodular algebra with nondegenerate center.

    Lorentzian center: with a timelike central ``e`` and ``g0 = e^⊥``, write
    ``[u, v] = <K u, v> e + [u, v]_0`` on ``g0``; then ``lambda = tr(K^2)/4``,
    and in fact ``lambda = 0``, ``K = 0``, the algebra is flat, ``L_u = 0`` on
    ``[g, g] + Z(g)`` and that sum is an abelian ideal.
    """
    if p.metric.signature[0] != 1:
        raise HypothesisFailed("lorentzian", f"signature {p.metric.signature}")
    if not lie.is_solvable(p.alg):
        raise HypothesisFailed("solvable")
    if not lie.is_unimodular(p.alg):
        raise HypothesisFailed("unimodular")
    lam = einstein_check(p)
    if lam is None:
        raise HypothesisFailed("einstein")
    z = lie.center(p.alg)
    rz = restrict_metric(p.metric, z)
    if isinstance(rz, Degenerate):
        raise HypothesisFailed("center nondegenerate", "center is degenerate")
    if rz.signature[0] == 0:
        return CenterReport("euclidean", lam, checks={"center euclidean": True})

    exact = p.exact
    pz, dz = congruence_diagonalize(rz.matrix)
    idx = next(i for i, x in enumerate(dz) if x < 0)
    e = z.basis @ pz[:, idx]
    ee = p.inner(e, e)
    g0 = Subspace.span(ex.nullspace((p.g @ e).reshape(1, -1)), p.dim)
    w = g0.basis
    gram0 = w.T @ p.g @ w
    m = w.shape[1]
    a = ex.zeros((m, m), exact)
    for i in range(m):
        for j in range(m):
            a[i, j] = p.inner(p.alg.bracket(w[:, i], w[:, j]), e) / ee
    k_raw = ex.inverse(gram0) @ a.T
    # K for the unit vector e/sqrt(-<e,e>) is sqrt(-<e,e>) * k_raw
    quarter = (-ee) * ex.trace(k_raw @ k_raw) / 4
    flat = is_flat(p)
    scale = max(ex.scale_of(p.alg.c) ** 2, 1.0)
    dg = lie.derived_ideal(p.alg)
    b = dg + z
    lc_ok = all(ex.is_zero(lc_matrix(p, b.basis[:, i]), scale) for i in range(b.dim))
    b_abelian = all(
        ex.is_zero(p.alg.bracket(b.basis[:, i], b.basis[:, j]), scale)
        for i in range(b.dim) for j in range(b.dim)
    )
    checks = {
        "lambda = tr(K^2)/4": ex.is_zero(lam - quarter, scale),
        "lambda = 0": ex.is_zero(lam, scale),
        "K = 0": ex.is_zero(k_raw, scale),
        "flat": flat,
        "L_u = 0 on [g,g] + Z(g)": lc_ok,
        "[g,g] + Z(g) abelian ideal": b_abelian and lie.is_ideal(p.alg, b),
    }
    return CenterReport("lorentzian", lam, quarter, k_raw, flat, checks)
