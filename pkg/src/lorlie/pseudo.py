"""Linear algebra on pseudo-Euclidean vector spaces.

Signatures, metric adjoints, skew-symmetry, restriction to subspaces, orthogonal
complements and completion of an isotropic vector to a Lorentzian (Witt) basis.
Everything works in exact mode (rational object arrays) and float mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import exact as ex


class DegenerateMetric(ValueError):
    pass


class NotIsotropic(ValueError):
    pass


class NotLorentzian(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=object if ex.is_exact(a) else float)
    a.setflags(write=False)
    return a


def _gram(g) -> np.ndarray:
    return g.matrix if isinstance(g, MetricTensor) else np.asarray(g)


def congruence_diagonalize(g):
    """Symmetric Gaussian congruence.

    Returns ``(P, d)`` with ``P.T @ g @ P == diag(d)`` and ``P`` invertible.  The
    columns of ``P`` form an orthogonal basis.  Zero diagonal pivots are repaired
    by adding a partner direction with a nonzero off-diagonal entry.
    """
    g = np.asarray(g)
    exact = ex.is_exact(g)
    n = g.shape[0]
    a = np.array(g, dtype=object if exact else float, copy=True)
    p = ex.eye(n, exact)
    thresh = 0.0 if exact else ex.get_eps() * ex.scale_of(g)

    def nz(x):
        return x != 0 if exact else abs(x) > thresh

    def best(vals):
        if exact:
            return next((i for i, v in enumerate(vals) if v != 0), None)
        i = int(np.argmax(np.abs(vals)))
        return i if abs(vals[i]) > thresh else None

    for k in range(n):
        j = best([a[i, i] for i in range(k, n)])
        if j is not None:
            j += k
        else:
            # no usable diagonal pivot: combine two directions with a nonzero cross term
            off = [(i, m) for i in range(k, n) for m in range(i + 1, n) if nz(a[i, m])]
            if not off:
                break
            if not exact:
                off.sort(key=lambda t: -abs(a[t[0], t[1]]))
            i, m = off[0]
            # e_i <- e_i + e_m has norm a_ii + 2 a_im + a_mm = 2 a_im != 0
            a[:, i] = a[:, i] + a[:, m]
            a[i, :] = a[i, :] + a[m, :]
            p[:, i] = p[:, i] + p[:, m]
            j = i
        if j != k:
            a[:, [k, j]] = a[:, [j, k]]
            a[[k, j], :] = a[[j, k], :]
            p[:, [k, j]] = p[:, [j, k]]
        piv = a[k, k]
        for i in range(k + 1, n):
            if nz(a[i, k]):
                f = a[i, k] / piv
                a[i, :] = a[i, :] - f * a[k, :]
                a[:, i] = a[:, i] - f * a[:, k]
                p[:, i] = p[:, i] - f * p[:, k]
        if not exact:
            a[k + 1:, k] = 0.0
            a[k, k + 1:] = 0.0
    d = [a[i, i] for i in range(n)]
    if not exact:
        d = [0.0 if abs(x) <= thresh else float(x) for x in d]
    return p, d


def signature(g) -> tuple[int, int]:
    """``(q, n - q)``: counts of negative and positive directions."""
    m = _gram(g)
    if not ex.allclose(m, m.T):
        raise ValueError("metric must be symmetric")
    _, d = congruence_diagonalize(m)
    if any(x == 0 for x in d):
        raise DegenerateMetric("metric is degenerate")
    neg = sum(1 for x in d if x < 0)
    return neg, len(d) - neg


@dataclass(frozen=True)
class MetricTensor:
    matrix: np.ndarray
    signature: tuple[int, int] = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("metric must be a square matrix")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "signature", signature(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def exact(self) -> bool:
        return ex.is_exact(self.matrix)

    @property
    def is_lorentzian(self) -> bool:
        return self.signature[0] == 1

    @property
    def is_euclidean(self) -> bool:
        return self.signature[0] == 0

    def inner(self, u, v):
        return u @ self.matrix @ v

    def norm2(self, u):
        return u @ self.matrix @ u

    @property
    def inverse(self) -> np.ndarray:
        return ex.inverse(self.matrix)

    def __eq__(self, other):
        return isinstance(other, MetricTensor) and ex.allclose(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.shape)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: np.ndarray  # columns

    def __post_init__(self):
        b = np.asarray(self.basis)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if b.shape[0] != self.ambient_dim:
            raise ValueError("basis vectors must live in the ambient space")
        if b.shape[1] and ex.rank(b) != b.shape[1]:
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", _frozen(b))

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, exact: bool = True) -> "Subspace":
        """Subspace spanned by (possibly dependent) vectors given as columns."""
        a = np.asarray(vectors)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        n = a.shape[0] if ambient_dim is None else ambient_dim
        if a.size == 0:
            return cls.zero(n, exact)
        return cls(n, ex.reduced_span(a))

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> "Subspace":
        return cls(n, ex.zeros((n, 0), exact))

    @classmethod
    def whole(cls, n: int, exact: bool = True) -> "Subspace":
        return cls(n, ex.eye(n, exact))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, v) -> bool:
        return ex.in_span(self.basis, np.asarray(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return ex.rank(np.column_stack([self.basis, other.basis])) == self.dim

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.ambient_dim == self.ambient_dim
            and other.dim == self.dim
            and self.contains_subspace(other)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.column_stack([self.basis, other.basis]), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, ex.is_exact(self.basis))
        k = ex.nullspace(np.column_stack([self.basis, -other.basis]))
        return Subspace.span(self.basis @ k[: self.dim], self.ambient_dim)


@dataclass(frozen=True)
class Degenerate:
    """Restriction of a metric whose Gram matrix is singular."""

    gram: np.ndarray
    radical: Subspace


@dataclass(frozen=True)
class WittBasis:
    e: np.ndarray
    e_bar: np.ndarray
    spacelike: tuple
    # <f_i, f_i>; all ones when the spacelike vectors are normalized
    norms: tuple = ()

    def matrix(self) -> np.ndarray:
        return np.column_stack([self.e, self.e_bar, *self.spacelike])


def metric_adjoint(f: np.ndarray, g) -> np.ndarray:
    """``F* = g^-1 F^T g``, the adjoint with respect to the metric."""
    m = _gram(g)
    try:
        ginv = ex.inverse(m)
    except ex.SingularMatrix:
        raise DegenerateMetric("metric is degenerate") from None
    return ginv @ f.T @ m


def is_skew_symmetric(f: np.ndarray, g) -> bool:
    m = _gram(g)
    # F* = -F  <=>  F^T g + g F = 0, which avoids inverting g
    return ex.is_zero(f.T @ m + m @ f, ex.scale_of(f) * ex.scale_of(m))


def is_isotropic(v, g) -> bool:
    v = np.asarray(v)
    m = _gram(g)
    if not np.any(v != 0):
        return False
    n2 = v @ m @ v
    if ex.is_exact(v):
        return n2 == 0
    return abs(n2) < ex.get_eps() * float(v @ v) * ex.scale_of(m)


def restrict_metric(g, s: Subspace):
    """Gram matrix of ``g`` on ``s``; a :class:`Degenerate` value when singular."""
    m = _gram(g)
    b = s.basis
    gram = b.T @ m @ b
    if s.dim == 0:
        return MetricTensor(gram)
    rad = ex.nullspace(gram)
    if rad.shape[1]:
        return Degenerate(gram, Subspace.span(b @ rad, s.ambient_dim))
    return MetricTensor(gram)


def orthogonal_complement(s: Subspace, g) -> Subspace:
    m = _gram(g)
    n = m.shape[0]
    if s.dim == 0:
        return Subspace.whole(n, ex.is_exact(m))
    return Subspace.span(ex.nullspace(s.basis.T @ m), n)


def radical(s: Subspace, g) -> Subspace:
    """``s ∩ s^⊥``; for isotropic-vector searches in a degenerate subspace."""
    r = restrict_metric(g, s)
    if isinstance(r, Degenerate):
        return r.radical
    return Subspace.zero(s.ambient_dim, ex.is_exact(s.basis))


def gram_schmidt(vectors, g, normalize: bool = True):
    """Orthogonalize columns spanning a definite subspace.

    Returns ``(vectors, norms)``.  In exact mode a vector is normalized only when
    its squared norm is a rational square; otherwise it stays orthogonal with its
    squared norm recorded.
    """
    m = _gram(g)
    exact = ex.is_exact(m)
    out, norms = [], []
    for k in range(vectors.shape[1]):
        v = vectors[:, k]
        for w, nw in zip(out, norms):
            v = v - (w @ m @ v) / nw * w
        n2 = v @ m @ v
        if ex.is_zero(n2, ex.scale_of(v) ** 2 * ex.scale_of(m)):
            raise DegenerateMetric("subspace is not definite")
        if normalize:
            if exact:
                r = ex.rational_sqrt(abs(n2))
                if r is not None:
                    v = v / r
                    n2 = n2 / (r * r)
            else:
                v = v / np.sqrt(abs(n2))
                n2 = float(np.sign(n2))
        out.append(v)
        norms.append(n2)
    return out, norms


def complete_witt_basis(e, g, normalize: bool = True) -> WittBasis:
    """Complete an isotropic ``e`` to ``(e, e_bar, f_1, ..., f_{n-2})``.

    ``e_bar`` is isotropic with ``<e, e_bar> = 1`` and the ``f_i`` are an
    orthogonal basis of ``span(e, e_bar)^⊥``, normalized whenever that is
    possible in the current mode.
    """
    m = _gram(g)
    e = np.asarray(e)
    n = m.shape[0]
    sig = g.signature if isinstance(g, MetricTensor) else signature(m)
    if sig[0] != 1:
        raise NotLorentzian(f"metric has signature {sig}, expected (1, {n - 1})")
    if not is_isotropic(e, m):
        raise NotIsotropic("vector is not isotropic")
    ge = m @ e
    exact = ex.is_exact(m)
    v = None
    for i in (np.argsort(-np.abs(ex.to_float(ge))) if not exact else range(n)):
        if not ex.is_zero(ge[i], ex.scale_of(ge)):
            v = ex.unit(n, int(i), exact)
            break
    return witt_from(e, v, m, normalize)


def witt_from(e, v, g, normalize: bool = True) -> WittBasis:
    """Witt basis from isotropic ``e`` and any ``v`` with ``<e, v> != 0``."""
    m = _gram(g)
    n = m.shape[0]
    ev = e @ m @ v
    vv = v @ m @ v
    e_bar = v / ev - (vv / (2 * ev * ev)) * e
    plane = Subspace(n, np.column_stack([e, e_bar]))
    rest = orthogonal_complement(plane, m)
    fs, norms = gram_schmidt(rest.basis, m, normalize)
    return WittBasis(e, e_bar, tuple(fs), tuple(norms))


def check_witt_basis(w: WittBasis, g) -> bool:
    """All Gram relations of a Witt basis (with the recorded spacelike norms)."""
    m = _gram(g)
    b = w.matrix()
    gram = b.T @ m @ b
    exact = ex.is_exact(gram)
    n = b.shape[0]
    want = ex.zeros((n, n), exact)
    one = mpq(1) if exact else 1.0
    want[0, 1] = want[1, 0] = one
    norms = w.norms or (one,) * (n - 2)
    for i, nv in enumerate(norms):
        if not nv > 0:
            return False
        want[2 + i, 2 + i] = nv
    return b.shape[1] == n and ex.rank(b) == n and ex.allclose(gram, want)


def skew_basis(g, kills=None) -> list[np.ndarray]:
    """Basis of the maps skew for ``g``; with ``kills`` only those that vanish on that vector."""
    m = _gram(g)
    n = m.shape[0]
    exact = ex.is_exact(m)
    one = mpq(1) if exact else 1.0
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            x = ex.zeros((n, n), exact)
            x[i, j], x[j, i] = one, -one
            gens.append(x)
    if not gens:
        return []
    ginv = ex.inverse(m)
    if kills is None:
        return [ginv @ x for x in gens]
    # A = g^-1 X kills e iff X e = 0
    ns = ex.nullspace(np.column_stack([x @ np.asarray(kills) for x in gens]))
    out = []
    for s in range(ns.shape[1]):
        x = ex.zeros((n, n), exact)
        for t, gen in enumerate(gens):
            if ns[t, s] != 0:
                x = x + ns[t, s] * gen
        out.append(ginv @ x)
    return out


def rational_isotropic_vector(g):
    """A nonzero isotropic vector with rational coordinates found from the diagonal frame, or ``None``.

    Pairs ``x, y`` with ``<x,x> = -a < 0 < b = <y,y>`` give ``x sqrt(b) + y sqrt(a)``, which
    is rational exactly when ``a b`` is a square.
    """
    m = _gram(g)
    p, d = congruence_diagonalize(m)
    exact = ex.is_exact(m)
    for i, di in enumerate(d):
        if di == 0:
            return p[:, i]
    negs = [i for i, x in enumerate(d) if x < 0]
    poss = [i for i, x in enumerate(d) if x > 0]
    for i in negs:
        for j in poss:
            a, b = -d[i], d[j]
            if exact:
                r = ex.rational_sqrt(b / a)
                if r is not None:
                    return r * p[:, i] + p[:, j]
            else:
                return np.sqrt(b / a) * p[:, i] + p[:, j]
    return None


def isotropic_image(a: np.ndarray, e, g):
    """``(<Ae, Ae>, Ae in Re)`` for a skew ``a`` and isotropic ``e``."""
    m = _gram(g)
    ae = a @ np.asarray(e)
    return ae @ m @ ae, ex.in_span(np.asarray(e).reshape(-1, 1), ae)
