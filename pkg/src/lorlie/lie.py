"""Metric-free Lie algebra structure.

A :class:`LieAlgebra` stores structure constants ``c[k, i, j]`` with
``[e_i, e_j] = sum_k c[k, i, j] e_k`` (0-based indices).  Vectors are coordinate
arrays in that basis.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from .poly import all_roots_real, charpoly, rational_roots
from .pseudo import Subspace


class JacobiError(ValueError):
    """Structure constants violate the Jacobi identity."""

    def __init__(self, triple, defect):
        self.triple = triple
        self.defect = defect
        i, j, k = (t + 1 for t in triple)
        super().__init__(f"Jacobi identity fails on (e{i}, e{j}, e{k})")


@dataclass(frozen=True)
class JacobiDefect:
    norm: object
    triple: tuple[int, int, int] | None
    vector: np.ndarray | None

    @property
    def is_zero(self) -> bool:
        return self.triple is None


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    checked: bool = True

    def __post_init__(self):
        c = np.asarray(self.c)
        c = np.array(c, dtype=object if ex.is_exact(c) else float)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape (n, n, n), got {c.shape}")
        if not ex.allclose(c, -np.transpose(c, (0, 2, 1))):
            raise ValueError("structure constants are not antisymmetric in (i, j)")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        if self.checked:
            d = jacobi_defect(self)
            if not d.is_zero:
                raise JacobiError(d.triple, d.vector)

    @classmethod
    def unchecked(cls, c) -> "LieAlgebra":
        """Build without enforcing Jacobi (for defect reporting)."""
        return cls(c, checked=False)

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, exact: bool = True, check: bool = True):
        """``brackets`` maps 0-based ``(i, j)`` to the coefficient list of ``[e_i, e_j]``."""
        c = ex.zeros((dim, dim, dim), exact)
        for (i, j), coeffs in brackets.items():
            v = ex.mat(coeffs) if exact else ex.fmat(coeffs)
            c[:, i, j] = c[:, i, j] + v
            c[:, j, i] = c[:, j, i] - v
        return cls(c, checked=check)

    @classmethod
    def abelian(cls, dim: int, exact: bool = True) -> "LieAlgebra":
        return cls(ex.zeros((dim, dim, dim), exact))

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @property
    def exact(self) -> bool:
        return ex.is_exact(self.c)

    def bracket(self, u, v) -> np.ndarray:
        return (self.c @ np.asarray(v)) @ np.asarray(u)

    def ad(self, u) -> np.ndarray:
        return np.tensordot(self.c, np.asarray(u), axes=([1], [0]))

    @functools.cached_property
    def ad_basis(self) -> tuple:
        out = []
        for i in range(self.dim):
            m = np.array(self.c[:, i, :])
            m.setflags(write=False)
            out.append(m)
        return tuple(out)

    def change_basis(self, p: np.ndarray) -> "LieAlgebra":
        """Structure constants in the basis given by the columns of ``p``."""
        pinv = ex.inverse(p)
        n = self.dim
        c = ex.zeros((n, n, n), self.exact)
        for a in range(n):
            for b in range(a + 1, n):
                v = pinv @ self.bracket(p[:, a], p[:, b])
                c[:, a, b] = v
                c[:, b, a] = -v
        return LieAlgebra(c, checked=self.checked)

    def to_float(self) -> "LieAlgebra":
        return LieAlgebra(ex.to_float(self.c), checked=False)

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and ex.allclose(self.c, other.c)

    __hash__ = object.__hash__


def jacobi_defect(alg: LieAlgebra) -> JacobiDefect:
    c = alg.c
    n = c.shape[0]
    # t[i, j, :, k] = [[e_i, e_j], e_k]
    t = np.tensordot(c, c, axes=([0], [1]))
    worst, where, vec = (mpq(0) if alg.exact else 0.0), None, None
    scale = ex.scale_of(c) ** 2
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = t[i, j, :, k] + t[j, k, :, i] + t[k, i, :, j]
                m = max(abs(x) for x in s)
                if not ex.is_zero(m, scale) and m > worst:
                    worst, where, vec = m, (i, j, k), s
    return JacobiDefect(worst, where, vec)


def span_of_brackets(alg: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    n = alg.dim
    vecs = [alg.bracket(a.basis[:, i], b.basis[:, j]) for i in range(a.dim) for j in range(b.dim)]
    if not vecs:
        return Subspace.zero(n, alg.exact)
    return Subspace.span(np.column_stack(vecs), n)


def derived_ideal(alg: LieAlgebra) -> Subspace:
    whole = Subspace.whole(alg.dim, alg.exact)
    return span_of_brackets(alg, whole, whole)


def center(alg: LieAlgebra) -> Subspace:
    n = alg.dim
    if n == 0:
        return Subspace.zero(0, alg.exact)
    stacked = np.concatenate(alg.ad_basis, axis=0)
    return Subspace.span(ex.nullspace(stacked), n)


def derived_series(alg: LieAlgebra) -> list[Subspace]:
    """``D^0 = g, D^{k+1} = [D^k, D^k]`` up to (and including) the first repeat-free term."""
    series = [Subspace.whole(alg.dim, alg.exact)]
    while True:
        nxt = span_of_brackets(alg, series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def lower_central_series(alg: LieAlgebra) -> list[Subspace]:
    whole = Subspace.whole(alg.dim, alg.exact)
    series = [whole]
    while True:
        nxt = span_of_brackets(alg, whole, series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def is_solvable(alg: LieAlgebra) -> bool:
    return derived_series(alg)[-1].dim == 0


def is_nilpotent(alg: LieAlgebra) -> bool:
    return lower_central_series(alg)[-1].dim == 0


def is_abelian(alg: LieAlgebra) -> bool:
    return ex.is_zero(alg.c)


def is_unimodular(alg: LieAlgebra) -> bool:
    return all(ex.is_zero(ex.trace(a), ex.scale_of(a)) for a in alg.ad_basis)


def killing_form(alg: LieAlgebra) -> np.ndarray:
    ads = alg.ad_basis
    n = alg.dim
    b = ex.zeros((n, n), alg.exact)
    for i in range(n):
        for j in range(i, n):
            b[i, j] = b[j, i] = ex.trace(ads[i] @ ads[j])
    return b


def is_ideal(alg: LieAlgebra, s: Subspace) -> bool:
    whole = Subspace.whole(alg.dim, alg.exact)
    return s.contains_subspace(span_of_brackets(alg, whole, s))


def is_derivation(alg: LieAlgebra, d: np.ndarray) -> bool:
    return ex.is_zero(leibniz_defect(alg, d), ex.scale_of(d) * ex.scale_of(alg.c))


def leibniz_defect(alg: LieAlgebra, d: np.ndarray) -> np.ndarray:
    """``D[e_i, e_j] - [D e_i, e_j] - [e_i, D e_j]`` stacked as ``out[:, i, j]``."""
    c = alg.c
    # D c(i,j) - c(D e_i, e_j) - c(e_i, D e_j)
    dc = np.tensordot(d, c, axes=([1], [0]))
    left = np.tensordot(c, d, axes=([1], [0])).transpose(0, 2, 1)
    right = np.tensordot(c, d, axes=([2], [0]))
    return dc - left - right


def derivation_space(alg: LieAlgebra) -> list[np.ndarray]:
    """Basis of Der(g), solving the Leibniz rule as a linear system in the n^2 entries."""
    n = alg.dim
    c = alg.c
    exact = alg.exact
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = ex.zeros((len(pairs) * n, n * n), exact)
    for p, (i, j) in enumerate(pairs):
        for k in range(n):
            r = p * n + k
            for m in range(n):
                rows[r, k * n + m] += c[m, i, j]
                rows[r, m * n + i] -= c[k, m, j]
                rows[r, m * n + j] -= c[k, i, m]
    ns = ex.nullspace(rows) if pairs else ex.eye(n * n, exact)
    return [ns[:, k].reshape(n, n) for k in range(ns.shape[1])]


@dataclass(frozen=True)
class CompleteSolvability:
    """Outcome of the complete-solvability test.

    ``holds`` is ``None`` in float mode (indeterminate).  ``flag`` lists the ideals
    ``I_1 ⊂ ... ⊂ I_n`` when a rational flag exists; ``basis`` is an adapted basis
    (column ``k`` spans ``I_{k+1}`` modulo ``I_k``).
    """

    holds: bool | None
    flag: tuple | None = None
    basis: np.ndarray | None = None
    reason: str = ""

    def __bool__(self):
        return bool(self.holds)


def complete_solvability(alg: LieAlgebra) -> CompleteSolvability:
    """Decide complete solvability and, when possible, return a flag of ideals.

    A solvable real Lie algebra is completely solvable iff every ``ad_x`` has real
    spectrum; since the spectra of ``ad_x`` are the values of finitely many linear
    weights, checking the basis elements suffices.  Real-rootedness is decided by
    Sturm sequences.  A flag with rational vectors exists iff every weight is
    rational on the basis, and is then found by a common-eigenvector search on
    successive quotients.
    """
    if not alg.exact:
        return CompleteSolvability(None, reason="float mode: real-rootedness is not decided with a tolerance")
    if not is_solvable(alg):
        return CompleteSolvability(False, reason="not solvable")
    polys = [charpoly(a) for a in alg.ad_basis]
    for i, p in enumerate(polys):
        if not all_roots_real(p):
            return CompleteSolvability(False, reason=f"ad(e{i + 1}) has non-real eigenvalues")
    roots = [rational_roots(p) for p in polys]
    if any(sum(_multiplicity(p, r) for r in rs) != len(p) - 1 for p, rs in zip(polys, roots)):
        return CompleteSolvability(True, reason="real spectrum with an irrational weight: no rational flag")
    basis = _flag_search(alg, ex.zeros((alg.dim, 0)), roots)
    if basis is None:  # pragma: no cover - excluded by the rational-weight test above
        return CompleteSolvability(True, reason="rational flag search failed")
    n = alg.dim
    flag = tuple(Subspace(n, basis[:, : k + 1]) for k in range(n))
    return CompleteSolvability(True, flag, basis, "flag of ideals found")


def is_completely_solvable(alg: LieAlgebra) -> bool | None:
    return complete_solvability(alg).holds


def _multiplicity(p, r) -> int:
    from .poly import divmod_poly

    k = 0
    while True:
        quo, rem = divmod_poly(p, [-r, mpq(1)])
        if rem:
            return k
        p, k = quo, k + 1


def _complement(basis: np.ndarray) -> np.ndarray:
    n, k = basis.shape
    cols = [basis[:, i] for i in range(k)]
    comp = []
    for i in range(n):
        v = ex.unit(n, i)
        if ex.rank(np.column_stack(cols + comp + [v])) > len(cols) + len(comp):
            comp.append(v)
    return np.column_stack(comp) if comp else ex.zeros((n, 0))


def _common_eigenvectors(mats, roots, space):
    """Yield bases of nonzero common eigenspaces ``{x in span(space) : M_i x = l_i x}``."""
    if not mats:
        yield space
        return
    m, rest = mats[0], mats[1:]
    ident = ex.eye(m.shape[0])
    for lam in roots[0]:
        k = ex.nullspace((m - lam * ident) @ space)
        if k.shape[1]:
            yield from _common_eigenvectors(rest, roots[1:], space @ k)


def _flag_search(alg: LieAlgebra, current: np.ndarray, roots):
    n, k = current.shape
    if k == n:
        return current
    comp = _complement(current)
    full = np.column_stack([current, comp]) if k else comp
    finv = ex.inverse(full)
    quotient = [(finv @ a @ full)[k:, k:] for a in alg.ad_basis]
    for space in _common_eigenvectors(quotient, roots, ex.eye(n - k)):
        v = comp @ space[:, 0]
        found = _flag_search(alg, np.column_stack([current, v]) if k else v.reshape(-1, 1), roots)
        if found is not None:
            return found
    return None


@dataclass(frozen=True)
class ClassificationFlags:
    abelian: bool
    nilpotent: bool
    solvable: bool
    completely_solvable: bool | None
    unimodular: bool
    derived_series_length: int
    lower_central_length: int
    flag: tuple | None = field(default=None, compare=False)


def classify(alg: LieAlgebra) -> ClassificationFlags:
    ds = derived_series(alg)
    lc = lower_central_series(alg)
    cs = complete_solvability(alg)
    return ClassificationFlags(
        abelian=is_abelian(alg),
        nilpotent=lc[-1].dim == 0,
        solvable=ds[-1].dim == 0,
        completely_solvable=cs.holds,
        unimodular=is_unimodular(alg),
        derived_series_length=len(ds) - 1,
        lower_central_length=len(lc) - 1,
        flag=cs.flag,
    )
