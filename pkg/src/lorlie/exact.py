"""Scalar modes and the Gaussian-elimination kernel shared by every module.

Two arithmetic modes exist.  Exact arrays are numpy ``object`` arrays holding
:class:`gmpy2.mpq` rationals and never round.  Float arrays are ``float64`` and
every comparison uses one global tolerance (see :func:`tolerance`).  The mode of
a computation is read off the dtype of its inputs, so the same routines serve
both.
"""

from __future__ import annotations

import contextlib
import contextvars
from fractions import Fraction
from numbers import Rational

import numpy as np
from gmpy2 import mpq

DEFAULT_EPS = 1e-9

_eps: contextvars.ContextVar[float] = contextvars.ContextVar("lorlie_eps", default=DEFAULT_EPS)


class SingularMatrix(ValueError):
    pass


def get_eps() -> float:
    return _eps.get()


def set_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    _eps.set(float(eps))


@contextlib.contextmanager
def tolerance(eps: float):
    """Temporarily change the float-mode tolerance."""
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    token = _eps.set(float(eps))
    try:
        yield
    finally:
        _eps.reset(token)


# -- scalars -----------------------------------------------------------------

def q(x) -> mpq:
    """Coerce ``x`` to an exact rational.  Floats convert exactly (binary value)."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, np.integer)):
        return mpq(int(x))
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, (float, np.floating)):
        return mpq(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


_vq = np.frompyfunc(q, 1, 1)


def mat(data) -> np.ndarray:
    """Exact array (any shape) from nested sequences of ints, strings, fractions."""
    arr = np.asarray(data, dtype=object)
    if arr.size == 0:
        return arr.astype(object)
    return _vq(arr).astype(object)


def fmat(data) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    if arr.size and arr.dtype == object:
        arr = np.frompyfunc(float, 1, 1)(arr)
    return np.asarray(arr, dtype=float)


def is_exact(a) -> bool:
    if isinstance(a, np.ndarray):
        return a.dtype == object
    return not isinstance(a, (float, np.floating))


def to_float(a):
    if isinstance(a, np.ndarray):
        return fmat(a)
    return float(a)


def to_exact(a):
    if isinstance(a, np.ndarray):
        return mat(a)
    return q(a)


def like(a, data):
    """Array of ``data`` in the same mode as ``a``."""
    return mat(data) if is_exact(a) else fmat(data)


def zeros(shape, exact: bool = True) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(mpq(0))
        return out
    return np.zeros(shape)


def eye(n: int, exact: bool = True) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = mpq(1) if exact else 1.0
    return out


def unit(n: int, i: int, exact: bool = True) -> np.ndarray:
    v = zeros(n, exact)
    v[i] = mpq(1) if exact else 1.0
    return v


def scale_of(*arrays) -> float:
    m = 1.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            m = max(m, float(np.max(np.abs(to_float(a)))))
    return m


def is_zero(x, scale: float = 1.0) -> bool:
    """Mode-aware zero test for a scalar or array (all entries)."""
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            return all(v == 0 for v in x.flat)
        return x.size == 0 or float(np.max(np.abs(x))) <= get_eps() * scale
    if is_exact(x):
        return x == 0
    return abs(x) <= get_eps() * scale


def allclose(a, b) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    if a.dtype == object and b.dtype == object:
        return bool(np.all(a == b))
    return is_zero(to_float(a) - to_float(b), scale_of(a, b))


def trace(a):
    s = mpq(0) if is_exact(a) else 0.0
    for i in range(a.shape[0]):
        s = s + a[i, i]
    return s


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), mpq(0) if is_exact(u) else 0.0)


def rational_sqrt(x) -> mpq | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = q(x)
    if x < 0:
        return None
    import gmpy2

    num, den = x.numerator, x.denominator
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
    return None


# -- elimination -------------------------------------------------------------

def rref(a: np.ndarray):
    """Reduced row echelon form.  Returns ``(R, pivot_columns)``.

    Exact arrays pivot on the first nonzero entry; float arrays pivot on the
    largest magnitude and treat entries below ``eps * scale`` as zero.
    """
    exact = is_exact(a)
    r = np.array(a, dtype=object if exact else float, copy=True)
    if r.ndim != 2:
        raise ValueError("rref needs a matrix")
    rows, cols = r.shape
    thresh = 0.0 if exact else get_eps() * scale_of(r)
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        if exact:
            piv = next((i for i in range(row, rows) if r[i, col] != 0), None)
        else:
            i = row + int(np.argmax(np.abs(r[row:, col])))
            piv = i if abs(r[i, col]) > thresh else None
        if piv is None:
            if not exact:
                r[row:, col] = 0.0
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = r[row] / r[row, col]
        for i in range(rows):
            if i != row and (r[i, col] != 0):
                r[i] = r[i] - r[i, col] * r[row]
        if not exact:
            r[row, col] = 1.0
        pivots.append(col)
        row += 1
    if not exact:
        r[np.abs(r) <= thresh] = 0.0
    return r, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the columns of the returned matrix."""
    exact = is_exact(a)
    rows, cols = a.shape
    if rows == 0:
        return eye(cols, exact)
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros((cols, len(free)), exact)
    for k, f in enumerate(free):
        basis[f, k] = mpq(1) if exact else 1.0
        for i, p in enumerate(pivots):
            basis[p, k] = -r[i, f]
    return basis


def column_basis(a: np.ndarray) -> np.ndarray:
    """Linearly independent columns of ``a`` spanning its column space."""
    if a.size == 0 or a.shape[1] == 0:
        return zeros((a.shape[0], 0), is_exact(a))
    _, pivots = rref(a)
    return a[:, pivots]


def reduced_span(a: np.ndarray) -> np.ndarray:
    """Canonical basis (columns) of the column space: the transposed RREF rows."""
    exact = is_exact(a)
    if a.size == 0 or a.shape[1] == 0:
        return zeros((a.shape[0], 0), exact)
    r, pivots = rref(a.T)
    return np.array(r[: len(pivots)].T, dtype=object if exact else float)


def inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    aug = np.concatenate([a, eye(n, is_exact(a))], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return r[:, n:]


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return inverse(a) @ b


def det(a: np.ndarray):
    """Determinant by elimination (exact for rational input)."""
    exact = is_exact(a)
    m = np.array(a, dtype=object if exact else float, copy=True)
    n = m.shape[0]
    d = mpq(1) if exact else 1.0
    for col in range(n):
        if exact:
            piv = next((i for i in range(col, n) if m[i, col] != 0), None)
        else:
            piv = col + int(np.argmax(np.abs(m[col:, col])))
            if m[piv, col] == 0:
                piv = None
        if piv is None:
            return mpq(0) if exact else 0.0
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
            d = -d
        d = d * m[col, col]
        for i in range(col + 1, n):
            if m[i, col] != 0:
                m[i] = m[i] - (m[i, col] / m[col, col]) * m[col]
    return d


def in_span(basis: np.ndarray, v: np.ndarray) -> bool:
    if basis.shape[1] == 0:
        return is_zero(v, scale_of(v))
    return rank(np.column_stack([basis, v])) == rank(basis)


def coordinates(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coefficients ``x`` with ``basis @ x = v`` for independent columns; ValueError if ``v`` is outside."""
    k = basis.shape[1]
    r, pivots = rref(np.column_stack([basis, v]))
    if k in pivots:
        raise ValueError("vector is not in the span")
    if pivots != list(range(k)):
        raise ValueError("basis columns are dependent")
    return np.array(r[:k, k], dtype=object if is_exact(basis) else float)
