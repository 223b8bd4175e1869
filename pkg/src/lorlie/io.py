"""JSON file formats for algebras, double-extension parameters, reports and certificates.

An algebra file looks like::

    {
      "dim": 3,
      "mode": "exact",
      "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
      "brackets": [{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}]
    }

Indices are 1-based with ``i < j``; unlisted pairs bracket to zero.  Exact files
store rationals as strings (``"3"``, ``"-1/2"``), float files store numbers.
:func:`dumps_algebra` is canonical, so ``dumps(loads(text)) == text`` for any
canonical text.
"""

from __future__ import annotations

import contextvars
import hashlib
import json
import json.decoder
import json.scanner
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from .lie import LieAlgebra
from .metric import PseudoEuclideanLieAlgebra
from .pseudo import MetricTensor


class ParseError(ValueError):
    """Malformed input.  ``line``/``column`` are set for syntax errors, ``path`` for content errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(path)
        super().__init__(f"{'; '.join(where)}: {message}" if where else message)


# -- scalars ----------------------------------------------------------------------

def scalar_out(x, exact: bool):
    if exact:
        x = ex.q(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


def scalar_in(v, exact: bool, path: str, parent=None):
    if exact:
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise _error("exact entries must be strings 'p/q' or integers", parent, path)
        try:
            return mpq(v) if isinstance(v, int) else mpq(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise _error(f"bad rational {v!r}", parent, path) from exc
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _error("float entries must be numbers", parent, path)
    return float(v)


def array_out(a, exact: bool):
    a = np.asarray(a)
    if a.ndim == 0:
        return scalar_out(a.item(), exact)
    return [array_out(x, exact) for x in a]


def array_in(v, shape: tuple, exact: bool, path: str, parent=None) -> np.ndarray:
    if len(shape) == 0:
        return scalar_in(v, exact, path, parent)
    if not isinstance(v, list) or len(v) != shape[0]:
        raise _error(f"expected a list of length {shape[0]}", v if isinstance(v, list) else parent, path)
    rows = [array_in(x, shape[1:], exact, f"{path}[{k}]", v) for k, x in enumerate(v)]
    out = ex.zeros(shape, exact)
    for k, r in enumerate(rows):
        out[k] = r
    return out


# -- helpers ----------------------------------------------------------------------

_positions: contextvars.ContextVar[dict] = contextvars.ContextVar("lorlie_json_positions", default={})


class _PositionDecoder(json.JSONDecoder):
    """Records where every object and array starts, keyed by ``id`` of the parsed value."""

    def __init__(self, text: str):
        super().__init__()
        self.table = {}

        def located(parse):
            def wrapper(s_and_end, *args):
                start = s_and_end[1] - 1
                value, end = parse(s_and_end, *args)
                line = text.count("\n", 0, start) + 1
                col = start - text.rfind("\n", 0, start)
                self.table[id(value)] = (line, col)
                return value, end

            return wrapper

        self.parse_object = located(json.decoder.JSONObject)
        self.parse_array = located(json.decoder.JSONArray)
        self.scan_once = json.scanner.py_make_scanner(self)


def _loads_json(text: str):
    dec = _PositionDecoder(text)
    try:
        obj = dec.decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    _positions.set(dec.table)
    return obj


def _error(message: str, node, path: str) -> ParseError:
    line, col = _positions.get().get(id(node), (None, None))
    return ParseError(message, line, col, path)


def _flat(v) -> bool:
    if isinstance(v, list):
        return not any(isinstance(x, (dict, list)) for x in v)
    return not isinstance(v, dict)


def _format(obj, indent: int = 0) -> str:
    """Indented JSON with scalar rows and small flat objects kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if all(_flat(v) for v in obj.values()) and len(obj) <= 4:
            return json.dumps(obj, ensure_ascii=False)
        items = [f"{pad}{json.dumps(k)}: {_format(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        items = [pad + _format(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj, ensure_ascii=False)


def _dumps(obj) -> str:
    return _format(obj) + "\n"


def _field(obj: dict, key: str, path: str = ""):
    if not isinstance(obj, dict):
        raise _error("expected an object", obj, path or "$")
    if key not in obj:
        raise _error(f"missing field {key!r}", obj, path or "$")
    return obj[key]


def _mode(obj: dict, path: str = "") -> bool:
    mode = _field(obj, "mode", path)
    if mode not in ("exact", "float"):
        raise _error("mode must be 'exact' or 'float'", obj, f"{path}.mode" if path else "mode")
    return mode == "exact"


# -- algebras ---------------------------------------------------------------------

def algebra_to_obj(p: PseudoEuclideanLieAlgebra) -> dict:
    exact = p.exact
    n = p.dim
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            col = p.alg.c[:, i, j]
            if np.any(col != 0):
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": array_out(col, exact)})
    return {
        "dim": n,
        "mode": "exact" if exact else "float",
        "metric": array_out(p.g, exact),
        "brackets": brackets,
    }


def algebra_from_obj(obj, path: str = "", check: bool = True) -> PseudoEuclideanLieAlgebra:
    """Build an algebra from a parsed object.  Jacobi is enforced when ``check``."""
    pre = f"{path}." if path else ""
    n = _field(obj, "dim", path)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise _error("dim must be a positive integer", obj, f"{pre}dim")
    exact = _mode(obj, path)
    g = array_in(_field(obj, "metric", path), (n, n), exact, f"{pre}metric", obj)
    entries = _field(obj, "brackets", path)
    if not isinstance(entries, list):
        raise _error("brackets must be a list", obj, f"{pre}brackets")
    c = ex.zeros((n, n, n), exact)
    seen = set()
    for k, entry in enumerate(entries):
        where = f"{pre}brackets[{k}]"
        i, j = _field(entry, "i", where), _field(entry, "j", where)
        if any(isinstance(x, bool) or not isinstance(x, int) for x in (i, j)) or not 1 <= i < j <= n:
            raise _error(f"need integers 1 <= i < j <= {n}", entry, where)
        if (i, j) in seen:
            raise _error(f"pair ({i}, {j}) listed twice", entry, where)
        seen.add((i, j))
        col = array_in(_field(entry, "coeffs", where), (n,), exact, f"{where}.coeffs", entry)
        c[:, i - 1, j - 1] = col
        c[:, j - 1, i - 1] = -col
    if not ex.allclose(g, g.T):
        raise _error("metric is not symmetric", obj.get("metric"), f"{pre}metric")
    try:
        metric = MetricTensor(g)
    except ValueError as exc:
        raise _error(str(exc), obj.get("metric"), f"{pre}metric") from exc
    return PseudoEuclideanLieAlgebra(LieAlgebra(c, checked=check), metric)


def dumps_algebra(p: PseudoEuclideanLieAlgebra) -> str:
    return _dumps(algebra_to_obj(p))


def loads_algebra(text: str, check: bool = True) -> PseudoEuclideanLieAlgebra:
    return algebra_from_obj(_loads_json(text), check=check)


def algebra_hash(p: PseudoEuclideanLieAlgebra) -> str:
    """SHA-256 of the canonical text."""
    return hashlib.sha256(dumps_algebra(p).encode()).hexdigest()


# -- double-extension parameters ------------------------------------------------------

def params_to_obj(params) -> dict:
    exact = params.exact
    return {
        "kind": "double_extension_params",
        "mode": "exact" if exact else "float",
        "g0": algebra_to_obj(params.g0),
        "K": array_out(params.K, exact),
        "D": array_out(params.D, exact),
        "mu": scalar_out(params.mu, exact),
        "b": array_out(params.b, exact),
    }


def params_from_obj(obj, path: str = ""):
    from .double_ext import DoubleExtensionParams

    pre = f"{path}." if path else ""
    exact = _mode(obj, path)
    g0 = algebra_from_obj(_field(obj, "g0", path), f"{pre}g0")
    if g0.exact != exact:
        raise _error("g0 mode differs from the file mode", obj["g0"], f"{pre}g0.mode")
    n = g0.dim
    k = array_in(_field(obj, "K", path), (n, n), exact, f"{pre}K", obj)
    d = array_in(_field(obj, "D", path), (n, n), exact, f"{pre}D", obj)
    mu = scalar_in(_field(obj, "mu", path), exact, f"{pre}mu", obj)
    b = array_in(_field(obj, "b", path), (n,), exact, f"{pre}b", obj)
    try:
        return DoubleExtensionParams(g0, k, d, mu, b)
    except ValueError as exc:
        raise _error(str(exc), obj, path or "$") from exc


def dumps_params(params) -> str:
    return _dumps(params_to_obj(params))


def loads_params(text: str):
    return params_from_obj(_loads_json(text))


def is_params_obj(obj) -> bool:
    return isinstance(obj, dict) and obj.get("kind") == "double_extension_params"


# -- reports and certificates -----------------------------------------------------------

def to_jsonable(x, exact: bool = True):
    """Generic conversion of report values (arrays, rationals, subspaces, flags)."""
    from .pseudo import Subspace

    if isinstance(x, dict):
        return {str(k): to_jsonable(v, exact) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v, exact) for v in x]
    if isinstance(x, Subspace):
        return {"dim": x.dim, "basis": array_out(x.basis.T, ex.is_exact(x.basis))}
    if isinstance(x, np.ndarray):
        return array_out(x, ex.is_exact(x))
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, type(mpq())):
        return scalar_out(x, True)
    return str(x)


def dumps_report(report: dict) -> str:
    return _dumps(to_jsonable(report))


def certificate_to_obj(cert) -> dict:
    from .double_ext import build

    return {
        "kind": "certificate",
        "index": cert.index,
        "family": cert.family,
        "params": params_to_obj(cert.params),
        "algebra": algebra_to_obj(build(cert.params)),
        "checks": to_jsonable(cert.checks),
        "flags": list(cert.flags),
    }


def dumps_certificates(certs) -> str:
    return _dumps([certificate_to_obj(c) for c in certs])


# -- files -----------------------------------------------------------------------------

def read_json(path) -> object:
    return _loads_json(Path(path).read_text())


def read_algebra(path, check: bool = True) -> PseudoEuclideanLieAlgebra:
    return loads_algebra(Path(path).read_text(), check=check)


def read_params(path):
    return loads_params(Path(path).read_text())


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
