"""JSON encoding of the domain types.

Complex numbers are ``[re, im]`` pairs and matrices are row-major nested
lists.  Decoders validate every invariant and raise :class:`SchemaError`
with a JSON-pointer location for the first violation found.

Schemas::

    SpectrumTuple        {"ell": int, "n": int, "alpha": [[float, ...], ...]}
    Lagrangian           {"n": int, "M": matrix}
    LagrangianTuple      [Lagrangian, ...]
    Representation       {"ell": int, "n": int, "gammas": [matrix, ...]}
    index report         {"tau": int, "I": int, "n0": int, "njk": [int, ...], "identities": {name: bool}}
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .config import get_tolerances
from .lagrangian import Lagrangian, LagrangianTuple
from .maslov import TripleInvariants
from .numerics import unitarity_defect
from .representation import Representation
from .spectra import SpectrumTuple


class SchemaError(ValueError):
    """Invalid input document; ``path`` is a JSON pointer to the offending value."""

    def __init__(self, path, message):
        self.path = path or "/"
        super().__init__(f"{self.path}: {message}")


def _ptr(path, key):
    return f"{path}/{key}"


# --- encoding ------------------------------------------------------------------


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(A):
    return [[encode_complex(z) for z in row] for row in np.asarray(A)]


def encode(obj):
    """Plain JSON-ready structure for any supported value."""
    if isinstance(obj, SpectrumTuple):
        return {"ell": obj.ell, "n": obj.n, "alpha": obj.alpha.tolist()}
    if isinstance(obj, Lagrangian):
        return {"n": obj.n, "M": encode_matrix(obj.M)}
    if isinstance(obj, LagrangianTuple):
        return [encode(L) for L in obj]
    if isinstance(obj, Representation):
        return {"ell": obj.ell, "n": obj.n, "gammas": [encode_matrix(g) for g in obj.gammas]}
    if isinstance(obj, TripleInvariants):
        return obj.as_dict()
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else float(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return encode(obj.tolist())
        return obj.tolist()
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj):
    """Deterministic compact JSON text (newline terminated)."""
    return json.dumps(encode(obj), separators=(",", ":"), allow_nan=False) + "\n"


# --- decoding ------------------------------------------------------------------


def _require(cond, path, message):
    if not cond:
        raise SchemaError(path, message)


def _number(x, path):
    _require(isinstance(x, (int, float)) and not isinstance(x, bool), path, "expected a number")
    _require(np.isfinite(x), path, "number is not finite")
    return float(x)


def _int(x, path):
    _require(isinstance(x, int) and not isinstance(x, bool), path, "expected an integer")
    return x


def _object(doc, path, keys):
    _require(isinstance(doc, dict), path, "expected an object")
    for k in keys:
        _require(k in doc, _ptr(path, k), "missing required field")
    return doc


def decode_complex(x, path=""):
    """``[re, im]`` pair; a bare number is read as a real value."""
    if isinstance(x, list):
        _require(len(x) == 2, path, "complex number must be an [re, im] pair")
        return complex(_number(x[0], _ptr(path, 0)), _number(x[1], _ptr(path, 1)))
    return complex(_number(x, path))


def decode_matrix(doc, path="", n=None):
    _require(isinstance(doc, list) and len(doc) > 0, path, "expected a non-empty list of rows")
    size = len(doc) if n is None else n
    _require(len(doc) == size, path, f"expected {size} rows, got {len(doc)}")
    out = np.empty((size, size), dtype=complex)
    for i, row in enumerate(doc):
        rp = _ptr(path, i)
        _require(isinstance(row, list), rp, "expected a row list")
        _require(len(row) == size, rp, f"expected {size} entries, got {len(row)}")
        for j, x in enumerate(row):
            out[i, j] = decode_complex(x, _ptr(rp, j))
    return out


def decode_unitary(doc, path="", n=None):
    A = decode_matrix(doc, path, n)
    defect = unitarity_defect(A)
    tol = get_tolerances().unitarity
    _require(defect <= tol, path, f"unitarity violated: |A*A - I|_F = {defect:.3e} > {tol:.1e}")
    return A


def decode_spectrum(doc, path=""):
    _object(doc, path, ("ell", "n", "alpha"))
    ell = _int(doc["ell"], _ptr(path, "ell"))
    n = _int(doc["n"], _ptr(path, "n"))
    _require(ell >= 1, _ptr(path, "ell"), "ell must be positive")
    _require(n >= 1, _ptr(path, "n"), "n must be positive")
    ap = _ptr(path, "alpha")
    rows = doc["alpha"]
    _require(isinstance(rows, list) and len(rows) == ell, ap, f"expected {ell} rows")
    alpha = np.empty((ell, n))
    for s, row in enumerate(rows):
        rp = _ptr(ap, s)
        _require(isinstance(row, list) and len(row) == n, rp, f"expected {n} angles")
        for j, x in enumerate(row):
            v = _number(x, _ptr(rp, j))
            _require(0.0 <= v < 1.0, _ptr(rp, j), "angle outside [0, 1)")
            alpha[s, j] = v
        _require(bool(np.all(np.diff(alpha[s]) >= 0.0)), rp, "angles must be ascending")
    return SpectrumTuple(alpha)


def decode_lagrangian(doc, path=""):
    _object(doc, path, ("n", "M"))
    n = _int(doc["n"], _ptr(path, "n"))
    _require(n >= 1, _ptr(path, "n"), "n must be positive")
    mp = _ptr(path, "M")
    M = decode_unitary(doc["M"], mp, n)
    asym = float(np.linalg.norm(M - M.T))
    tol = get_tolerances().symmetry
    _require(asym <= tol, mp, f"symmetry violated: |M - M^T|_F = {asym:.3e} > {tol:.1e}")
    return Lagrangian(M)


def decode_lagrangian_tuple(doc, path=""):
    _require(isinstance(doc, list) and len(doc) >= 2, path, "expected a list of at least two Lagrangians")
    items = tuple(decode_lagrangian(d, _ptr(path, s)) for s, d in enumerate(doc))
    for s, L in enumerate(items):
        _require(L.n == items[0].n, _ptr(path, s), "Lagrangians have different dimensions")
    return LagrangianTuple(items)


def decode_representation(doc, path=""):
    _object(doc, path, ("ell", "n", "gammas"))
    ell = _int(doc["ell"], _ptr(path, "ell"))
    n = _int(doc["n"], _ptr(path, "n"))
    gp = _ptr(path, "gammas")
    _require(isinstance(doc["gammas"], list) and len(doc["gammas"]) == ell, gp, f"expected {ell} matrices")
    gammas = np.array([decode_unitary(g, _ptr(gp, s), n) for s, g in enumerate(doc["gammas"])])
    try:
        return Representation(gammas)
    except ValueError as exc:
        raise SchemaError(gp, str(exc)) from None


def decode_report(doc, path=""):
    _object(doc, path, ("tau", "I", "n0", "njk", "identities"))
    out = {k: _int(doc[k], _ptr(path, k)) for k in ("tau", "I", "n0")}
    njk = doc["njk"]
    _require(isinstance(njk, list), _ptr(path, "njk"), "expected a list")
    out["njk"] = [_int(x, _ptr(_ptr(path, "njk"), i)) for i, x in enumerate(njk)]
    ids = doc["identities"]
    _require(isinstance(ids, dict), _ptr(path, "identities"), "expected an object")
    for k, v in ids.items():
        _require(isinstance(v, bool), _ptr(_ptr(path, "identities"), k), "expected a boolean")
    out["identities"] = dict(ids)
    return out


def loads(text):
    """Parse JSON text, turning syntax errors into :class:`SchemaError`."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
