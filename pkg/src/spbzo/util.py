"""Small shared helpers: input coercion and the norm-power convention.

Every formula in this package raises a Euclidean norm to an integer power
``m >= 0``.  For ``m = 0`` the value is defined to be 1 even at the origin
(the 0**0 = 1 convention), so that Lipschitz-case certificates collapse to
the classical constants.  ``norm_power`` centralizes that branch.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

__all__ = [
    "as_vector",
    "norm_power",
    "ceil_half",
    "uniform_ball",
    "jsonable",
    "canonical_json",
    "short_hash",
]


def as_vector(x, dim=None, name="x"):
    """Coerce ``x`` to a 1-D float64 numpy array, optionally checking length.

    Parameters
    ----------
    x : array_like or scalar
        Point to coerce.  Scalars become length-1 vectors.
    dim : int, optional
        Required length; a mismatch raises ``ValueError``.
    name : str
        Label used in error messages.

    Returns
    -------
    numpy.ndarray
        1-D float64 array.
    """
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"{name} has length {v.shape[0]}, expected {dim}")
    return v


def norm_power(r, m):
    """Return ``r**m`` for a nonnegative norm ``r`` with the 0**0 = 1 convention.

    Parameters
    ----------
    r : float or numpy.ndarray
        Norm value(s), assumed >= 0.
    m : int
        Nonnegative integer exponent.

    Returns
    -------
    float or numpy.ndarray
        ``r**m``; identically 1 when ``m == 0`` (even where ``r == 0``).
    """
    if m < 0 or int(m) != m:
        raise ValueError(f"exponent m must be a nonnegative integer, got {m}")
    if m == 0:
        if np.ndim(r) == 0:
            return 1.0
        return np.ones_like(np.asarray(r, dtype=float))
    return np.asarray(r, dtype=float) ** m if np.ndim(r) else float(r) ** m


def ceil_half(m):
    """Return ``ceil(m / 2)`` for a nonnegative integer ``m``."""
    if m < 0 or int(m) != m:
        raise ValueError(f"m must be a nonnegative integer, got {m}")
    return (int(m) + 1) // 2


def uniform_ball(rng, n, dim, radius=1.0, center=None):
    """Draw ``n`` points uniformly from a Euclidean ball.

    Uses the standard direction-times-radius construction: a normalized
    Gaussian direction scaled by ``radius * U**(1/dim)``.

    Parameters
    ----------
    rng : numpy.random.Generator
        Source of randomness.
    n : int
        Number of points.
    dim : int
        Ambient dimension.
    radius : float
        Ball radius.
    center : array_like, optional
        Ball center (default: origin).

    Returns
    -------
    numpy.ndarray
        Array of shape ``(n, dim)``.
    """
    g = rng.standard_normal((n, dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    r = radius * rng.random((n, 1)) ** (1.0 / dim)
    pts = g / norms * r
    if center is not None:
        pts = pts + as_vector(center, dim, "center")
    return pts


def jsonable(obj):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def canonical_json(obj):
    """Deterministic JSON encoding: sorted keys, compact separators.

    Floats serialize via Python's shortest round-trip repr, so equal values
    always produce identical bytes — the basis for config hashing and
    byte-identical experiment outputs.
    """
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def short_hash(text):
    """First 16 hex chars of the SHA-256 of ``text``."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
