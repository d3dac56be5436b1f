"""Negative real branch of the Lambert W function, with an out-of-domain rule.

``w_minus1(t)`` solves ``w * exp(w) = t`` for the branch with ``w <= -1``,
defined for ``t in [-1/e, 0)``.  Downstream tail-radius formulas evaluate
``W(-h)`` where ``h`` may exceed ``1/e`` for loose tolerance requests; for
those arguments the convention here is to return 0, which the callers treat
as "no radius constraint".  Arguments ``t >= 0`` are rejected.

The solver seeds Newton/Halley iterations from standard series/asymptotic
approximations and always verifies the residual ``|w exp(w) - t|``, so the
seed choice is not correctness-critical:

* near the branch point (``t <= -1/4``): the expansion in
  ``p = -sqrt(2 (1 + e t))``, polished by Halley steps on ``w exp(w) - t``;
* elsewhere: Newton on the log form ``w + log(-w) = log(-t)``, whose
  derivative ``1 + 1/w`` lies in (0, 1) on the branch, making the iteration
  well-conditioned even for very negative ``w`` (where ``w exp(w)``
  underflows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["WEval", "w_minus1", "w_minus1_from_log", "BRANCH_POINT"]

#: Leftmost point of the real domain, -1/e.
BRANCH_POINT = -1.0 / math.e

_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class WEval:
    """Result of a branch evaluation.

    Fields
    ------
    input : float
        The argument ``t``.
    value : float
        ``w`` with ``w * exp(w) = t`` (or 0.0 under the out-of-domain rule).
    residual : float
        ``|value * exp(value) - t|``.
    converged : bool
        Whether the residual tolerance was met (always true for the
        out-of-domain rule, by definition).
    iterations : int
        Number of polishing iterations performed.
    """

    input: float
    value: float
    residual: float
    converged: bool
    iterations: int = 0


def _residual(w, t):
    return abs(w * math.exp(w) - t)


def _halley_polish(w, t, max_iter=60):
    """Halley iteration on ``g(w) = w exp(w) - t`` starting from ``w``."""
    for i in range(1, max_iter + 1):
        ew = math.exp(w)
        g = w * ew - t
        if abs(g) <= _RESIDUAL_TOL * 0.01:
            return w, i
        gp = ew * (1.0 + w)
        denom = gp - g * (2.0 + w) / (2.0 * (1.0 + w)) if w != -1.0 else gp
        if denom == 0.0 or not math.isfinite(denom):
            break
        step = g / denom
        w_new = w - step
        if w_new > -1.0:
            w_new = -1.0
        if w_new == w:
            return w, i
        w = w_new
    return w, max_iter


def _log_newton(log_neg_t, max_iter=100):
    """Solve ``w + log(-w) = log_neg_t`` by Newton; requires log_neg_t <= -1."""
    ell = log_neg_t
    # Asymptotic seed w ~ L - log(-L); at L = -1 it degenerates, so floor it.
    w = ell - math.log(-ell) if ell < -1.0 else -1.0
    if w > -1.0:
        w = -1.0
    for i in range(1, max_iter + 1):
        phi = w + math.log(-w) - ell
        dphi = 1.0 + 1.0 / w
        if dphi <= 0.0:
            dphi = 1e-6
        step = phi / dphi
        w_new = w - step
        if w_new > -1.0:
            w_new = 0.5 * (w - 1.0)  # bisect toward -1 instead of overshooting
        if abs(w_new - w) <= 1e-16 * (1.0 + abs(w)):
            return w_new, i
        w = w_new
    return w, max_iter


def w_minus1(t):
    """Evaluate the branch with ``w <= -1`` at ``t``, with the convention below.

    Parameters
    ----------
    t : float
        Strictly negative argument.  For ``t in [-1/e, 0)`` the genuine
        branch value is returned; for ``t < -1/e`` (outside the real domain)
        the result is ``WEval(value=0.0, converged=True)``.

    Returns
    -------
    WEval

    Raises
    ------
    ValueError
        If ``t >= 0``.
    """
    t = float(t)
    if not t < 0.0:
        raise ValueError(f"w_minus1 requires t < 0, got {t}")
    if t < BRANCH_POINT:
        return WEval(input=t, value=0.0, residual=abs(t), converged=True, iterations=0)

    q = 1.0 + math.e * t  # nonnegative up to rounding on [-1/e, 0)
    if q <= 0.0:
        # Branch point (up to floating-point rounding of -1/e).
        return WEval(input=t, value=-1.0, residual=_residual(-1.0, t), converged=True, iterations=0)

    if t <= -0.25:
        p = -math.sqrt(2.0 * q)
        w0 = -1.0 + p - p * p / 3.0 + (11.0 / 72.0) * p**3
        w, iters = _halley_polish(min(w0, -1.0), t)
    else:
        w, iters = _log_newton(math.log(-t))

    res = _residual(w, t)
    return WEval(
        input=t,
        value=w,
        residual=res,
        converged=res <= _RESIDUAL_TOL,
        iterations=iters,
    )


def w_minus1_from_log(log_neg_t):
    """Evaluate the branch given ``log(-t)`` directly (underflow-safe).

    Useful when ``t = -exp(log_neg_t)`` would underflow to zero.  The
    out-of-domain convention applies: ``log_neg_t > -1`` means ``t < -1/e``
    and returns 0.0.

    Parameters
    ----------
    log_neg_t : float
        ``log(-t)`` for the desired negative argument ``t``.

    Returns
    -------
    float
        The branch value ``w`` (or 0.0 under the convention).
    """
    ell = float(log_neg_t)
    if ell > -1.0:
        return 0.0
    if ell == -1.0:
        return -1.0
    if ell >= math.log(0.25):
        return w_minus1(-math.exp(ell)).value
    w, _ = _log_newton(ell)
    return w
