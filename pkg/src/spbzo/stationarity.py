"""Subdifferential sets, distances, and the smoothed-gradient inclusion check.

For 1-D piecewise-C1 members the generalized gradient at ``x`` is the
interval spanned by the one-sided derivative limits, and the delta-reach
set is the interval spanned by every derivative value within distance
``delta``::

    reach(x, delta) = conv { f'(y) : |y - x| <= delta, f differentiable at y }

Both are computed *exactly* here from the member's derivative pieces.  In
higher dimension the delta-reach set is approximated from sampled gradients;
the minimum-norm point of the sampled convex hull is an *upper bound* on the
true distance (the sampled hull is contained in the true set), and results
are labeled accordingly.

The headline check, :func:`check_goldstein_inclusion`, certifies that the
smoothed gradient with radius chosen by ``constants.goldstein_sigma_rule``
lies within ``(1 + norm(x)**m) * epsilon`` of the delta-reach set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import UnsupportedFunctionError
from .constants import goldstein_sigma_rule
from .seeding import make_rng
from .smoothing import gs_grad_oracle
from .util import as_vector, norm_power, uniform_ball

__all__ = [
    "GoldsteinInterval",
    "goldstein_interval_1d",
    "clarke_interval_1d",
    "goldstein_distance",
    "min_norm_point",
    "check_goldstein_inclusion",
    "gradient_consistency_probe",
]

#: Grid density used when scanning a derivative piece for its range.  The
#: catalog's pieces are affine, where endpoints alone would suffice; the
#: interior points keep the scan correct for any monotone-free piece.
_SCAN_POINTS = 65


@dataclass(frozen=True)
class GoldsteinInterval:
    """Exact 1-D delta-reach subgradient interval ``[lo, hi]`` at ``x``."""

    lo: float
    hi: float
    x: float
    delta: float

    def distance(self, g=0.0):
        """Distance from the scalar ``g`` to the interval."""
        return max(self.lo - g, g - self.hi, 0.0)

    def contains(self, g, tol=0.0):
        return self.lo - tol <= g <= self.hi + tol


def _piece_range(piece, lo, hi):
    """Min and max of a derivative piece over the closed overlap [lo, hi]."""
    ys = np.linspace(lo, hi, _SCAN_POINTS)
    vals = piece.deriv(ys)
    return float(np.min(vals)), float(np.max(vals))


def goldstein_interval_1d(fn, x, delta):
    """Exact delta-reach subgradient interval for a 1-D piecewise member.

    Parameters
    ----------
    fn : SpbFunction
        Member with ``dim == 1`` and ``pieces_1d``.
    x : float or length-1 vector
    delta : float
        Reach, >= 0.  ``delta = 0`` returns the generalized gradient at x.

    Returns
    -------
    GoldsteinInterval
    """
    if fn.dim != 1 or fn.pieces_1d is None:
        raise UnsupportedFunctionError(f"{fn.id}: exact intervals need dim == 1 with pieces_1d")
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    t = float(as_vector(x, 1, "x")[0])
    win_lo, win_hi = t - delta, t + delta
    lo, hi = math.inf, -math.inf
    for piece in fn.pieces_1d:
        a, b = max(piece.lo, win_lo), min(piece.hi, win_hi)
        if a > b:
            continue
        piece_lo, piece_hi = _piece_range(piece, a, b)
        lo, hi = min(lo, piece_lo), max(hi, piece_hi)
    return GoldsteinInterval(lo=lo, hi=hi, x=t, delta=delta)


def clarke_interval_1d(fn, x):
    """Generalized gradient at ``x`` (interval of one-sided derivative limits)."""
    return goldstein_interval_1d(fn, x, 0.0)


def min_norm_point(points, tol=1e-10, max_iter=1000):
    """Minimum-norm point of the convex hull of the given points.

    Wolfe's algorithm: grow an affinely independent active set toward the
    face containing the optimum, solving the equality-constrained
    least-norm problem on each minor cycle via the KKT system.

    Parameters
    ----------
    points : array_like, shape (n, d)
    tol : float
        Optimality tolerance on the support-function gap.
    max_iter : int

    Returns
    -------
    numpy.ndarray
        The minimizing point (length d).
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    n = P.shape[0]
    if n == 0:
        raise ValueError("min_norm_point needs at least one point")
    active = [int(np.argmin(np.einsum("ij,ij->i", P, P)))]
    lam = np.array([1.0])
    for _ in range(max_iter):
        x = lam @ P[active]
        xx = float(x @ x)
        scores = P @ x
        j = int(np.argmin(scores))
        if scores[j] >= xx - tol * (1.0 + xx):
            return x
        if j not in active:
            active.append(j)
            lam = np.append(lam, 0.0)
        # Minor cycle: pull the affine minimizer back into the simplex.
        while True:
            S = P[active]
            k = S.shape[0]
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = S @ S.T
            kkt[:k, k] = 1.0
            kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            alpha = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(alpha > 1e-12):
                lam = alpha
                break
            shrink = np.where(alpha <= 1e-12, lam / np.maximum(lam - alpha, 1e-300), np.inf)
            theta = float(np.min(shrink))
            lam = (1.0 - theta) * lam + theta * alpha
            keep = lam > 1e-12
            if not np.any(keep):
                keep[int(np.argmax(alpha))] = True
            active = [a for a, k_ in zip(active, keep) if k_]
            lam = lam[keep]
            lam = lam / lam.sum()
    return lam @ P[active]


def goldstein_distance(fn, x, delta, budget=64, seed=0):
    """Distance from 0 to the delta-reach subgradient set at ``x``.

    Exact for 1-D piecewise members; otherwise an upper bound from the
    minimum-norm point of gradients sampled in the delta-ball (requires
    ``analytic_grad``).

    Returns
    -------
    dict
        ``{"value": float, "exactness": "exact" | "upper_bound"}``.
    """
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if fn.dim == 1 and fn.pieces_1d is not None:
        interval = goldstein_interval_1d(fn, x, delta)
        return {"value": interval.distance(0.0), "exactness": "exact"}
    if fn.analytic_grad is None:
        raise UnsupportedFunctionError(
            f"{fn.id}: sampled delta-reach distance needs analytic_grad"
        )
    xv = as_vector(x, fn.dim, "x")
    rng = make_rng(seed)
    pts = uniform_ball(rng, budget - 1, fn.dim, radius=delta, center=xv)
    pts = np.vstack([xv, pts])
    grads = np.array([fn.analytic_grad(row) for row in pts])
    value = float(np.linalg.norm(min_norm_point(grads)))
    return {"value": value, "exactness": "upper_bound"}


def check_goldstein_inclusion(fn, x, epsilon, delta, sigma=None, budget=64, seed=0):
    """Certify that the smoothed gradient is an approximate reach subgradient.

    Uses ``sigma = sigma_max`` from the selection rule unless an explicit
    ``sigma`` (which must not exceed ``sigma_max``) is given, computes the
    deterministic smoothed gradient, and checks its distance to the
    delta-reach set against the allowance ``(1 + norm(x)**m) * epsilon``.

    Returns
    -------
    dict
        ``margin`` (allowance minus distance; nonnegative means the
        inclusion holds), ``satisfied`` (margin >= -1e-8), ``distance``,
        ``allowance``, ``sigma``, ``sigma_max``, ``exactness``.
    """
    cert = fn.certificate
    rule = goldstein_sigma_rule(cert, fn.dim, epsilon, delta)
    if sigma is None:
        sigma = rule.sigma_max
    g = gs_grad_oracle(fn, x, sigma)
    if fn.dim == 1 and fn.pieces_1d is not None:
        interval = goldstein_interval_1d(fn, x, delta)
        dist = interval.distance(float(g[0]))
        exactness = "exact"
    else:
        if fn.analytic_grad is None:
            raise UnsupportedFunctionError(
                f"{fn.id}: inclusion check needs pieces_1d or analytic_grad"
            )
        xv = as_vector(x, fn.dim, "x")
        rng = make_rng(seed)
        pts = uniform_ball(rng, budget - 1, fn.dim, radius=delta, center=xv)
        pts = np.vstack([xv, pts])
        grads = np.array([fn.analytic_grad(row) for row in pts])
        dist = float(np.linalg.norm(min_norm_point(grads - g)))
        exactness = "upper_bound"
    nx = float(np.linalg.norm(as_vector(x, fn.dim, "x")))
    allowance = (1.0 + norm_power(nx, cert.m)) * epsilon
    margin = allowance - dist
    return {
        "margin": margin,
        "satisfied": margin >= -1e-8,
        "distance": dist,
        "allowance": allowance,
        "sigma": float(sigma),
        "sigma_max": rule.sigma_max,
        "sigma_ok": 0.0 < sigma <= rule.sigma_max * (1.0 + 1e-12),
        "exactness": exactness,
    }


def gradient_consistency_probe(fn, x, sigmas):
    """Distances from smoothed gradients to the generalized gradient at ``x``.

    As the smoothing radius decreases, the smoothed gradient's distance to
    the generalized gradient should tend to zero; this returns the distance
    series for qualitative verification.  1-D members use the exact
    interval; other members compare against ``analytic_grad(x)`` (valid at
    differentiable points).

    Returns
    -------
    dict
        ``{"sigmas": list, "distances": list}``.
    """
    sigmas = [float(s) for s in sigmas]
    if any(s <= 0 for s in sigmas):
        raise ValueError("all sigmas must be positive")
    distances = []
    if fn.dim == 1 and fn.pieces_1d is not None:
        interval = clarke_interval_1d(fn, x)
        for s in sigmas:
            g = float(gs_grad_oracle(fn, x, s)[0])
            distances.append(interval.distance(g))
    else:
        if fn.analytic_grad is None:
            raise UnsupportedFunctionError(
                f"{fn.id}: consistency probe needs pieces_1d or analytic_grad"
            )
        ref = np.asarray(fn.analytic_grad(x), dtype=float)
        for s in sigmas:
            distances.append(float(np.linalg.norm(gs_grad_oracle(fn, x, s) - ref)))
    return {"sigmas": sigmas, "distances": distances}
