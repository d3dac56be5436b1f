"""Test-function catalog with gradient-growth certificates.

Each member bundles a zeroth-order oracle ``f`` with a *certificate*
``(r1, r2, m)`` asserting polynomial growth of its generalized gradients::

    norm(g) <= r1 * norm(x)**m + r2     for every generalized gradient g at x,

with ``r2 > 0``, ``r1 >= 0``, integer ``m >= 0``, and ``r1 = 0`` exactly when
``m = 0`` (the Lipschitz case).  The convention ``0**0 = 1`` applies, so an
``m = 0`` certificate bounds the gradient norm by ``r2`` everywhere.

Certificates are *stored data*, not inferred: there is no algorithm that
recovers a tight ``(r1, r2, m)`` from an oracle, so each entry ships a
hand-derived certificate (see ``_netdata`` for the two network members) that
is re-validated empirically by :func:`validate_certificate`.

Members also carry optional analytic reference data used by the verification
harness: exact gradients, closed forms for the Gaussian-smoothed function and
its gradient, derivative pieces for 1-D piecewise-smooth members, and
level-set geometry (minimizer, level radius, quadratic-growth modulus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import erf

from . import _netdata
from .util import as_vector, norm_power, uniform_ball

__all__ = [
    "UnsupportedFunctionError",
    "SpbCertificate",
    "Piece1D",
    "SpbFunction",
    "evaluate",
    "clarke_norm_bound",
    "lipschitz_envelope",
    "validate_certificate",
    "function_ids",
    "get_function",
    "make_quad",
    "make_quart",
    "PW1D_KINK_INNER",
    "PW1D_KINK_OUTER",
]


class UnsupportedFunctionError(ValueError):
    """Raised when an operation needs analytic data a member does not carry."""


@dataclass(frozen=True)
class SpbCertificate:
    """Polynomial gradient-growth certificate ``norm(g) <= r1*norm(x)**m + r2``.

    Parameters
    ----------
    r1 : float
        Slope coefficient on ``norm(x)**m``; zero exactly when ``m == 0``.
    r2 : float
        Constant term; strictly positive.
    m : int
        Growth degree; nonnegative integer.
    """

    r1: float
    r2: float
    m: int

    def __post_init__(self):
        if not self.r2 > 0:
            raise ValueError(f"r2 must be positive, got {self.r2}")
        if self.r1 < 0:
            raise ValueError(f"r1 must be nonnegative, got {self.r1}")
        if self.m < 0 or int(self.m) != self.m:
            raise ValueError(f"m must be a nonnegative integer, got {self.m}")
        if (self.r1 == 0) != (self.m == 0):
            raise ValueError(
                f"r1 = 0 exactly when m = 0; got r1={self.r1}, m={self.m}"
            )
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class Piece1D:
    """One open interval of a piecewise-C1 member of the 1-D catalog.

    ``deriv`` is the derivative on the open interval ``(lo, hi)``;
    it must accept numpy arrays.  Consecutive pieces share endpoints, which
    are the (finitely many) possible kinks.
    """

    lo: float
    hi: float
    deriv: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SpbFunction:
    """A catalog member: oracle, certificate, and analytic reference data.

    Fields beyond ``(id, dim, eval, eval_batch, certificate)`` are optional
    analytic references; ``None`` means "not available for this member" and
    operations that need them raise :class:`UnsupportedFunctionError`.

    ``level_radius(c)`` returns ``sup { norm(x) : f(x) <= inf_value + c }``
    for convex level-bounded members.  ``growth_mu`` is a modulus with
    ``f(x) - inf_value >= (growth_mu / 2) * dist(x, argmin)**2`` on the region
    described by ``growth_region``.
    """

    id: str
    dim: int
    eval: Callable[[np.ndarray], float]
    eval_batch: Callable[[np.ndarray], np.ndarray]
    certificate: SpbCertificate
    analytic_grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    analytic_gs_value: Optional[Callable[[np.ndarray, float], float]] = None
    analytic_gs_grad: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    pieces_1d: Optional[tuple] = None
    convex: bool = False
    inf_value: Optional[float] = None
    minimizer: Optional[np.ndarray] = None
    level_radius: Optional[Callable[[float], float]] = None
    growth_mu: Optional[float] = None
    growth_region: Optional[str] = None
    sup_minimizer_norm: Optional[float] = None


def evaluate(fn, x):
    """Evaluate the member's zeroth-order oracle at one point.

    Parameters
    ----------
    fn : SpbFunction
    x : array_like
        Point of length ``fn.dim``.

    Returns
    -------
    float
    """
    v = as_vector(x, fn.dim, "x")
    return float(fn.eval_batch(v[None, :])[0])


def clarke_norm_bound(cert, x):
    """Certified gradient-norm bound ``r1 * norm(x)**m + r2`` at ``x``.

    Uses the ``0**0 = 1`` convention, so for ``m = 0`` the bound is ``r2``
    at every point including the origin.
    """
    r = float(np.linalg.norm(as_vector(x)))
    return cert.r1 * norm_power(r, cert.m) + cert.r2


def lipschitz_envelope(cert, x, y):
    """Two-point Lipschitz bound implied by the certificate.

    Returns ``(2**(m-1) r1 norm(x)**m + 2**(m-1) r1 norm(y-x)**m + r2)
    * norm(x-y)``, an upper bound on ``|f(x) - f(y)|`` for any function
    satisfying the certificate.  The formula is asymmetric in ``(x, y)`` but
    the bound holds with the arguments in either order.
    """
    xv = as_vector(x, name="x")
    yv = as_vector(y, dim=xv.shape[0], name="y")
    step = float(np.linalg.norm(yv - xv))
    scale = 2.0 ** (cert.m - 1) * cert.r1
    coeff = (
        scale * norm_power(float(np.linalg.norm(xv)), cert.m)
        + scale * norm_power(step, cert.m)
        + cert.r2
    )
    return coeff * step


def validate_certificate(fn, samples=10_000, radius=5.0, seed=0):
    """Empirically check the certificate against the analytic gradient.

    Samples points uniformly in the ball of the given radius (such points
    avoid the measure-zero nondifferentiable set almost surely) and checks
    ``norm(grad f(x)) <= clarke_norm_bound(cert, x)`` at each.

    Parameters
    ----------
    fn : SpbFunction
        Member with ``analytic_grad``.
    samples : int
    radius : float
    seed : int

    Returns
    -------
    dict
        ``{"violations": int, "max_ratio": float, "samples": int}`` where
        ``max_ratio`` is the largest observed ``norm(grad) / bound``.
    """
    if fn.analytic_grad is None:
        raise UnsupportedFunctionError(
            f"{fn.id}: certificate validation needs analytic_grad"
        )
    if samples < 1 or radius <= 0:
        raise ValueError("samples >= 1 and radius > 0 required")
    from .seeding import make_rng

    rng = make_rng(seed)
    pts = uniform_ball(rng, samples, fn.dim, radius=radius)
    violations = 0
    max_ratio = 0.0
    for row in pts:
        g = np.linalg.norm(fn.analytic_grad(row))
        bound = clarke_norm_bound(fn.certificate, row)
        ratio = g / bound
        max_ratio = max(max_ratio, ratio)
        if ratio > 1.0 + 1e-12:
            violations += 1
    return {"violations": violations, "max_ratio": max_ratio, "samples": samples}


# --------------------------------------------------------------------------
# Members
# --------------------------------------------------------------------------

def _norm_sq_rows(X):
    X = np.asarray(X, dtype=float)
    return np.einsum("ij,ij->i", X, X)


def _with_single(batch_fn, dim):
    """Build the scalar oracle from the vectorized one."""

    def eval_one(x):
        return float(batch_fn(as_vector(x, dim, "x")[None, :])[0])

    return eval_one


def make_quad(dim=2):
    """Half squared norm, ``f(x) = norm(x)**2 / 2``, in any dimension.

    Smoothing adds a constant: ``f_sigma(x) = f(x) + sigma**2 * d / 2`` with
    gradient ``x`` (exact for every ``sigma``).
    """

    def batch(X):
        return 0.5 * _norm_sq_rows(X)

    def gs_value(x, sigma):
        xv = as_vector(x, dim, "x")
        return 0.5 * float(xv @ xv) + 0.5 * sigma**2 * dim

    def gs_grad(x, sigma):
        return as_vector(x, dim, "x").copy()

    return SpbFunction(
        id="quad" if dim == 2 else f"quad{dim}",
        dim=dim,
        eval=_with_single(batch, dim),
        eval_batch=batch,
        certificate=SpbCertificate(r1=1.0, r2=0.1, m=1),
        analytic_grad=lambda x: as_vector(x, dim, "x").copy(),
        analytic_gs_value=gs_value,
        analytic_gs_grad=gs_grad,
        convex=True,
        inf_value=0.0,
        minimizer=np.zeros(dim),
        # f(x) <= c  <=>  norm(x) <= sqrt(2 c)
        level_radius=lambda c: math.sqrt(2.0 * max(c, 0.0)),
        growth_mu=1.0,
        growth_region="all of R^d",
        sup_minimizer_norm=0.0,
    )


def make_quart(dim=2):
    """Fourth power of the norm, ``f(x) = norm(x)**4``.

    Gaussian smoothing has the closed form (q = norm(x)**2, d = dim)::

        f_sigma(x)     = (q + sigma^2 d)^2 + 4 sigma^2 q + 2 sigma^4 d
        grad f_sigma(x) = 4 x (q + (d + 2) sigma^2)

    obtained from the Gaussian moments E<x,u>^2 = q, E norm(u)^2 = d,
    E norm(u)^4 = d (d + 2).
    """

    def batch(X):
        return _norm_sq_rows(X) ** 2

    def gs_value(x, sigma):
        xv = as_vector(x, dim, "x")
        q = float(xv @ xv)
        return (q + sigma**2 * dim) ** 2 + 4.0 * sigma**2 * q + 2.0 * sigma**4 * dim

    def gs_grad(x, sigma):
        xv = as_vector(x, dim, "x")
        return 4.0 * xv * (float(xv @ xv) + (dim + 2.0) * sigma**2)

    def grad(x):
        xv = as_vector(x, dim, "x")
        return 4.0 * float(xv @ xv) * xv

    return SpbFunction(
        id="quart" if dim == 2 else f"quart{dim}",
        dim=dim,
        eval=_with_single(batch, dim),
        eval_batch=batch,
        certificate=SpbCertificate(r1=4.0, r2=0.1, m=3),
        analytic_grad=grad,
        analytic_gs_value=gs_value,
        analytic_gs_grad=gs_grad,
        convex=True,
        inf_value=0.0,
        minimizer=np.zeros(dim),
        # f(x) <= c  <=>  norm(x) <= c**(1/4)
        level_radius=lambda c: max(c, 0.0) ** 0.25,
        growth_mu=2.0,
        growth_region="norm(x) >= 1",
        sup_minimizer_norm=0.0,
    )


_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def _make_abs1d():
    """Absolute value on the line; the canonical Lipschitz kink.

    Smoothing has the classical closed form::

        f_sigma(x)      = x erf(x / (sigma sqrt(2)))
                          + sigma sqrt(2/pi) exp(-x^2 / (2 sigma^2))
        grad f_sigma(x) = erf(x / (sigma sqrt(2)))
    """

    def batch(X):
        return np.abs(np.asarray(X, dtype=float)[:, 0])

    def gs_value(x, sigma):
        t = float(as_vector(x, 1, "x")[0])
        return t * float(erf(t / (sigma * math.sqrt(2.0)))) + sigma * _SQRT_2_OVER_PI * math.exp(
            -(t * t) / (2.0 * sigma * sigma)
        )

    def gs_grad(x, sigma):
        t = float(as_vector(x, 1, "x")[0])
        return np.array([float(erf(t / (sigma * math.sqrt(2.0))))])

    pieces = (
        Piece1D(-math.inf, 0.0, lambda y: np.full_like(np.asarray(y, dtype=float), -1.0)),
        Piece1D(0.0, math.inf, lambda y: np.full_like(np.asarray(y, dtype=float), 1.0)),
    )

    return SpbFunction(
        id="abs1d",
        dim=1,
        eval=_with_single(batch, 1),
        eval_batch=batch,
        certificate=SpbCertificate(r1=0.0, r2=1.0, m=0),
        analytic_grad=lambda x: np.sign(as_vector(x, 1, "x")),
        analytic_gs_value=gs_value,
        analytic_gs_grad=gs_grad,
        pieces_1d=pieces,
        convex=True,
        inf_value=0.0,
        minimizer=np.zeros(1),
        # f(x) <= c  <=>  |x| <= c
        level_radius=lambda c: max(c, 0.0),
        growth_mu=2.0,
        growth_region="|x| <= 1",
        sup_minimizer_norm=0.0,
    )


# Kinks of max(x^2, |x| - 1/8): solve x^2 = x - 1/8 on x > 0.
PW1D_KINK_INNER = (1.0 - math.sqrt(0.5)) / 2.0
PW1D_KINK_OUTER = (1.0 + math.sqrt(0.5)) / 2.0


def _make_pw1d():
    """Piecewise member ``f(x) = max(x^2, |x| - 1/8)`` with four kinks.

    The parabola wins on ``|x| <= a`` and ``|x| >= b`` with
    ``a = (1 - sqrt(1/2))/2`` and ``b = (1 + sqrt(1/2))/2``; the slope jumps
    at ``+-a`` and ``+-b``, giving genuine nonsmooth points away from the
    minimizer (useful for stationarity-set tests).
    """

    a, b = PW1D_KINK_INNER, PW1D_KINK_OUTER

    def batch(X):
        t = np.asarray(X, dtype=float)[:, 0]
        return np.maximum(t * t, np.abs(t) - 0.125)

    def grad(x):
        t = float(as_vector(x, 1, "x")[0])
        if t * t >= abs(t) - 0.125:
            return np.array([2.0 * t])
        return np.array([math.copysign(1.0, t)])

    two_y = lambda y: 2.0 * np.asarray(y, dtype=float)
    pieces = (
        Piece1D(-math.inf, -b, two_y),
        Piece1D(-b, -a, lambda y: np.full_like(np.asarray(y, dtype=float), -1.0)),
        Piece1D(-a, a, two_y),
        Piece1D(a, b, lambda y: np.full_like(np.asarray(y, dtype=float), 1.0)),
        Piece1D(b, math.inf, two_y),
    )

    return SpbFunction(
        id="pw1d",
        dim=1,
        eval=_with_single(batch, 1),
        eval_batch=batch,
        certificate=SpbCertificate(r1=2.0, r2=1.0, m=1),
        analytic_grad=grad,
        pieces_1d=pieces,
        convex=True,
        inf_value=0.0,
        minimizer=np.zeros(1),
        # max(x^2, |x| - 1/8) <= c  <=>  |x| <= min(sqrt(c), c + 1/8)
        level_radius=lambda c: min(math.sqrt(max(c, 0.0)), max(c, 0.0) + 0.125),
        growth_mu=2.0,
        growth_region="all of R",
        sup_minimizer_norm=0.0,
    )


def _make_relu_net():
    """Fixed two-layer scalar network over R^3 (piecewise linear).

    Weights and the certificate derivation live in ``_netdata``; the maximum
    gradient norm over all activation patterns is < 2, so the member carries
    the Lipschitz certificate (r1=0, r2=2, m=0).
    """

    W1, b1, w2, b2 = (
        _netdata.RELU_W1,
        _netdata.RELU_B1,
        _netdata.RELU_W2,
        _netdata.RELU_B2,
    )

    def batch(X):
        z = np.asarray(X, dtype=float) @ W1.T + b1
        return np.maximum(z, 0.0) @ w2 + b2

    def grad(x):
        z = W1 @ as_vector(x, 3, "x") + b1
        return W1.T @ (w2 * (z > 0.0))

    return SpbFunction(
        id="relu_net",
        dim=3,
        eval=_with_single(batch, 3),
        eval_batch=batch,
        certificate=SpbCertificate(r1=0.0, r2=2.0, m=0),
        analytic_grad=grad,
        convex=False,
    )


def _make_nnls():
    """Squared loss of a tiny one-input network fit, over its 6 parameters.

    ``f(w) = sum_i (psi(t_i; w) - y_i)^2`` with
    ``psi(t; w) = v1 relu(a1 t + b1) + v2 relu(a2 t + b2)`` and parameter
    order ``w = (a1, b1, v1, a2, b2, v2)``.  Data and the hand derivation of
    the cubic-growth certificate (r1=76, r2=27, m=3) are in ``_netdata``.
    """

    T, Y = _netdata.NNLS_T, _netdata.NNLS_Y

    def batch(X):
        W = np.asarray(X, dtype=float)
        z1 = np.maximum(W[:, [0]] * T + W[:, [1]], 0.0)
        z2 = np.maximum(W[:, [3]] * T + W[:, [4]], 0.0)
        pred = W[:, [2]] * z1 + W[:, [5]] * z2
        resid = pred - Y
        return np.einsum("ij,ij->i", resid, resid)

    def grad(x):
        a1, b1, v1, a2, b2, v2 = as_vector(x, 6, "x")
        p1, p2 = a1 * T + b1, a2 * T + b2
        z1, z2 = np.maximum(p1, 0.0), np.maximum(p2, 0.0)
        m1, m2 = (p1 > 0.0).astype(float), (p2 > 0.0).astype(float)
        resid = v1 * z1 + v2 * z2 - Y
        two_r = 2.0 * resid
        return np.array(
            [
                two_r @ (v1 * m1 * T),
                two_r @ (v1 * m1),
                two_r @ z1,
                two_r @ (v2 * m2 * T),
                two_r @ (v2 * m2),
                two_r @ z2,
            ]
        )

    return SpbFunction(
        id="nnls",
        dim=6,
        eval=_with_single(batch, 6),
        eval_batch=batch,
        certificate=SpbCertificate(r1=76.0, r2=27.0, m=3),
        analytic_grad=grad,
        convex=False,
    )


_REGISTRY = {
    fn.id: fn
    for fn in (
        make_quad(2),
        make_quart(2),
        _make_abs1d(),
        _make_pw1d(),
        _make_relu_net(),
        _make_nnls(),
    )
}


def function_ids():
    """Sorted ids of all registered catalog members."""
    return sorted(_REGISTRY)


def get_function(fn_id):
    """Look up a catalog member by id.

    Raises
    ------
    ValueError
        If the id is unknown (message lists the available ids).
    """
    try:
        return _REGISTRY[fn_id]
    except KeyError:
        raise ValueError(
            f"unknown function id {fn_id!r}; available: {', '.join(function_ids())}"
        ) from None
