"""Derived scalar constants for Gaussian smoothing of certified functions.

Given a gradient-growth certificate ``(r1, r2, m)`` (see ``catalog``), a
smoothing radius ``sigma`` and the ambient dimension ``d``, this module
computes every closed-form constant the verification harness certifies:

* **Envelope constants** for the smoothed function ``f_sigma`` and its
  gradient.  With ``q = norm(y - x)``::

      |f_sigma(x) - f_sigma(y)|
          <= (value_lip_offset + value_lip_base * norm(x)**m
              + value_lip_step * q**m) * q

      f_sigma(x) <= f_sigma(y) + <grad f_sigma(y), x - y>
          + [ (grad_lip_offset + grad_lip_base * norm(y)**m) / 2
              + grad_lip_step * q**m / (m + 2) ] * q**2

* **Approximation coefficient** ``approx_error_coeff`` bounding
  ``|f_sigma(x) - f(x)| <= approx_error_coeff(x) * sigma``, and **moment
  coefficients** ``moment_coeff(p)`` bounding
  ``E norm(F(u))**p <= moment_coeff(p) * (norm(x)**(m p) + 1)`` for the
  two-point estimator ``F(u) = (f(x + sigma u) - f(x)) u / sigma``.  Both
  have sigma-free ``*_unit`` variants that dominate them whenever
  ``sigma <= 1``.

* **Smoothing-radius selection** for approximate Goldstein stationarity
  (:func:`goldstein_sigma_rule`), the Gaussian tail radius it relies on
  (:func:`tail_radius`, :func:`tail_radius_check`), and the
  horizon-indexed schedule :func:`goldstein_schedule`.

* **Guarantee right-hand sides** for the two iteration schemes
  (:func:`convex_rate_rhs`, :func:`unconstrained_rate_rhs`) and their
  level-bounded / quadratic-growth refinements
  (:func:`level_bounded_constants`, :func:`growth_constants`).

All formulas use the ``0**0 = 1`` convention via ``util.norm_power`` and
collapse exactly (same floating-point values, not approximately) to the
classical Lipschitz constants when ``m = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaincc

from .catalog import UnsupportedFunctionError
from .lambertw import w_minus1_from_log
from .util import as_vector, ceil_half, norm_power

__all__ = [
    "SmoothingConstants",
    "RateInputs",
    "SigmaRule",
    "GoldsteinSchedule",
    "smoothing_constants",
    "approx_error_coeff",
    "approx_error_coeff_unit",
    "moment_coeff",
    "moment_coeff_unit",
    "fractional_power_bound",
    "goldstein_sigma_rule",
    "tail_radius",
    "tail_radius_check",
    "convex_rate_rhs",
    "level_bounded_constants",
    "unconstrained_rate_rhs",
    "growth_constants",
    "sigma_cap_constant",
    "goldstein_schedule",
    "t_min_explicit_bound",
]

_TWO_PI_E = 2.0 * math.pi * math.e


@dataclass(frozen=True)
class SmoothingConstants:
    """Envelope constants of the smoothed function (see module docstring).

    ``value_lip_*`` bound increments of ``f_sigma`` itself;
    ``grad_lip_*`` bound the gradient increments / the quadratic upper model.
    When ``m = 0`` the base and step entries vanish and the offsets collapse
    to ``r2`` and ``r2 sqrt(d) / sigma`` exactly.
    """

    value_lip_offset: float
    value_lip_base: float
    value_lip_step: float
    grad_lip_offset: float
    grad_lip_base: float
    grad_lip_step: float
    sigma: float
    dim: int


def smoothing_constants(cert, sigma, d):
    """Compute the six envelope constants for ``f_sigma``.

    Parameters
    ----------
    cert : SpbCertificate
    sigma : float
        Smoothing radius, > 0.
    d : int
        Ambient dimension, >= 1.

    Returns
    -------
    SmoothingConstants
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    r1, r2, m = cert.r1, cert.r2, cert.m
    sqrt_d = math.sqrt(d)
    four_m = 2.0 ** (2 * m - 2)
    two_m = 2.0 ** (m - 1)
    return SmoothingConstants(
        value_lip_offset=four_m * r1 * sigma**m * (m + d) ** (m / 2.0) + r2,
        value_lip_base=four_m * r1,
        value_lip_step=two_m * r1,
        grad_lip_offset=four_m * r1 * sigma ** (m - 1) * (m + 1 + d) ** ((m + 1) / 2.0)
        + r2 * sqrt_d / sigma,
        grad_lip_base=four_m * r1 * sqrt_d / sigma,
        grad_lip_step=two_m * r1 * sqrt_d / sigma,
        sigma=sigma,
        dim=d,
    )


def approx_error_coeff(cert, sigma, d, x):
    """Coefficient bounding ``|f_sigma(x) - f(x)| <= coeff * sigma`` at ``x``."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    r1, r2, m = cert.r1, cert.r2, cert.m
    nx = float(np.linalg.norm(as_vector(x)))
    two_m = 2.0 ** (m - 1)
    return (two_m * r1 * norm_power(nx, m) + r2) * math.sqrt(d) + two_m * r1 * sigma**m * (
        m + 1 + d
    ) ** ((m + 1) / 2.0)


def approx_error_coeff_unit(cert, d, x):
    """Sigma-free variant dominating :func:`approx_error_coeff` for sigma <= 1."""
    r1, r2, m = cert.r1, cert.r2, cert.m
    nx = float(np.linalg.norm(as_vector(x)))
    two_m = 2.0 ** (m - 1)
    return (two_m * r1 * norm_power(nx, m) + r2) * math.sqrt(d) + two_m * r1 * (
        m + 1 + d
    ) ** ((m + 1) / 2.0)


def moment_coeff(cert, sigma, d, p):
    """Coefficient in ``E norm(F(u))**p <= coeff * (norm(x)**(m p) + 1)``.

    ``p = 0`` returns 1 by convention.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if p < 0 or int(p) != p:
        raise ValueError(f"p must be a nonnegative integer, got {p}")
    if p == 0:
        return 1.0
    r1, r2, m = cert.r1, cert.r2, cert.m
    slope_term = 2.0 ** ((m - 1) * p) * r1**p * (2 * p + d) ** p
    mixed_term = r2**p * (2 * p + d) ** p + 2.0 ** ((m - 1) * p) * r1**p * sigma ** (
        m * p
    ) * ((m + 2) * p + d) ** ((m + 2) * p / 2.0)
    return 3.0 ** (p - 1) * max(slope_term, mixed_term)


def moment_coeff_unit(cert, d, p):
    """Sigma-free variant dominating :func:`moment_coeff` for sigma <= 1.

    Note the structural difference: the unit variant *adds* the two branches
    instead of taking their maximum, which is what makes it an upper bound.
    """
    if p < 0 or int(p) != p:
        raise ValueError(f"p must be a nonnegative integer, got {p}")
    if p == 0:
        return 1.0
    r1, r2, m = cert.r1, cert.r2, cert.m
    return 3.0 ** (p - 1) * (
        r2**p * (2 * p + d) ** p
        + 2.0 ** ((m - 1) * p) * r1**p * ((m + 2) * p + d) ** ((m + 2) * p / 2.0)
    )


def fractional_power_bound(alpha_c, beta_c, n):
    """Bound on a fractional moment from two plain moments.

    If a nonnegative random quantity ``g`` and a random point ``x`` satisfy
    ``E[g / (1 + norm(x)**n)] <= alpha_c`` and ``E norm(x)**2 <= beta_c``,
    then ``E[g**(1 / (2 ceil(n/2)))] <= (1 + sqrt(beta_c)) *
    (2 alpha_c)**(1 / (2 ceil(n/2)))``; this returns that right-hand side.
    """
    if alpha_c <= 0:
        raise ValueError(f"alpha_c must be positive, got {alpha_c}")
    if beta_c < 0:
        raise ValueError(f"beta_c must be nonnegative, got {beta_c}")
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")
    return (1.0 + math.sqrt(beta_c)) * (2.0 * alpha_c) ** (1.0 / (2 * ceil_half(n)))


# --------------------------------------------------------------------------
# Gaussian tail radius and the sigma selection rule
# --------------------------------------------------------------------------

def tail_radius(d, nu):
    """Radius ``M`` with ``integral_{norm(u) >= M} exp(-norm(u)^2/2) du <= nu``.

    Computed as ``sqrt(-d * W(-nu**(2/d) / (2 pi e)))`` with ``W`` the lower
    real branch of the Lambert function.  For ``nu >= (2 pi)**(d/2)`` the
    whole-space integral already satisfies the bound; the Lambert
    out-of-domain convention returns 0 there, so ``M = 0``.

    The Lambert argument is passed in log form, so very small ``nu`` cannot
    underflow.
    """
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    log_arg = (2.0 / d) * math.log(nu) - math.log(_TWO_PI_E)
    w = w_minus1_from_log(log_arg)
    return math.sqrt(-d * w)


def tail_radius_check(d, nu, M):
    """Independently verify the tail bound at radius ``M``.

    Evaluates ``integral_{norm(u) >= M} exp(-norm(u)^2/2) du
    = (2 pi)**(d/2) * Q(d/2, M^2/2)`` with ``Q`` the regularized upper
    incomplete gamma function (the chi-squared upper tail), and compares it
    to ``nu``.

    Returns
    -------
    dict
        ``{"bound_satisfied": bool, "integral": float}``.
    """
    if M < 0:
        raise ValueError(f"M must be nonnegative, got {M}")
    integral = (2.0 * math.pi) ** (d / 2.0) * float(gammaincc(d / 2.0, M * M / 2.0))
    return {"bound_satisfied": integral <= nu * (1.0 + 1e-12), "integral": integral}


@dataclass(frozen=True)
class SigmaRule:
    """Smoothing-radius selection for a target (epsilon, delta) accuracy pair.

    For every ``sigma in (0, sigma_max]`` the smoothed gradient at ``x`` lies
    within ``(1 + norm(x)**m) * epsilon`` of the delta-reach subgradient set
    (certified numerically by ``stationarity.check_goldstein_inclusion``).

    Fields
    ------
    grad_scale : float
        ``4 r2 + 2**(m+1) r1 (m + d)**(m/2)`` — the gradient-norm scale that
        converts ``epsilon`` into a Gaussian tail mass.
    tail_mass : float
        Required tail mass ``min(epsilon / grad_scale, (2 pi)**(d/2) - 1/2)``
        (the cap keeps the Lambert argument inside its domain).
    tail_radius : float
        Radius ``H`` achieving that tail mass; always > sqrt(d).
    sigma_max : float
        ``min( [epsilon / (2**(m+1) r1 (m+d)**(m/2))]**(1/m), 1, delta / H )``
        with the first entry present only when ``m >= 1``.
    sigma_simplified : float or None
        Closed-form lower bound on ``sigma_max`` valid on the window
        ``0 < epsilon < min(5 r2, 1)``, ``0 < delta < 1``; ``None`` outside
        the window.  Never silently substituted for ``sigma_max``.
    eps_cap_branch : float
        Epsilon threshold below which ``tail_mass = epsilon / grad_scale``
        (the min's first branch) is active.
    eps_cap_small_arg : float
        Epsilon threshold below which the Lambert argument stays in the
        small-argument regime used to derive ``sigma_simplified``.
    window_ok : bool
        Whether (epsilon, delta) lie in the validity window above.
    """

    epsilon: float
    delta: float
    grad_scale: float
    tail_mass: float
    tail_radius: float
    sigma_max: float
    sigma_simplified: Optional[float]
    eps_cap_branch: float
    eps_cap_small_arg: float
    window_ok: bool


def _grad_scale(cert, d):
    return 4.0 * cert.r2 + 2.0 ** (cert.m + 1) * cert.r1 * (cert.m + d) ** (cert.m / 2.0)


def goldstein_sigma_rule(cert, d, epsilon, delta):
    """Compute the full smoothing-radius selection rule (see :class:`SigmaRule`)."""
    if epsilon <= 0 or delta <= 0:
        raise ValueError(f"epsilon and delta must be positive, got {epsilon}, {delta}")
    r1, r2, m = cert.r1, cert.r2, cert.m
    scale = _grad_scale(cert, d)
    cap = (2.0 * math.pi) ** (d / 2.0) - 0.5
    eta1 = min(epsilon / scale, cap)
    log_arg = (2.0 / d) * math.log(eta1) - math.log(_TWO_PI_E)
    h = math.sqrt(-d * w_minus1_from_log(log_arg))
    candidates = [1.0, delta / h]
    if m >= 1:
        candidates.append((epsilon / (2.0 ** (m + 1) * r1 * (m + d) ** (m / 2.0))) ** (1.0 / m))
    sigma_max = min(candidates)

    window_ok = (0.0 < epsilon < min(5.0 * r2, 1.0)) and (0.0 < delta < 1.0)
    sigma_simplified = None
    if window_ok:
        tail_coeff = delta * scale ** (-1.0 / d) / math.sqrt(d * math.pi * math.e)
        if m >= 1:
            poly_coeff = (2.0 ** (m + 1) * r1 * (m + d) ** (m / 2.0)) ** (-1.0 / m)
            sigma_simplified = min(poly_coeff, tail_coeff) * epsilon ** max(1.0 / m, 1.0 / d)
        else:
            sigma_simplified = tail_coeff * epsilon ** (1.0 / d)

    return SigmaRule(
        epsilon=epsilon,
        delta=delta,
        grad_scale=scale,
        tail_mass=eta1,
        tail_radius=h,
        sigma_max=sigma_max,
        sigma_simplified=sigma_simplified,
        eps_cap_branch=cap * scale,
        eps_cap_small_arg=(math.pi * math.e / 5.0) ** (d / 2.0) * scale,
        window_ok=window_ok,
    )


# --------------------------------------------------------------------------
# Rate right-hand sides
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RateInputs:
    """Shared inputs of the guarantee right-hand sides.

    ``gamma`` is the step scale of the constant schedule
    ``tau_k = gamma / sqrt(T + 1)``; ``horizon`` is ``T`` (iterations run
    k = 0..T); ``x0`` the start point.  Optional fields are needed only by
    the bounds that use them: ``xstar`` (a minimizer), ``inf_value`` and
    ``f_x0`` (objective infimum and start value), ``growth_mu`` (quadratic
    growth modulus), ``sup_solution_norm`` (sup of norm over the solution
    set).
    """

    gamma: float
    horizon: int
    sigma: float
    x0: np.ndarray
    xstar: Optional[np.ndarray] = None
    inf_value: Optional[float] = None
    f_x0: Optional[float] = None
    growth_mu: Optional[float] = None
    sup_solution_norm: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.horizon < 0 or int(self.horizon) != self.horizon:
            raise ValueError(f"horizon must be a nonnegative integer, got {self.horizon}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "x0", as_vector(self.x0, name="x0"))
        if self.xstar is not None:
            object.__setattr__(
                self, "xstar", as_vector(self.xstar, dim=self.x0.shape[0], name="xstar")
            )


def _schedule_sums(gamma, horizon, power):
    """Sum of tau_k**power over k = 0..T for tau_k = gamma / sqrt(T + 1)."""
    tau = gamma / math.sqrt(horizon + 1.0)
    return (horizon + 1) * tau**power


def convex_rate_rhs(cert, inputs, d):
    """Guaranteed bound on ``min_k E[(f(x^k) - f(x*)) / (norm(x^k)**m + 1)]``.

    For the projected scheme with the constant schedule:
    ``(norm(x0 - x*)**2 + moment_coeff(2) * sum tau^2) / (2 sum tau)
    + approx_error_coeff(x*) * sigma``.
    """
    if inputs.xstar is None:
        raise ValueError("convex_rate_rhs requires inputs.xstar")
    gap_sq = float(np.linalg.norm(inputs.x0 - inputs.xstar)) ** 2
    h2 = moment_coeff(cert, inputs.sigma, d, 2)
    sum_tau = _schedule_sums(inputs.gamma, inputs.horizon, 1)
    sum_tau_sq = _schedule_sums(inputs.gamma, inputs.horizon, 2)
    smoothing_term = approx_error_coeff(cert, inputs.sigma, d, inputs.xstar) * inputs.sigma
    return (gap_sq + h2 * sum_tau_sq) / (2.0 * sum_tau) + smoothing_term


def level_bounded_constants(fn, inputs):
    """Constants of the level-bounded refinement of the convex guarantee.

    Needs the member's analytic level radius.  Returns a dict with

    * ``c_lev`` — radius of the level set ``{f <= f(x*) + coeff * sigma}``,
    * ``m_bd``  — second-moment bound ``4 norm(x0)^2 + 6 c_lev^2 + 2 H2 gamma^2``,
    * ``c_bd``  — progress constant ``(norm(x0-x*)^2 + H2 gamma^2) / (2 gamma)``,
    * ``rate_bound`` — the final fractional-power guarantee
      ``(1 + sqrt(m_bd)) * (2 c_bd T^{-1/2} + 2 coeff sigma)^{1/(2 ceil(m/2))}``.
    """
    if fn.level_radius is None or fn.inf_value is None or fn.minimizer is None:
        raise UnsupportedFunctionError(
            f"{fn.id}: level-bounded constants need level_radius, inf_value, minimizer"
        )
    cert, d = fn.certificate, fn.dim
    if cert.m < 1:
        raise ValueError("level-bounded rate applies to certificates with m >= 1")
    if inputs.horizon < 1:
        raise ValueError("horizon must be >= 1 for the T**(-1/2) bound")
    xstar = fn.minimizer if inputs.xstar is None else inputs.xstar
    coeff = approx_error_coeff(cert, inputs.sigma, d, xstar)
    c_lev = float(fn.level_radius(coeff * inputs.sigma))
    h2 = moment_coeff(cert, inputs.sigma, d, 2)
    m_bd = 4.0 * float(np.linalg.norm(inputs.x0)) ** 2 + 6.0 * c_lev**2 + 2.0 * h2 * inputs.gamma**2
    c_bd = (
        float(np.linalg.norm(inputs.x0 - xstar)) ** 2 + h2 * inputs.gamma**2
    ) / (2.0 * inputs.gamma)
    root = 1.0 / (2.0 * ceil_half(cert.m))
    rate_bound = (1.0 + math.sqrt(m_bd)) * (
        2.0 * c_bd * inputs.horizon**-0.5 + 2.0 * coeff * inputs.sigma
    ) ** root
    return {"c_lev": c_lev, "m_bd": m_bd, "c_bd": c_bd, "rate_bound": rate_bound}


def unconstrained_rate_rhs(cert, inputs, d):
    """Guaranteed bound on the best normalized smoothed-gradient square.

    For the unprojected scheme, bounds
    ``min_k E[ norm(grad f_sigma(x^k) / (norm(x^k)**m + 1))**2 ]`` by::

        [ coeff(x0) sigma + f(x0) - inf f
          + (1/2) H2 (grad_offset + grad_base) sum tau^2
          + H_{m+2} grad_step / (m+2) * sum tau^{m+2} ] / sum tau
    """
    if inputs.inf_value is None or inputs.f_x0 is None:
        raise ValueError("unconstrained_rate_rhs requires inputs.inf_value and inputs.f_x0")
    m = cert.m
    sc = smoothing_constants(cert, inputs.sigma, d)
    h2 = moment_coeff(cert, inputs.sigma, d, 2)
    h_m2 = moment_coeff(cert, inputs.sigma, d, m + 2)
    sum_tau = _schedule_sums(inputs.gamma, inputs.horizon, 1)
    sum_tau_sq = _schedule_sums(inputs.gamma, inputs.horizon, 2)
    sum_tau_m2 = _schedule_sums(inputs.gamma, inputs.horizon, m + 2)
    numerator = (
        approx_error_coeff(cert, inputs.sigma, d, inputs.x0) * inputs.sigma
        + (inputs.f_x0 - inputs.inf_value)
        + 0.5 * h2 * (sc.grad_lip_offset + sc.grad_lip_base) * sum_tau_sq
        + h_m2 * sc.grad_lip_step / (m + 2.0) * sum_tau_m2
    )
    return numerator / sum_tau


def growth_constants(cert, inputs, d):
    """Constants of the quadratic-growth refinement (m >= 1).

    Returns ``c_tilde`` (normalized descent budget), ``m_tilde`` (iterate
    second-moment bound) and ``rate_bound``, the guarantee on
    ``min_k E[ norm(grad f_sigma(x^k))**(1/(2 ceil(m/2))) ]``::

        c_tilde = (1/gamma) [ f(x0) - inf f + coeff(x0) sigma
                              + H2 (grad_offset + grad_base) gamma^2 / 2
                              + H_{m+2} grad_step gamma^{m+2} / (m+2) ]
        m_tilde = (8/mu) [ gamma c_tilde + mu sigma^2 d / 2 ]
                  + 2 sup_solution_norm^2
        rate_bound = 2^{1/(2 ceil(m/2))} (1 + sqrt(m_tilde))
                     * c_tilde^{1/(4 ceil(m/2))} * T^{-1/(8 ceil(m/2))}
    """
    if inputs.growth_mu is None or inputs.sup_solution_norm is None:
        raise ValueError("growth_constants requires growth_mu and sup_solution_norm")
    if inputs.inf_value is None or inputs.f_x0 is None:
        raise ValueError("growth_constants requires inf_value and f_x0")
    if cert.m < 1:
        raise ValueError("growth refinement applies to certificates with m >= 1")
    m = cert.m
    sc = smoothing_constants(cert, inputs.sigma, d)
    h2 = moment_coeff(cert, inputs.sigma, d, 2)
    h_m2 = moment_coeff(cert, inputs.sigma, d, m + 2)
    c_tilde = (
        (inputs.f_x0 - inputs.inf_value)
        + approx_error_coeff(cert, inputs.sigma, d, inputs.x0) * inputs.sigma
        + 0.5 * h2 * (sc.grad_lip_offset + sc.grad_lip_base) * inputs.gamma**2
        + h_m2 * sc.grad_lip_step * inputs.gamma ** (m + 2) / (m + 2.0)
    ) / inputs.gamma
    m_tilde = (
        8.0 / inputs.growth_mu * (inputs.gamma * c_tilde + 0.5 * inputs.growth_mu * inputs.sigma**2 * d)
        + 2.0 * inputs.sup_solution_norm**2
    )
    half_ceil = ceil_half(m)
    rate_bound = (
        2.0 ** (1.0 / (2 * half_ceil))
        * (1.0 + math.sqrt(m_tilde))
        * c_tilde ** (1.0 / (4 * half_ceil))
        * inputs.horizon ** (-1.0 / (8 * half_ceil))
    )
    return {"c_tilde": c_tilde, "m_tilde": m_tilde, "rate_bound": rate_bound}


def sigma_cap_constant(cert, d, x0, f_gap):
    """Sigma-free constant ``K`` with ``c_tilde <= K / sigma`` when gamma = sigma <= 1.

    ``f_gap`` is ``f(x0) - inf f``.  Uses the sigma-free unit coefficients,
    so the bound holds uniformly over ``sigma in (0, 1]``.
    """
    if f_gap < 0:
        raise ValueError(f"f_gap must be nonnegative, got {f_gap}")
    r1, r2, m = cert.r1, cert.r2, cert.m
    sqrt_d = math.sqrt(d)
    h2_unit = moment_coeff_unit(cert, d, 2)
    h_m2_unit = moment_coeff_unit(cert, d, m + 2)
    return (
        f_gap
        + approx_error_coeff_unit(cert, d, x0)
        + 0.5 * h2_unit * (2.0 ** (2 * m - 2) * r1 * (m + 1 + d) ** ((m + 1) / 2.0) + r2 * sqrt_d)
        + 2.0 ** (2 * m - 3) * h2_unit * r1 * sqrt_d
        + 2.0 ** (m - 1) * r1 * h_m2_unit * sqrt_d / (m + 2.0)
    )


@dataclass(frozen=True)
class GoldsteinSchedule:
    """Horizon-indexed smoothing schedule for Goldstein stationarity runs.

    For a horizon ``T`` and reach ``delta``, running the unprojected scheme
    with ``gamma = sigma = sigma_sched`` certifies a decaying bound on the
    best distance to the delta-reach subgradient set, provided
    ``T >= t_min`` (which also forces ``sigma_sched <= 1``).

    Fields
    ------
    sigma_coeff : float
        Coefficient ``kappa`` of the power schedule
        ``sigma_sched = sigma_coeff * T**(-1/(4 q + 2))`` with
        ``q = min(m, d)`` (``q = d`` when m = 0).
    t_min : float
        Minimal horizon making the schedule admissible.
    eps_sched : float
        Diagnostic accuracy level ``T**(-q/(4 q + 2))`` implied by the
        schedule (not part of any public contract).
    budget_const : float or None
        The sigma-free descent-budget constant ``K`` (needs x0 / f_gap).
    second_moment_bound : float or None
        Iterate second-moment bound ``8 K / mu + 4 d + 2 sup_norm^2``
        (needs the quadratic-growth data; m >= 1 only).
    rate_rhs : float or None
        Right-hand side of the distance guarantee at horizon ``T``:
        ``(2 sqrt(budget_const / sigma_coeff) + 2) * T**-(1/4 - 1/(8 q + 4))``
        for m = 0, with the extra ``(1 + sqrt(second_moment_bound))`` factor
        and the ``1/(2 ceil(m/2))`` fractional power for m >= 1.
    """

    delta: float
    horizon: int
    sigma_coeff: float
    sigma_sched: float
    t_min: float
    t_ok: bool
    eps_sched: float
    budget_const: Optional[float] = None
    second_moment_bound: Optional[float] = None
    rate_rhs: Optional[float] = None


def goldstein_schedule(
    cert,
    d,
    delta,
    horizon,
    x0=None,
    f_gap=None,
    growth_mu=None,
    sup_solution_norm=None,
):
    """Compute the Goldstein-stationarity schedule at horizon ``T``.

    Parameters
    ----------
    cert : SpbCertificate
    d : int
    delta : float
        Subgradient reach, in (0, 1).
    horizon : int
        Horizon ``T >= 1``.
    x0, f_gap : optional
        Start point and ``f(x0) - inf f``; enable ``budget_const`` and the
        rate right-hand side.
    growth_mu, sup_solution_norm : optional
        Quadratic-growth data; enable the m >= 1 right-hand side.

    Returns
    -------
    GoldsteinSchedule
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if horizon < 1 or int(horizon) != horizon:
        raise ValueError(f"horizon must be a positive integer, got {horizon}")
    r1, r2, m = cert.r1, cert.r2, cert.m
    scale = _grad_scale(cert, d)
    tail_coeff = delta * scale ** (-1.0 / d) / math.sqrt(d * math.pi * math.e)
    if m >= 1:
        q = min(m, d)
        poly_coeff = (2.0 ** (m + 1) * r1 * (m + d) ** (m / 2.0)) ** (-1.0 / m)
        kappa = min(poly_coeff, tail_coeff)
    else:
        q = d
        kappa = tail_coeff
    denom = 4 * q + 2
    sigma_sched = kappa * horizon ** (-1.0 / denom)
    # t_min in log space: max(min(5 r2, 1)**(-1/q), kappa)**denom + 1 can be huge.
    log_base = max(-math.log(min(5.0 * r2, 1.0)) / q, math.log(kappa) if kappa > 0 else -math.inf)
    log_t_min = denom * log_base
    t_min = math.exp(log_t_min) + 1.0 if log_t_min < 700.0 else math.inf
    eps_sched = horizon ** (-q / denom)

    budget = None
    k_tilde = None
    rate = None
    if x0 is not None and f_gap is not None:
        budget = sigma_cap_constant(cert, d, x0, f_gap)
        decay = horizon ** -(0.25 - 1.0 / (8 * q + 4))
        if m == 0:
            rate = (2.0 * math.sqrt(budget / kappa) + 2.0) * decay
        elif growth_mu is not None and sup_solution_norm is not None:
            k_tilde = 8.0 / growth_mu * budget + 4.0 * d + 2.0 * sup_solution_norm**2
            root = 1.0 / (2 * ceil_half(m))
            rate = (
                (1.0 + math.sqrt(k_tilde))
                * (2.0 * math.sqrt(budget / kappa) + 2.0) ** root
                * decay**root
            )

    return GoldsteinSchedule(
        delta=delta,
        horizon=int(horizon),
        sigma_coeff=kappa,
        sigma_sched=sigma_sched,
        t_min=t_min,
        t_ok=horizon >= t_min,
        eps_sched=eps_sched,
        budget_const=budget,
        second_moment_bound=k_tilde,
        rate_rhs=rate,
    )


def t_min_explicit_bound(cert, d):
    """Closed-form upper bound on the minimal admissible horizon.

    Valid when ``m >= 1 and d >= m`` (returns
    ``max(min(5 r2, 1)**-1, r1**-1)**((4 m + 2)/m) + 1``) or when
    ``m = 0 and d >= max(2, 1/(4 r2))`` (returns ``min(5 r2, 1)**-5 + 1``);
    returns ``None`` outside those regimes.
    """
    r1, r2, m = cert.r1, cert.r2, cert.m
    if m >= 1 and d >= m:
        base = max(1.0 / min(5.0 * r2, 1.0), 1.0 / r1)
        return base ** ((4.0 * m + 2.0) / m) + 1.0
    if m == 0 and d >= max(2.0, 1.0 / (4.0 * r2)):
        return min(5.0 * r2, 1.0) ** -5.0 + 1.0
    return None
