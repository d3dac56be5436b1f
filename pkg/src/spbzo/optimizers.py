"""Two-point zeroth-order schemes with norm-adaptive stepsizes.

Both schemes per iteration draw a single Gaussian direction ``u^k``, query
the oracle twice, and form the two-point gradient surrogate::

    v^k = (f(x^k + sigma u^k) - f(x^k)) u^k / sigma

The *projected* scheme (for certified degree m, feasible set Omega)::

    x^{k+1} = P_Omega( x^k - tau_k / (norm(x^k)**m + 1) * v^k )

and the *unprojected* scheme, whose stronger normalization controls the
moment growth without a constraint set::

    x^{k+1} = x^k - tau_k / (norm(x^k)**(2 m) + 1) * v^k

with ``tau_k in (0, 1]``.  Under the ``0**0 = 1`` convention an ``m = 0``
certificate makes both divisors equal 2, so on the whole space the two
schemes generate identical trajectories for matched seeds.

Every run records the full iterate history, the surrogates ``v^k``, the
effective stepsizes, and ``f(x^k)`` reused from the oracle calls the update
already makes — exactly ``2 (T + 1)`` oracle evaluations for horizon ``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .catalog import UnsupportedFunctionError
from .seeding import make_rng
from .util import as_vector, canonical_json, norm_power, short_hash

__all__ = [
    "FeasibleSet",
    "Schedule",
    "Trajectory",
    "run_algorithm1",
    "run_algorithm2",
    "relative_gap_series",
    "wtilde_sq_series",
    "best_index",
]


@dataclass(frozen=True)
class FeasibleSet:
    """Identity, box, or Euclidean-ball constraint with exact projection."""

    kind: str
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None

    @classmethod
    def whole_space(cls):
        return cls(kind="whole_space")

    @classmethod
    def box(cls, lo, hi):
        lo = as_vector(lo, name="lo")
        hi = as_vector(hi, dim=lo.shape[0], name="hi")
        if np.any(lo > hi):
            raise ValueError("box requires lo <= hi componentwise")
        return cls(kind="box", lo=lo, hi=hi)

    @classmethod
    def ball(cls, center, radius):
        if radius <= 0:
            raise ValueError(f"ball radius must be positive, got {radius}")
        return cls(kind="ball", center=as_vector(center, name="center"), radius=float(radius))

    def project(self, x):
        """Euclidean projection of ``x`` onto the set."""
        x = np.asarray(x, dtype=float)
        if self.kind == "whole_space":
            return x
        if self.kind == "box":
            return np.clip(x, self.lo, self.hi)
        if self.kind == "ball":
            offset = x - self.center
            dist = float(np.linalg.norm(offset))
            if dist <= self.radius:
                return x
            return self.center + offset * (self.radius / dist)
        raise ValueError(f"unknown feasible-set kind {self.kind!r}")

    def contains(self, x, tol=1e-9):
        """Membership up to ``tol`` in the natural metric of the set."""
        x = np.asarray(x, dtype=float)
        if self.kind == "whole_space":
            return True
        if self.kind == "box":
            return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))
        if self.kind == "ball":
            return float(np.linalg.norm(x - self.center)) <= self.radius + tol
        raise ValueError(f"unknown feasible-set kind {self.kind!r}")

    def to_dict(self):
        """JSON-ready description (used in config hashing)."""
        if self.kind == "whole_space":
            return {"kind": "whole_space"}
        if self.kind == "box":
            return {"kind": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}
        return {"kind": "ball", "center": self.center.tolist(), "radius": self.radius}

    @classmethod
    def from_dict(cls, spec):
        kind = spec["kind"]
        if kind == "whole_space":
            return cls.whole_space()
        if kind == "box":
            return cls.box(spec["lo"], spec["hi"])
        if kind == "ball":
            return cls.ball(spec["center"], spec["radius"])
        raise ValueError(f"unknown feasible-set kind {kind!r}")


@dataclass(frozen=True)
class Schedule:
    """Stepsize sequence ``tau_0 .. tau_T`` with every entry in (0, 1]."""

    taus: tuple

    def __post_init__(self):
        taus = tuple(float(t) for t in self.taus)
        if len(taus) == 0:
            raise ValueError("schedule must have at least one stepsize")
        if any(not 0.0 < t <= 1.0 for t in taus):
            raise ValueError("all stepsizes must lie in (0, 1]")
        object.__setattr__(self, "taus", taus)

    @property
    def horizon(self):
        """The horizon T (schedule length minus one)."""
        return len(self.taus) - 1

    @classmethod
    def constant_over_sqrt(cls, gamma, horizon):
        """Constant schedule ``tau_k = gamma / sqrt(T + 1)`` for k = 0..T."""
        if not 0.0 < gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
        if horizon < 0 or int(horizon) != horizon:
            raise ValueError(f"horizon must be a nonnegative integer, got {horizon}")
        tau = gamma / math.sqrt(horizon + 1.0)
        return cls(taus=(tau,) * (int(horizon) + 1))

    @classmethod
    def explicit(cls, taus):
        return cls(taus=tuple(taus))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Full record of one seeded run.

    ``xs`` holds ``x^0 .. x^{T+1}`` (shape ``(T+2, d)``); ``vs``, ``steps``
    and ``fvals`` are indexed by k = 0..T, with ``steps`` the effective
    stepsize ``tau_k / divisor`` actually applied and ``fvals[k] = f(x^k)``
    reused from the update's own oracle calls.
    """

    xs: np.ndarray
    vs: np.ndarray
    steps: np.ndarray
    fvals: np.ndarray
    seed: int
    config_hash: str

    @property
    def horizon(self):
        return self.vs.shape[0] - 1


def _run(fn, feasible, x0, sigma, schedule, seed, algorithm):
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = as_vector(x0, fn.dim, "x0")
    if feasible is not None and not feasible.contains(x):
        raise ValueError("x0 must belong to the feasible set")
    taus = schedule.taus
    horizon = len(taus) - 1
    m = fn.certificate.m
    norm_exp = m if algorithm == 1 else 2 * m
    cfg = {
        "fn": fn.id,
        "algorithm": algorithm,
        "x0": x.tolist(),
        "sigma": float(sigma),
        "taus": list(taus),
        "seed": int(seed),
        "feasible": feasible.to_dict() if feasible is not None else {"kind": "whole_space"},
    }
    config_hash = short_hash(canonical_json(cfg))

    rng = make_rng(seed)
    d = fn.dim
    xs = np.empty((horizon + 2, d))
    vs = np.empty((horizon + 1, d))
    steps = np.empty(horizon + 1)
    fvals = np.empty(horizon + 1)
    xs[0] = x
    for k in range(horizon + 1):
        u = rng.standard_normal(d)
        pair = fn.eval_batch(np.stack([x, x + sigma * u]))
        f_x, f_shift = float(pair[0]), float(pair[1])
        v = ((f_shift - f_x) / sigma) * u
        alpha = taus[k] / (norm_power(float(np.linalg.norm(x)), norm_exp) + 1.0)
        x_next = x - alpha * v
        if feasible is not None:
            x_next = feasible.project(x_next)
        vs[k] = v
        steps[k] = alpha
        fvals[k] = f_x
        xs[k + 1] = x_next
        x = x_next
    return Trajectory(xs=xs, vs=vs, steps=steps, fvals=fvals, seed=int(seed), config_hash=config_hash)


def run_algorithm1(fn, feasible, x0, sigma, schedule, seed=0):
    """Run the projected scheme (divisor ``norm(x)**m + 1``).

    Parameters
    ----------
    fn : SpbFunction
    feasible : FeasibleSet
        Constraint set; use ``FeasibleSet.whole_space()`` for none.
    x0 : array_like
        Feasible start point.
    sigma : float
        Smoothing radius.
    schedule : Schedule
        Stepsizes ``tau_0 .. tau_T``; its length fixes the horizon.
    seed : int

    Returns
    -------
    Trajectory
    """
    feasible = FeasibleSet.whole_space() if feasible is None else feasible
    return _run(fn, feasible, x0, sigma, schedule, seed, algorithm=1)


def run_algorithm2(fn, x0, sigma, schedule, seed=0):
    """Run the unprojected scheme (divisor ``norm(x)**(2m) + 1``)."""
    return _run(fn, None, x0, sigma, schedule, seed, algorithm=2)


def relative_gap_series(traj, fn):
    """Normalized optimality gaps ``(f(x^k) - inf f) / (norm(x^k)**m + 1)``.

    Uses the recorded ``fvals`` (no extra oracle calls); defined for members
    with a known ``inf_value``.
    """
    if fn.inf_value is None:
        raise UnsupportedFunctionError(f"{fn.id}: relative gap needs inf_value")
    m = fn.certificate.m
    norms = np.linalg.norm(traj.xs[:-1], axis=1)
    return (traj.fvals - fn.inf_value) / (norm_power(norms, m) + 1.0)


def wtilde_sq_series(traj, fn, sigma):
    """Squared normalized smoothed-gradient norms along the trajectory.

    ``norm( grad f_sigma(x^k) / (norm(x^k)**m + 1) )**2`` for k = 0..T,
    computed from the member's closed-form smoothed gradient.
    """
    if fn.analytic_gs_grad is None:
        raise UnsupportedFunctionError(f"{fn.id}: wtilde series needs analytic_gs_grad")
    m = fn.certificate.m
    out = np.empty(traj.fvals.shape[0])
    for k in range(out.shape[0]):
        xk = traj.xs[k]
        g = np.asarray(fn.analytic_gs_grad(xk, sigma), dtype=float)
        out[k] = (np.linalg.norm(g) / (norm_power(float(np.linalg.norm(xk)), m) + 1.0)) ** 2
    return out


def best_index(series):
    """Index of the series minimum, smallest index on ties."""
    return int(np.argmin(series))
