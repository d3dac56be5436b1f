"""Fixed weights and data for the two small piecewise-smooth network members.

Everything downstream (constants, rates, stationarity runs) depends on these
numbers, so they are hard-coded here rather than generated, and the gradient
certificates shipped with the catalog entries are derived below by hand.

RELU_NET — a two-layer scalar-output network over inputs x in R^3::

    f(x) = w2 . relu(W1 @ x + b1) + b2

The function is piecewise linear in x.  On each linear piece the gradient is
``W1.T @ (w2 * mask)`` where ``mask`` is the 0/1 activation pattern, so the
certificate only needs the maximum of ``norm(W1.T @ (w2 * mask))`` over all
2**3 = 8 patterns.  For the weights below that maximum is 1.94785..., so a
gradient-norm certificate with slope-degree 0 and constant 2.0 is valid (and
is re-validated empirically by the catalog tests).

NNLS — a least-squares fit of a tiny one-input/two-unit network to 5 fixed
points.  Parameters w = (a1, b1, v1, a2, b2, v2) in R^6::

    psi(t; w) = v1 * relu(a1 t + b1) + v2 * relu(a2 t + b2)
    f(w)      = sum_i (psi(t_i; w) - y_i)**2

Certificate derivation (valid for every w, any activation pattern), with
norm(w) the Euclidean norm of the full parameter vector:

* ``relu(a t + b) <= sqrt(t^2 + 1) * norm(w)`` by Cauchy–Schwarz on (a, b).
* ``|psi(t; w)| <= (|v1| + |v2|) sqrt(t^2+1) norm(w) <= sqrt(2) sqrt(t^2+1) norm(w)^2``.
* Per-unit gradient rows stack to ``norm(grad_w psi(t)) <= sqrt(t^2+1) * norm(w)``
  (the v-entries contribute relu^2 <= (t^2+1)(a^2+b^2), the (a,b)-entries
  contribute v^2 (t^2+1)).
* With residuals ``r_i = psi(t_i) - y_i``:
  ``norm(grad f(w)) <= sum_i 2 |r_i| norm(grad psi(t_i))
  <= 2 sqrt(2) norm(w)^3 sum_i (t_i^2+1) + 2 norm(w) sum_i sqrt(t_i^2+1) |y_i|``.

For the data below ``sum_i (t_i^2 + 1) = 7.5`` and
``sum_i sqrt(t_i^2 + 1) |y_i| < 3.42``, giving
``norm(grad f) <= 21.3 norm(w)^3 + 6.9 norm(w)``.  Absorbing the linear term
via ``norm(w) <= norm(w)^3 + 1`` leaves ``28.2 norm(w)^3 + 6.9``, so the
deliberately round certificate (r1=76, r2=27, m=3) holds with a wide margin.
"""

from __future__ import annotations

import numpy as np

RELU_W1 = np.array(
    [
        [1.0, -0.5, 0.25],
        [-0.3, 0.8, 0.5],
        [0.6, 0.7, -0.4],
    ]
)
RELU_B1 = np.array([0.2, -0.1, 0.0])
RELU_W2 = np.array([0.9, -1.1, 0.7])
RELU_B2 = 0.15

# Max over the 8 activation patterns of norm(W1.T @ (w2 * mask)); computed
# once here so the certificate margin is visible in tests.
RELU_GRAD_NORM_MAX = max(
    float(np.linalg.norm(RELU_W1.T @ (RELU_W2 * np.array([(k >> j) & 1 for j in range(3)], dtype=float))))
    for k in range(8)
)

NNLS_T = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
NNLS_Y = np.array([0.1, 0.3, 0.6, 0.7, 1.1])
