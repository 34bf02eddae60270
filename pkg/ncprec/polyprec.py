# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

r"""Newton-Chebyshev polynomial preconditioners.

The preconditioner is ``P = p(A)`` for a polynomial ``p`` approximating
``1/lambda`` on the spectral interval ``[alpha, beta]`` of ``A``. Two
constructions produce the same polynomial:

* the Newton (Hotelling) form of depth ``nlev`` and degree ``2**nlev - 1``,
  ``P_{j+1} = zeta_{j+1} (2 P_j - P_j A P_j)`` with ``P_0 = zeta_0 I``;
* the Chebyshev form of any degree ``m`` applied with a three-term
  recurrence.

Both accept a scale ``s >= 1`` multiplying the interval midpoint ``theta``
while the half width ``delta`` stays fixed. This moves the smallest
eigenvalues of ``P A`` away from zero and breaks their clustering.

>>> params = cheb_params(1.0, 3.0, 2)
>>> params.theta, params.delta, params.sigma
(2.0, 1.0, 2.0)
>>> [round(r, 12) for r in params.rho]
[0.5, 0.285714285714, 0.269230769231]
"""

import logging

import numpy as np

from . import config
from .errors import InvalidParameterError
from .linop import as_vector

logger = logging.getLogger(__name__)


def _check_interval(alpha, beta, scale, strict=False):
    """Validate a spectral interval and a theta scale."""
    values = np.array([alpha, beta, scale], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise InvalidParameterError("Bounds and scale must be finite.")
    if not alpha > 0:
        raise InvalidParameterError(
            "Spectral bounds must be positive, got alpha={0!r}.".format(alpha)
        )
    if strict and not alpha < beta:
        raise InvalidParameterError(
            "Expected alpha < beta, got [{0!r}, {1!r}].".format(alpha, beta)
        )
    if not alpha <= beta:
        raise InvalidParameterError(
            "Expected alpha <= beta, got [{0!r}, {1!r}].".format(alpha, beta)
        )
    if not scale >= 1.0:
        raise InvalidParameterError("Scale must be >= 1, got {0!r}.".format(scale))


class NewtonParams(object):
    """Scaling sequence ``zeta_0 .. zeta_nlev`` of the Newton form.

    ``alpha0`` and ``beta0`` are the bounds the sequence was built from, or
    ``None`` for a sequence given explicitly.
    """

    def __init__(self, zeta, alpha0=None, beta0=None, scale=1.0):
        """Initialize parameters."""
        zeta = tuple(float(z) for z in zeta)
        if not zeta:
            raise InvalidParameterError("The zeta sequence needs zeta_0.")
        if not all(np.isfinite(z) and z > 0 for z in zeta):
            raise InvalidParameterError("The zeta sequence must be positive.")
        self.zeta = zeta
        self.alpha0 = alpha0
        self.beta0 = beta0
        self.scale = float(scale)

    @property
    def nlev(self):
        """Recursion depth."""
        return len(self.zeta) - 1

    @property
    def degree(self):
        """Degree of the polynomial."""
        return 2**self.nlev - 1

    def __repr__(self):
        """Return a compact representation."""
        return "NewtonParams(nlev={0}, scale={1}, zeta={2})".format(
            self.nlev, self.scale, list(self.zeta)
        )


class ChebyshevParams(object):
    """Interval parameters and ``rho_0 .. rho_m`` of the Chebyshev form."""

    def __init__(self, m, alpha, beta, scale, theta, delta, sigma, rho):
        """Initialize parameters."""
        self.m = int(m)
        self.alpha = alpha
        self.beta = beta
        self.scale = scale
        self.theta = theta
        self.delta = delta
        self.sigma = sigma
        self.rho = tuple(rho)

    @property
    def degree(self):
        """Degree of the polynomial."""
        return self.m

    def __repr__(self):
        """Return a compact representation."""
        return "ChebyshevParams(m={0}, theta={1!r}, delta={2!r}, sigma={3!r})".format(
            self.m, self.theta, self.delta, self.sigma
        )


def newton_params(alpha0, beta0, nlev, scale=1.0):
    """Build the zeta sequence of the Newton form.

    >>> newton_params(1.0, 3.0, 1).zeta
    (0.5, 1.1428571428571428)

    With ``theta = (alpha0 + beta0) / 2`` and ``delta = (beta0 - alpha0) / 2``
    the scaled interval is ``[s theta - delta, s theta + delta]``. Then
    ``zeta_0 = 1 / (s theta)``, ``zeta_1 = 2 / (1 + 2 a - a**2)`` with
    ``a = (s theta - delta) zeta_0``, and
    ``zeta_j = 2 / (1 + 2 zeta_{j-1} - zeta_{j-1}**2)`` for ``j >= 2``.
    """
    _check_interval(alpha0, beta0, scale)
    if int(nlev) != nlev or nlev < 0:
        raise InvalidParameterError("nlev must be >= 0, got {0!r}.".format(nlev))
    theta = (alpha0 + beta0) / 2.0
    delta = (beta0 - alpha0) / 2.0
    zeta = [1.0 / (scale * theta)]
    if nlev >= 1:
        a = (scale * theta - delta) * zeta[0]
        zeta.append(2.0 / (1.0 + 2.0 * a - a * a))
    for _ in range(2, int(nlev) + 1):
        z = zeta[-1]
        zeta.append(2.0 / (1.0 + 2.0 * z - z * z))
    return NewtonParams(zeta, alpha0=alpha0, beta0=beta0, scale=scale)


def cheb_params(alpha, beta, m, scale=1.0, points=config.NC_POSITIVITY_GRID):
    """Build the parameters of the Chebyshev form of degree ``m``.

    ``theta = s (alpha + beta) / 2``, ``delta = (beta - alpha) / 2``,
    ``sigma = theta / delta``, ``rho_0 = 1 / sigma`` and
    ``rho_k = 1 / (2 sigma - rho_{k-1})``.
    """
    _check_interval(alpha, beta, scale, strict=True)
    if int(m) != m or m < 0:
        raise InvalidParameterError("m must be >= 0, got {0!r}.".format(m))
    theta = scale * (alpha + beta) / 2.0
    delta = (beta - alpha) / 2.0
    sigma = theta / delta
    rho = [1.0 / sigma]
    for _ in range(int(m)):
        rho.append(1.0 / (2.0 * sigma - rho[-1]))
    params = ChebyshevParams(m, alpha, beta, scale, theta, delta, sigma, rho)
    if points and not is_positive(params, alpha, beta, points=points):
        logger.warning(
            "Polynomial %r is not positive on [%g, %g].", params, alpha, beta
        )
    return params


def _newton_level(params, op, level, v, out, scratch):
    """Write ``P_level v`` into ``out``."""
    if level == 0:
        np.multiply(v, params.zeta[0], out=out)
        return out
    u = scratch[level - 1]
    _newton_level(params, op, level - 1, v, u, scratch)
    _newton_level(params, op, level - 1, op.matvec(u), out, scratch)
    # out = zeta_level * (2 u - P_{level-1} A u)
    np.subtract(u, out, out=out)
    out += u
    out *= params.zeta[level]
    return out


def newton_workspace(params, n):
    """Allocate the scratch vectors of :func:`apply_newton`, one per level."""
    return [np.empty(n) for _ in range(params.nlev)]


def apply_newton(params, op, r, workspace=None):
    """Apply the Newton form recursively.

    Each level calls the level below twice, so the product costs exactly
    ``2**nlev - 1`` operator applications.

    >>> from ncprec.linop import DiagonalOperator
    >>> p = newton_params(1.0, 3.0, 1)
    >>> apply_newton(p, DiagonalOperator([1.0, 3.0]), [1.0, 1.0]) * 7
    array([6., 2.])
    """
    r = as_vector(r, op.n)
    scratch = workspace or newton_workspace(params, op.n)
    return _newton_level(params, op, params.nlev, r, np.empty(op.n), scratch)


def chebyshev_workspace(n):
    """Allocate the three vectors of :func:`apply_chebyshev`."""
    return [np.empty(n), np.empty(n), np.empty(n)]


def apply_chebyshev(params, op, r, workspace=None):
    """Apply the Chebyshev form with its three-term recurrence.

    ``x_0 = r / theta``, ``x_1 = (2 rho_1 / delta) (2 r - A r / theta)`` and
    ``x_k = rho_k (2 sigma x_{k-1} - rho_{k-1} x_{k-2} + (2 / delta)(r - A
    x_{k-1}))``. The product costs exactly ``m`` operator applications.
    """
    r = as_vector(r, op.n)
    x_old, x, z = workspace or chebyshev_workspace(op.n)
    theta, delta, sigma, rho = params.theta, params.delta, params.sigma, params.rho
    np.divide(r, theta, out=x_old)
    if params.m == 0:
        return x_old.copy()
    ar = op.matvec(r)
    np.divide(ar, -theta, out=x)
    x += 2.0 * r
    x *= 2.0 * rho[1] / delta
    for k in range(2, params.m + 1):
        np.subtract(r, op.matvec(x), out=z)
        z *= 2.0 / delta
        x_old *= -rho[k - 1]
        x_old += 2.0 * sigma * x
        x_old += z
        x_old *= rho[k]
        x, x_old = x_old, x
    return x.copy()


def eval_poly_scalar(params, lam):
    """Evaluate ``p(lambda)`` for scalars or arrays.

    >>> round(float(eval_poly_scalar(cheb_params(1.0, 3.0, 1), 2.0)), 12)
    0.571428571429
    """
    lam = np.asarray(lam, dtype=np.float64)
    if isinstance(params, NewtonParams):
        p = np.full(lam.shape, params.zeta[0])
        for z in params.zeta[1:]:
            p = z * (2.0 * p - lam * p * p)
        return p
    theta, delta, sigma, rho = params.theta, params.delta, params.sigma, params.rho
    p_old = np.zeros(lam.shape)
    p = np.full(lam.shape, 1.0 / theta)
    t = 2.0 * sigma * (1.0 - lam / theta)
    for k in range(1, params.m + 1):
        p, p_old = rho[k] * (t * p - rho[k - 1] * p_old + 2.0 / delta), p
    return p


def is_positive(params, alpha, beta, points=config.NC_POSITIVITY_GRID):
    """Check ``p(lambda) > 0`` on a uniform grid of ``[alpha, beta]``."""
    grid = np.linspace(alpha, beta, points)
    return bool(np.all(eval_poly_scalar(params, grid) > 0))


def chi_sequence(alpha, beta, nlev, scale=1.0, max_nlev=config.NC_CHI_MAX_NLEV):
    """Compute ``chi_j = 2 sigma_k**2 / sigma_{2k}`` for ``k = 2**(j-1)``.

    ``sigma_k = T_k(sigma)`` grows doubly exponentially, so the sequence is
    computed on ``t_k = 1 / sigma_k``: ``chi = 2 / (2 - t_k**2)`` and
    ``t_{2k} = t_k**2 / (2 - t_k**2)``. It matches ``zeta_1 .. zeta_nlev``.

    >>> [round(c, 10) for c in chi_sequence(1.0, 3.0, 2)]
    [1.1428571429, 1.0103092784]
    """
    _check_interval(alpha, beta, scale, strict=True)
    if int(nlev) != nlev or not 0 <= nlev <= max_nlev:
        raise InvalidParameterError(
            "nlev must lie in [0, {0}], got {1!r}.".format(max_nlev, nlev)
        )
    t = (beta - alpha) / (scale * (alpha + beta))
    chi = []
    for _ in range(int(nlev)):
        t2 = t * t
        chi.append(2.0 / (2.0 - t2))
        t = t2 / (2.0 - t2)
    return chi


def chebyshev_bound(m, sigma):
    """Return ``1 / T_{m+1}(sigma)`` for ``sigma >= 1`` without overflow.

    This is the largest value of ``|1 - lambda p_m(lambda)|`` on the
    interval for the optimal (unscaled) parameters.

    >>> round(chebyshev_bound(1, 2.0), 12) == round(1 / 7, 12)
    True
    """
    if sigma < 1:
        raise InvalidParameterError("sigma must be >= 1, got {0!r}.".format(sigma))
    e = np.exp(-(m + 1) * np.arccosh(sigma))
    return float(2.0 * e / (1.0 + e * e))


def newton_interval_sequence(params, alpha=None, beta=None):
    """Propagate the eigenvalue interval of ``P_j A`` through the levels.

    Level 0 maps ``[alpha, beta]`` to ``zeta_0 [alpha, beta]``. Each further
    level maps an interval through ``mu -> zeta_j (2 mu - mu**2)``.

    :returns: A list of ``(low, high)`` pairs, one per level ``0 .. nlev``.
    """
    alpha = params.alpha0 if alpha is None else alpha
    beta = params.beta0 if beta is None else beta
    if alpha is None or beta is None:
        raise InvalidParameterError("Bounds are needed to propagate the interval.")
    lo, hi = params.zeta[0] * alpha, params.zeta[0] * beta
    intervals = [(lo, hi)]
    for z in params.zeta[1:]:
        ends = (2.0 * lo - lo * lo, 2.0 * hi - hi * hi)
        top = 1.0 if lo <= 1.0 <= hi else max(ends)
        lo, hi = z * min(ends), z * top
        intervals.append((lo, hi))
    return intervals


#
# Preconditioners used by the solver
#
class IdentityPreconditioner(object):
    """No preconditioning."""

    name = "none"
    degree = 0
    params = None

    def apply(self, r):
        """Return a copy of the residual."""
        return np.array(r, dtype=np.float64)


class NewtonPreconditioner(object):
    """Newton form bound to an operator, with its own workspace."""

    name = "newton"

    def __init__(self, op, params):
        """Initialize preconditioner."""
        self.op = op
        self.params = params
        self._workspace = newton_workspace(params, op.n)

    @property
    def degree(self):
        """Degree of the polynomial."""
        return self.params.degree

    def apply(self, r):
        """Return ``p(A) r``."""
        return apply_newton(self.params, self.op, r, workspace=self._workspace)


class ChebyshevPreconditioner(object):
    """Chebyshev form bound to an operator, with its own workspace."""

    name = "chebyshev"

    def __init__(self, op, params):
        """Initialize preconditioner."""
        self.op = op
        self.params = params
        self._workspace = chebyshev_workspace(op.n)

    @property
    def degree(self):
        """Degree of the polynomial."""
        return self.params.degree

    def apply(self, r):
        """Return ``p(A) r``."""
        return apply_chebyshev(self.params, self.op, r, workspace=self._workspace)


def identity_factory(op, bounds, **kwargs):
    """Create the identity preconditioner."""
    return IdentityPreconditioner()


def jacobi_factory(op, bounds, scale=1.0):
    """Create the degree 0 polynomial ``I / (s theta)``.

    On a Jacobi scaled operator this is diagonal preconditioning.
    """
    precond = NewtonPreconditioner(
        op, newton_params(bounds.alpha0, bounds.beta0, 0, scale=scale)
    )
    precond.name = "jacobi"
    return precond


def newton_factory(op, bounds, nlev, scale=1.0):
    """Create a Newton preconditioner of depth ``nlev``."""
    return NewtonPreconditioner(
        op, newton_params(bounds.alpha0, bounds.beta0, nlev, scale=scale)
    )


def chebyshev_factory(op, bounds, m, scale=1.0):
    """Create a Chebyshev preconditioner of degree ``m``."""
    return ChebyshevPreconditioner(
        op, cheb_params(bounds.alpha0, bounds.beta0, m, scale=scale)
    )
