# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Estimation of the extremal eigenvalues of an SPD operator.

The largest eigenvalue comes from a few power iterations, the smallest from
a nonlinear conjugate gradient minimization of the Rayleigh quotient with an
exact line search over ``span{x, p}``. Both start from a pseudorandom vector
drawn from a fixed seed, so results are reproducible.
"""

import logging
from collections import namedtuple

import numpy as np

from . import config
from .errors import (
    IndefiniteOperatorError,
    InvalidParameterError,
    NonFiniteValueError,
    StartingVectorError,
)
from .signals import eigen_iteration

logger = logging.getLogger(__name__)

EigenEstimate = namedtuple("EigenEstimate", "value iters converged matvecs")
"""Result of an estimator: eigenvalue estimate, iterations, flag, products."""


class SpectralBounds(object):
    """Estimates ``(alpha0, beta0)`` of the extremal eigenvalues."""

    def __init__(
        self,
        alpha0,
        beta0,
        alpha_iters=0,
        beta_iters=0,
        matvecs=0,
        method="given",
        converged=True,
        seed=None,
    ):
        """Initialize bounds.

        :raises ncprec.errors.InvalidParameterError: Unless
            ``0 < alpha0 <= beta0``.
        """
        if not (np.isfinite(alpha0) and np.isfinite(beta0) and 0 < alpha0 <= beta0):
            raise InvalidParameterError(
                "Expected 0 < alpha0 <= beta0, got [{0!r}, {1!r}].".format(
                    alpha0, beta0
                )
            )
        self.alpha0 = float(alpha0)
        self.beta0 = float(beta0)
        self.alpha_iters = alpha_iters
        self.beta_iters = beta_iters
        self.matvecs = matvecs
        self.method = method
        self.converged = converged
        self.seed = seed

    @property
    def kappa(self):
        """Estimated condition number."""
        return self.beta0 / self.alpha0

    def __repr__(self):
        """Return a compact representation."""
        return "SpectralBounds(alpha0={0!r}, beta0={1!r}, method={2!r})".format(
            self.alpha0, self.beta0, self.method
        )


def starting_vector(n, seed):
    """Draw a unit vector uniform in ``[-1, 1]**n`` before normalization.

    A vanishing draw is regenerated once with ``seed + 1``.

    :raises ncprec.errors.StartingVectorError: If the second draw also
        vanishes.
    """
    for attempt in (seed, seed + 1):
        x = np.random.default_rng(attempt).uniform(-1.0, 1.0, n)
        norm = np.linalg.norm(x)
        if norm > 0 and np.isfinite(norm):
            return x / norm
        logger.warning("Starting vector vanished for seed %s.", attempt)
    raise StartingVectorError()


def _rayleigh(x, ax, where):
    q = (x @ ax) / (x @ x)
    if not np.isfinite(q):
        raise NonFiniteValueError(where=where)
    if q <= 0:
        raise IndefiniteOperatorError(where=where)
    return q


def power_method(
    op,
    tol=config.NC_POWER_TOL,
    maxit=config.NC_POWER_MAXIT,
    seed=config.NC_EIGEN_SEED,
):
    """Estimate the largest eigenvalue with the power method.

    Stops once the Rayleigh quotient changes by at most ``tol`` relative to
    its new value, or once the eigenresidual ``|Ax - beta x|`` drops below
    ``tol * beta``.

    :returns: An :data:`EigenEstimate`.
    """
    if not tol > 0 or maxit < 1:
        raise InvalidParameterError("Expected tol > 0 and maxit >= 1.")
    x = starting_vector(op.n, seed)
    beta = None
    converged = False
    it = 0
    for it in range(1, int(maxit) + 1):
        y = op.matvec(x)
        beta_new = _rayleigh(x, y, "power method")
        eigen_iteration.send("power", iteration=it, estimate=beta_new)
        residual = np.linalg.norm(y - beta_new * x)
        if (
            beta is not None and abs(beta_new - beta) <= tol * beta_new
        ) or residual <= tol * beta_new:
            beta = beta_new
            converged = True
            break
        beta = beta_new
        x = y / np.linalg.norm(y)
    if not converged:
        logger.warning("Power method stopped at maxit=%d (beta0=%g).", maxit, beta)
    logger.debug("Power method: beta0=%r after %d iterations.", beta, it)
    return EigenEstimate(beta, it, converged, it)


def dacg_smallest(
    op,
    tol=config.NC_DACG_TOL,
    maxit=config.NC_DACG_MAXIT,
    seed=config.NC_EIGEN_SEED,
    restart=config.NC_DACG_RESTART,
):
    """Estimate the smallest eigenvalue by minimizing the Rayleigh quotient.

    Nonlinear conjugate gradients with Fletcher-Reeves directions, restarted
    every ``restart`` iterations. The search direction is made orthogonal to
    the unit iterate ``x`` and the Rayleigh quotient is minimized exactly
    over ``span{x, p}`` through the 2x2 projected problem. Each iteration
    costs one operator application.

    Stops when ``|Ax - q x| / q <= tol``. At ``maxit`` the last (and lowest)
    estimate is returned with ``converged=False``.

    :raises ncprec.errors.IndefiniteOperatorError: If ``v^T A v <= 0``
        shows up.
    """
    if not tol > 0 or maxit < 1:
        raise InvalidParameterError("Expected tol > 0 and maxit >= 1.")
    x = starting_vector(op.n, seed)
    ax = op.matvec(x)
    matvecs = 1
    q = _rayleigh(x, ax, "DACG")
    g = ax - q * x
    p = None
    gg_old = None
    converged = False
    it = 0
    while True:
        if np.linalg.norm(g) <= tol * q:
            converged = True
            break
        if it == maxit:
            break
        it += 1

        gg = g @ g
        if p is None or (it - 1) % restart == 0:
            d = -g
        else:
            d = -g + (gg / gg_old) * p
        d -= (x @ d) * x
        norm_d = np.linalg.norm(d)
        if norm_d == 0:
            converged = True
            break
        p_hat = d / norm_d
        ap = op.matvec(p_hat)
        matvecs += 1

        a, b, c = q, x @ ap, p_hat @ ap
        if not np.isfinite(b + c):
            raise NonFiniteValueError(where="DACG")
        if a <= 0 or c <= 0:
            raise IndefiniteOperatorError(where="DACG")
        phi = 0.5 * np.arctan2(-b, 0.5 * (c - a))
        cos, sin = np.cos(phi), np.sin(phi)
        x = cos * x + sin * p_hat
        ax = cos * ax + sin * ap
        norm_x = np.linalg.norm(x)
        x /= norm_x
        ax /= norm_x

        q_new = _rayleigh(x, ax, "DACG")
        if q_new > q * (1 + 1e-12):
            logger.warning(
                "Rayleigh quotient increased at iteration %d: %r -> %r.", it, q, q_new
            )
        q = q_new
        eigen_iteration.send("dacg", iteration=it, estimate=q)
        g = ax - q * x
        p = d
        gg_old = gg

    if not converged:
        logger.warning("DACG stopped at maxit=%d (alpha0=%g).", maxit, q)
    logger.debug("DACG: alpha0=%r after %d iterations.", q, it)
    return EigenEstimate(q, it, converged, matvecs)


def estimate_bounds(
    op,
    power_tol=config.NC_POWER_TOL,
    power_maxit=config.NC_POWER_MAXIT,
    dacg_tol=config.NC_DACG_TOL,
    dacg_maxit=config.NC_DACG_MAXIT,
    seed=config.NC_EIGEN_SEED,
):
    """Estimate ``(alpha0, beta0)`` with the power method and DACG.

    :returns: A :class:`SpectralBounds` with ``method="power+dacg"``.
    """
    beta = power_method(op, tol=power_tol, maxit=power_maxit, seed=seed)
    alpha = dacg_smallest(op, tol=dacg_tol, maxit=dacg_maxit, seed=seed)
    lo, hi = alpha.value, beta.value
    if lo > hi:
        logger.warning("Estimates cross (alpha0=%r > beta0=%r), swapping.", lo, hi)
        lo, hi = hi, lo
    return SpectralBounds(
        lo,
        hi,
        alpha_iters=alpha.iters,
        beta_iters=beta.iters,
        matvecs=alpha.matvecs + beta.matvecs,
        method="power+dacg",
        converged=alpha.converged and beta.converged,
        seed=seed,
    )
