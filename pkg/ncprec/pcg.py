# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Instrumented preconditioned conjugate gradient.

Hestenes-Stiefel form with the convergence test on the recursive residual.
Every iteration performs one operator product, one preconditioner
application and three inner products (``p^T A p``, ``|r|`` and
``r^T z``). Counting rule, with ``k`` iterations and a preconditioner of
degree ``m``:

* ``ddot = 3 k + 1``: the setup computes ``|b|`` and ``r_0^T z_0`` and the
  last iteration skips ``r^T z``. A nonzero ``x0`` adds one more for
  ``|r_0|``.
* ``matvec = k (m + 1)``: ``k`` solver products plus ``k`` preconditioner
  applications of ``m`` products each. A nonzero ``x0`` adds one.
* The true residual ``|b - A x|`` recomputed at exit is not counted.
"""

import logging
import time

import numpy as np

from . import config
from .errors import IndefiniteOperatorError, InvalidParameterError, NonFiniteValueError
from .linop import as_vector
from .polyprec import IdentityPreconditioner
from .signals import pcg_iteration

logger = logging.getLogger(__name__)

RHS_KINDS = ("random", "ones")
"""Accepted kinds of exact solution, see :func:`exact_solution`."""


class SolveConfig(object):
    """Settings of one PCG solve."""

    def __init__(self, tol=config.NC_TOL, maxit=config.NC_MAXIT, x0=None):
        """Initialize settings.

        :raises ncprec.errors.InvalidParameterError: Unless ``tol > 0`` and
            ``maxit >= 1``.
        """
        if not tol > 0:
            raise InvalidParameterError("tol must be positive, got {0!r}.".format(tol))
        if int(maxit) != maxit or maxit < 1:
            raise InvalidParameterError("maxit must be >= 1, got {0!r}.".format(maxit))
        self.tol = float(tol)
        self.maxit = int(maxit)
        self.x0 = x0


class SolveReport(object):
    """Counters, residuals and timing of one PCG solve."""

    def __init__(
        self,
        iters=0,
        ddot=0,
        matvec=0,
        prec_applies=0,
        rel_res=0.0,
        true_rel_res=0.0,
        wall_time=0.0,
        converged=False,
        degree=0,
    ):
        """Initialize report."""
        self.iters = iters
        self.ddot = ddot
        self.matvec = matvec
        self.prec_applies = prec_applies
        self.rel_res = rel_res
        self.true_rel_res = true_rel_res
        self.wall_time = wall_time
        self.converged = converged
        self.degree = degree

    def __repr__(self):
        """Return a compact representation."""
        return (
            "SolveReport(iters={0.iters}, ddot={0.ddot}, matvec={0.matvec}, "
            "rel_res={0.rel_res:.3e}, converged={0.converged})".format(self)
        )


def rhs_from_ones(op):
    """Right-hand side whose exact solution is the all-ones vector.

    >>> from ncprec.linop import fd_laplacian
    >>> rhs_from_ones(fd_laplacian("2d", 2))
    array([2., 2., 2., 2.])
    """
    return op.matvec(np.ones(op.n))


def _finite(value, where):
    if not np.isfinite(value):
        raise NonFiniteValueError(where=where)
    return value


def pcg_solve(op, b, config=None, precond=None):
    """Solve ``A x = b`` with preconditioned conjugate gradients.

    :param op: SPD operator.
    :param b: Right-hand side.
    :param config: A :class:`SolveConfig`, defaults used when ``None``.
    :param precond: Object with ``apply(r)`` and ``degree``; no
        preconditioning when ``None``.
    :returns: ``(x, report)``.
    :raises ncprec.errors.NumericalError: On a non-finite value or when
        the operator or the preconditioner turns out not to be SPD.
    """
    config = config or SolveConfig()
    precond = precond or IdentityPreconditioner()
    b = as_vector(b, op.n)
    report = SolveReport(degree=precond.degree)
    start = time.perf_counter()

    bnorm = _finite(np.linalg.norm(b), "|b|")
    report.ddot += 1
    if bnorm == 0:
        report.converged = True
        report.wall_time = time.perf_counter() - start
        return np.zeros(op.n), report

    if config.x0 is None:
        x = np.zeros(op.n)
        r = b.copy()
        rnorm = bnorm
    else:
        x = as_vector(config.x0, op.n).copy()
        r = b - op.matvec(x)
        report.matvec += 1
        rnorm = _finite(np.linalg.norm(r), "|r|")
        report.ddot += 1

    rel_res = rnorm / bnorm
    if rel_res > config.tol:
        z = precond.apply(r)
        report.prec_applies += 1
        rho = _finite(r @ z, "r^T z")
        report.ddot += 1
        if rho <= 0:
            raise IndefiniteOperatorError(where="preconditioner")
        p = z.copy()

        while report.iters < config.maxit:
            q = op.matvec(p)
            report.matvec += 1
            pq = _finite(p @ q, "p^T A p")
            report.ddot += 1
            if pq <= 0:
                raise IndefiniteOperatorError(where="operator")
            alpha = rho / pq
            x += alpha * p
            r -= alpha * q
            rnorm = _finite(np.linalg.norm(r), "|r|")
            report.ddot += 1
            report.iters += 1
            rel_res = rnorm / bnorm
            pcg_iteration.send("pcg", iteration=report.iters, x=x, r=r, rel_res=rel_res)
            if rel_res <= config.tol or report.iters == config.maxit:
                break

            z = precond.apply(r)
            report.prec_applies += 1
            rho_new = _finite(r @ z, "r^T z")
            report.ddot += 1
            if rho_new <= 0:
                raise IndefiniteOperatorError(where="preconditioner")
            p *= rho_new / rho
            p += z
            rho = rho_new

    report.wall_time = time.perf_counter() - start
    report.matvec += report.prec_applies * precond.degree
    report.rel_res = float(rel_res)
    report.converged = bool(rel_res <= config.tol)
    report.true_rel_res = float(np.linalg.norm(b - op.matvec(x)) / bnorm)
    if report.converged:
        logger.debug("PCG converged: %r", report)
    else:
        logger.warning(
            "PCG did not converge in %d iterations: %r", config.maxit, report
        )
    return x, report


def exact_solution(n, kind=config.NC_RHS, seed=config.NC_EIGEN_SEED):
    """Exact solution ``x*`` of a benchmark system ``A x = A x*``.

    ``random`` draws ``x*`` uniform in ``[-1, 1]`` from ``seed``; ``ones``
    is the all-ones vector of :func:`rhs_from_ones`.

    >>> exact_solution(3, "ones")
    array([1., 1., 1.])
    """
    if kind == "ones":
        return np.ones(n)
    if kind == "random":
        return np.random.default_rng(seed).uniform(-1.0, 1.0, n)
    raise InvalidParameterError(
        "Unknown exact solution {0!r} (expected {1}).".format(
            kind, " or ".join(RHS_KINDS)
        )
    )
