# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Spectral analysis of polynomially preconditioned operators.

``p(A)`` shares its eigenvectors with ``A``, so the eigenvalues of
``p(A) A`` are ``mu_s = lambda_s p(lambda_s)`` and never require forming the
preconditioned matrix.
"""

import io
import logging
from collections import namedtuple

import numpy as np

from . import config
from .errors import InvalidParameterError
from .linop import analytic_extremes, analytic_spectrum, fd_laplacian, jacobi_scale
from .pcg import SolveConfig, exact_solution, pcg_solve
from .polyprec import (
    ChebyshevPreconditioner,
    NewtonParams,
    NewtonPreconditioner,
    cheb_params,
    eval_poly_scalar,
    newton_params,
)
from .storage import FileStorage, pyfs_storage_factory

logger = logging.getLogger(__name__)

SpectrumRow = namedtuple("SpectrumRow", "m iters mu_max mu_min l kappa report")
"""One row of a spectrum table, with the :class:`~ncprec.pcg.SolveReport`."""

SPECTRUM_CSV_HEADER = "s,lambda,mu"


class SpectrumReport(object):
    """Eigenvalues of ``p_m(A) A`` and their summary.

    ``mu_by_lambda`` follows the order of the eigenvalues of ``A`` while
    ``mu`` is sorted ascending. A polynomial that is not positive on the
    spectrum is flagged with ``spd=False``; ``kappa`` is then NaN and ``l``
    is 0.
    """

    def __init__(self, m, scaled, lam, mu_by_lambda, ratio=config.NC_CLUSTER_RATIO):
        """Initialize report."""
        self.m = m
        self.scaled = scaled
        self.lam = lam
        self.mu_by_lambda = mu_by_lambda
        self.mu = np.sort(mu_by_lambda)
        self.mu_min = float(self.mu[0])
        self.mu_max = float(self.mu[-1])
        self.spd = bool(self.mu_min > 0)
        if self.spd:
            self.kappa = self.mu_max / self.mu_min
            self.l = clustering_indicator(self.mu, ratio=ratio)
        else:
            self.kappa = float("nan")
            self.l = 0


def clustering_indicator(mu, ratio=config.NC_CLUSTER_RATIO):
    """Count the eigenvalues strictly below ``ratio * min(mu)``.

    >>> clustering_indicator([1.0, 1.05, 2.0])
    2
    """
    mu = np.asarray(mu, dtype=np.float64)
    if mu.size == 0 or not np.all(mu > 0):
        raise InvalidParameterError("Expected a nonempty positive spectrum.")
    return int(np.count_nonzero(mu < ratio * mu.min()))


def preconditioned_spectrum(eigs, params, scaled=None):
    """Map the eigenvalues of ``A`` to those of ``p(A) A``.

    :param eigs: Eigenvalues of ``A``, all positive.
    :param params: Newton or Chebyshev parameters.
    :param scaled: Flag recorded in the report; defaults to
        ``params.scale != 1``.
    :returns: A :class:`SpectrumReport`.
    """
    lam = np.asarray(eigs, dtype=np.float64)
    if lam.size == 0 or not np.all(lam > 0):
        raise InvalidParameterError("Eigenvalues of A must be positive.")
    mu = lam * eval_poly_scalar(params, lam)
    if scaled is None:
        scaled = params.scale != 1.0
    report = SpectrumReport(params.degree, scaled, lam, mu)
    if not report.spd:
        logger.warning(
            "Preconditioner of degree %d is not SPD on this spectrum (min mu=%g).",
            params.degree,
            report.mu_min,
        )
    return report


def build_params(alpha, beta, m, scale=1.0, form="chebyshev"):
    """Build Newton or Chebyshev parameters of degree ``m``.

    The Newton form needs ``m = 2**nlev - 1``.
    """
    if form == "chebyshev":
        return cheb_params(alpha, beta, m, scale=scale)
    if form == "newton":
        nlev = int(np.log2(m + 1))
        if 2**nlev - 1 != m:
            raise InvalidParameterError(
                "Newton form needs m = 2**nlev - 1, got m={0}.".format(m)
            )
        return newton_params(alpha, beta, nlev, scale=scale)
    raise InvalidParameterError("Unknown polynomial form {0!r}.".format(form))


def _spectrum_params(alpha, beta, m, scale, form):
    if alpha == beta:
        return newton_params(alpha, beta, 0, scale=scale)
    return build_params(alpha, beta, m, scale=scale, form=form)


def _preconditioner(op, params):
    if isinstance(params, NewtonParams):
        return NewtonPreconditioner(op, params)
    return ChebyshevPreconditioner(op, params)


def spectrum_table(
    nx,
    degrees,
    scale=1.0,
    kind="2d",
    form="chebyshev",
    tol=config.NC_TOL,
    maxit=config.NC_MAXIT,
    rhs=config.NC_RHS,
    seed=config.NC_EIGEN_SEED,
):
    """Solve and analyze the model Laplacian for each degree.

    The exact extremal eigenvalues of the Jacobi scaled operator are used as
    ``(alpha0, beta0)``. Each degree runs a PCG solve with ``b = A x*``, ``x*``
    from :func:`~ncprec.pcg.exact_solution`, and the spectral analysis with
    the same parameters.

    :returns: A list of :data:`SpectrumRow`.
    """
    eigs = analytic_spectrum(kind, nx, scaled=True)
    alpha, beta = analytic_extremes(kind, nx, scaled=True)
    op, _ = jacobi_scale(fd_laplacian(kind, nx))
    b = op.matvec(exact_solution(op.n, rhs, seed))
    settings = SolveConfig(tol=tol, maxit=maxit)
    rows = []
    for m in degrees:
        params = _spectrum_params(alpha, beta, m, scale, form)
        spec = preconditioned_spectrum(eigs, params, scaled=scale != 1.0)
        _, report = pcg_solve(op, b, settings, precond=_preconditioner(op, params))
        logger.info(
            "m=%d scale=%g: iters=%d kappa=%.4g l=%d",
            m,
            scale,
            report.iters,
            spec.kappa,
            spec.l,
        )
        rows.append(
            SpectrumRow(
                m, report.iters, spec.mu_max, spec.mu_min, spec.l, spec.kappa, report
            )
        )
    return rows


def spectrum_csv(report):
    """Render ``s, lambda_s, mu_s`` rows with 17 significant digits."""
    table = np.column_stack(
        [np.arange(1, report.lam.size + 1), report.lam, report.mu_by_lambda]
    )
    buf = io.StringIO()
    np.savetxt(
        buf,
        table,
        fmt=["%d", "%.17g", "%.17g"],
        delimiter=",",
        header=SPECTRUM_CSV_HEADER,
        comments="",
    )
    return buf.getvalue()


def write_spectrum_csv(report, path):
    """Write :func:`spectrum_csv` to a file.

    :returns: The checksum of the written file.
    """
    storage = path if isinstance(path, FileStorage) else pyfs_storage_factory(path)
    return storage.save(spectrum_csv(report))


def spectrum_reports(nx, degrees, scale=1.0, kind="2d", form="chebyshev"):
    """Spectral analysis of the model Laplacian without solving.

    :returns: A list of :class:`SpectrumReport`, one per degree.
    """
    eigs = analytic_spectrum(kind, nx, scaled=True)
    alpha, beta = analytic_extremes(kind, nx, scaled=True)
    return [
        preconditioned_spectrum(
            eigs,
            _spectrum_params(alpha, beta, m, scale, form),
            scaled=scale != 1.0,
        )
        for m in degrees
    ]
