# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Benchmark harness: configured solves, degree sweeps and scaling metrics.

A solve always runs the same pipeline: build or load the problem, scale it
by its diagonal, get ``(alpha0, beta0)`` (closed form for the model
Laplacians, power method and DACG otherwise), build the preconditioner and
run PCG on ``b = A x*`` for a seeded random (or all-ones) exact solution
``x*``. Timings are wall clock; the counters are exact and are the quantity
to compare across machines.
"""

import io
import logging
import time
from collections import namedtuple

import numpy as np
import scipy.sparse as sp

from . import config
from .eigen import SpectralBounds, estimate_bounds
from .errors import InconsistentBaselineError, InvalidParameterError
from .ext import NCPrec
from .linop import (
    CountingOperator,
    CsrMatrix,
    IdentityOperator,
    analytic_extremes,
    fd_laplacian,
    jacobi_scale,
    load_matrix_market,
)
from .pcg import RHS_KINDS, SolveConfig, exact_solution, pcg_solve
from .signals import solve_finished
from .spectrum import spectrum_table
from .utils import format_spec, parse_spec

logger = logging.getLogger(__name__)

GENERATORS = {"lap2d": "2d", "lap3d": "3d", "identity": None}
"""Problem generators accepted by ``--gen``, with their Laplacian kind."""

EIGEN_METHODS = ("analytic", "power+dacg")

TABLE1_DEGREES = (0, 1, 3, 7, 15, 31)

TABLE1_REFERENCE = {
    "original": (223, 111, 115, 58, 30, 15),
    "scaled": (223, 112, 61, 31, 17, 11),
}
"""Published PCG iterations of the 78x78 Laplacian, per degree."""

TABLE1_FALLBACK_TOLS = (1e-6, 1e-10)

SweepRow = namedtuple("SweepRow", "m iters ddot matvec true_rel_res time")

Table1Row = namedtuple("Table1Row", "block tol m iters mu_max mu_min l kappa")

ScalingRow = namedtuple("ScalingRow", "p T_p S_p E_p")

WeakScalingRow = namedtuple("WeakScalingRow", "nx p T ratio ideal")


class ExperimentConfig(object):
    """Settings of one benchmark run."""

    def __init__(
        self,
        problem=None,
        matrix=None,
        prec="none",
        tol=config.NC_TOL,
        maxit=config.NC_MAXIT,
        eigs="analytic",
        power_tol=config.NC_POWER_TOL,
        power_maxit=config.NC_POWER_MAXIT,
        dacg_tol=config.NC_DACG_TOL,
        dacg_maxit=config.NC_DACG_MAXIT,
        seed=config.NC_EIGEN_SEED,
        rhs=config.NC_RHS,
        threads=config.NC_THREADS,
        repetitions=1,
        form="stencil",
        out=None,
    ):
        """Initialize and validate settings."""
        if (problem is None) == (matrix is None):
            raise InvalidParameterError("Give exactly one of a generator or a matrix.")
        if eigs not in EIGEN_METHODS:
            raise InvalidParameterError(
                "Unknown eigenvalue estimation {0!r} (expected {1}).".format(
                    eigs, " or ".join(EIGEN_METHODS)
                )
            )
        if matrix is not None and eigs == "analytic":
            raise InvalidParameterError("Analytic bounds need a generated problem.")
        if rhs not in RHS_KINDS:
            raise InvalidParameterError(
                "Unknown exact solution {0!r} (expected {1}).".format(
                    rhs, " or ".join(RHS_KINDS)
                )
            )
        if int(repetitions) < 1 or int(threads) < 1:
            raise InvalidParameterError("repetitions and threads must be >= 1.")
        if form not in ("stencil", "assembled"):
            raise InvalidParameterError("Unknown operator form {0!r}.".format(form))
        if problem is not None:
            name, _ = parse_spec(problem)
            if name not in GENERATORS:
                raise InvalidParameterError(
                    "Unknown generator {0!r} (expected one of {1}).".format(
                        name, ", ".join(sorted(GENERATORS))
                    )
                )
        SolveConfig(tol=tol, maxit=maxit)
        parse_spec(prec)
        self.problem = problem
        self.matrix = matrix
        self.prec = prec
        self.tol = float(tol)
        self.maxit = int(maxit)
        self.eigs = eigs
        self.power_tol = power_tol
        self.power_maxit = power_maxit
        self.dacg_tol = dacg_tol
        self.dacg_maxit = dacg_maxit
        self.seed = seed
        self.rhs = rhs
        self.threads = int(threads)
        self.repetitions = int(repetitions)
        self.form = form
        self.out = out


class Problem(object):
    """A generated or loaded operator with its description."""

    def __init__(self, op, name, kind=None, nx=None, nnz=None, checksum=None):
        """Initialize problem."""
        self.op = op
        self.name = name
        self.kind = kind
        self.nx = nx
        self.nnz = nnz
        self.checksum = checksum

    @property
    def n(self):
        """Dimension."""
        return self.op.n


def make_problem(cfg, state=None):
    """Generate or load the problem of a config."""
    state = state or NCPrec()
    if cfg.matrix is not None:
        storage = state.storage(cfg.matrix)
        op = load_matrix_market(storage, threads=cfg.threads)
        return Problem(op, cfg.matrix, nnz=op.nnz, checksum=storage.checksum())
    name, options = parse_spec(cfg.problem)
    size = options.get("arg", options.get("nx", options.get("n")))
    if not isinstance(size, int) or size < 1:
        raise InvalidParameterError(
            "Generator {0!r} needs a positive size, e.g. lap2d:78.".format(cfg.problem)
        )
    kind = GENERATORS[name]
    if kind is None:
        return Problem(IdentityOperator(size), cfg.problem, nnz=size)
    op = fd_laplacian(kind, size, form=cfg.form, threads=cfg.threads)
    return Problem(op, cfg.problem, kind=kind, nx=size, nnz=getattr(op, "nnz", None))


def generate_matrix(problem, threads=1):
    """Assemble the CSR matrix of a generator spec such as ``lap3d:16``."""
    cfg = ExperimentConfig(problem=problem, form="assembled", threads=threads)
    op = make_problem(cfg).op
    if isinstance(op, IdentityOperator):
        return CsrMatrix.from_scipy(sp.identity(op.n, format="csr"))
    return op


def problem_bounds(problem, cfg, op):
    """Spectral bounds of the scaled operator of a problem."""
    if cfg.eigs == "power+dacg":
        return estimate_bounds(
            op,
            power_tol=cfg.power_tol,
            power_maxit=cfg.power_maxit,
            dacg_tol=cfg.dacg_tol,
            dacg_maxit=cfg.dacg_maxit,
            seed=cfg.seed,
        )
    if problem.kind is None:
        return SpectralBounds(1.0, 1.0, method="analytic")
    lo, hi = analytic_extremes(problem.kind, problem.nx, scaled=True)
    return SpectralBounds(lo, hi, method="analytic")


class PreparedProblem(object):
    """Scaled operator, bounds and right-hand side, shared by several solves."""

    def __init__(self, cfg, state=None):
        """Build everything a solve needs except the preconditioner."""
        self.cfg = cfg
        self.state = state or NCPrec()
        start = time.perf_counter()
        self.problem = make_problem(cfg, self.state)
        scaled, self.inv_sqrt_diag = jacobi_scale(self.problem.op)
        self.op = CountingOperator(scaled)
        self.bounds = problem_bounds(self.problem, cfg, scaled)
        self.x_star = exact_solution(self.problem.n, cfg.rhs, cfg.seed)
        self.b = self.inv_sqrt_diag * self.problem.op.matvec(self.x_star)
        self.setup_time = time.perf_counter() - start

    def solve(self, prec):
        """Solve with the preconditioner given by a spec string.

        :returns: A :class:`SolveRecord`.
        """
        start = time.perf_counter()
        precond = self.state.preconditioner(prec, self.op, self.bounds)
        build_time = time.perf_counter() - start
        settings = SolveConfig(tol=self.cfg.tol, maxit=self.cfg.maxit)
        times = []
        for _ in range(self.cfg.repetitions):
            self.op.reset()
            y, report = pcg_solve(self.op, self.b, settings, precond=precond)
            times.append(report.wall_time)
        x = self.inv_sqrt_diag * y
        return SolveRecord(
            cfg=self.cfg,
            problem=self.problem,
            bounds=self.bounds,
            prec=prec,
            precond=precond,
            report=report,
            setup_time=self.setup_time + build_time,
            times=times,
            error_inf=float(np.max(np.abs(x - self.x_star))),
            operator_applications=self.op.count,
        )


class SolveRecord(object):
    """Everything a solve report contains."""

    def __init__(
        self,
        cfg,
        problem,
        bounds,
        prec,
        precond,
        report,
        setup_time,
        times,
        error_inf,
        operator_applications,
    ):
        """Initialize record."""
        self.schema = config.NC_REPORT_SCHEMA
        self.config = cfg
        self.problem = problem
        self.bounds = bounds
        self.prec = prec
        self.preconditioner = precond.name
        self.degree = precond.degree
        self.params = precond.params
        self.report = report
        self.setup_time = setup_time
        self.times = times
        self.error_inf = error_inf
        self.operator_applications = operator_applications

    @property
    def time_min(self):
        """Fastest repetition."""
        return min(self.times)

    @property
    def time_mean(self):
        """Mean over the repetitions."""
        return float(np.mean(self.times))


def run_solve(cfg, state=None):
    """Run one configured solve.

    :returns: A :class:`SolveRecord`, also sent with
        :data:`ncprec.signals.solve_finished`.
    """
    record = PreparedProblem(cfg, state).solve(cfg.prec)
    solve_finished.send("bench", report=record)
    logger.info(
        "%s with %s: %d iterations, rel_res=%.3e.",
        record.problem.name,
        cfg.prec,
        record.report.iters,
        record.report.rel_res,
    )
    return record


def degree_sweep(cfg, nlevs, form="newton", scale=config.NC_SCALE_BENCH, state=None):
    """Solve the same problem for degrees ``m = 2**nlev - 1``.

    Bounds and scaling are computed once and shared by every degree.

    :returns: A list of :data:`SweepRow`.
    """
    prepared = PreparedProblem(cfg, state)
    rows = []
    for nlev in nlevs:
        m = 2 ** int(nlev) - 1
        if form == "newton":
            prec = format_spec("newton", {"nlev": int(nlev), "scale": scale})
        elif form == "chebyshev":
            prec = format_spec("chebyshev", {"m": m, "scale": scale})
        else:
            raise InvalidParameterError("Unknown polynomial form {0!r}.".format(form))
        record = prepared.solve(prec)
        report = record.report
        rows.append(
            SweepRow(
                m,
                report.iters,
                report.ddot,
                report.matvec,
                report.true_rel_res,
                record.time_min,
            )
        )
    return rows


def _within_band(iters, reference):
    return abs(iters - reference) <= max(0.1 * reference, 3)


def table1(
    nx=78,
    scale=config.NC_SCALE_DEMO,
    degrees=TABLE1_DEGREES,
    tol=config.NC_TOL,
    maxit=config.NC_MAXIT,
    form="newton",
    tol_fallback=False,
    rhs=config.NC_RHS,
    seed=config.NC_EIGEN_SEED,
):
    """Spectral analysis and iterations for the original and scaled polynomials.

    With ``tol_fallback`` on the published problem, both blocks are also
    computed at 1e-6 and 1e-10 when an iteration count leaves the band
    of 10% (or 3 iterations) around the published one. The published
    counts are reached with the default random exact solution;
    ``rhs="ones"`` gives smaller counts at low degree.

    :returns: A list of :data:`Table1Row`.
    """
    blocks = (("original", 1.0), ("scaled", scale))
    tols = [tol]
    rows = []
    while tols:
        current = tols.pop(0)
        for block, s in blocks:
            for row in spectrum_table(
                nx,
                degrees,
                scale=s,
                form=form,
                tol=current,
                maxit=maxit,
                rhs=rhs,
                seed=seed,
            ):
                rows.append(
                    Table1Row(
                        block,
                        current,
                        row.m,
                        row.iters,
                        row.mu_max,
                        row.mu_min,
                        row.l,
                        row.kappa,
                    )
                )
        if (
            tol_fallback
            and current == tol
            and nx == 78
            and tuple(degrees) == TABLE1_DEGREES
            and not table1_matches_reference(rows)
        ):
            logger.warning("Iterations outside the published band, adding tolerances.")
            tols.extend(TABLE1_FALLBACK_TOLS)
    return rows


def table1_matches_reference(rows):
    """Check the iterations of the rows against the published counts."""
    for row in rows:
        reference = TABLE1_REFERENCE[row.block][TABLE1_DEGREES.index(row.m)]
        if not _within_band(row.iters, reference):
            return False
    return True


def _csv(header, rows, formats):
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(f % v for f, v in zip(formats, row)) + "\n")
    return buf.getvalue()


def table1_csv(rows):
    """Render the rows of :func:`table1` as CSV."""
    return _csv(
        "block,tol,m,iter,mu_max,mu_min,l,kappa",
        rows,
        ("%s", "%g", "%d", "%d", "%.17g", "%.17g", "%d", "%.17g"),
    )


def sweep_csv(rows):
    """Render degree sweep rows as CSV."""
    return _csv(
        "m,iter,ddot,matvec,true_rel_res,time",
        rows,
        ("%d", "%d", "%d", "%d", "%.17g", "%.6f"),
    )


class ScalingRecord(object):
    """Wall time ``T_p`` on ``p`` processors against the baseline ``T_n0``."""

    def __init__(self, p, T_p, n0, T_n0):
        """Initialize and validate record."""
        if not (p >= n0 >= 1):
            raise InvalidParameterError(
                "Expected p >= n0 >= 1, got p={0}, n0={1}.".format(p, n0)
            )
        if not (T_p > 0 and T_n0 > 0):
            raise InvalidParameterError("Timings must be positive.")
        self.p = p
        self.T_p = T_p
        self.n0 = n0
        self.T_n0 = T_n0

    @property
    def speedup(self):
        """Pseudo speedup ``T_n0 n0 / T_p``."""
        return self.T_n0 * self.n0 / self.T_p

    @property
    def efficiency(self):
        """Relative efficiency ``S_p / p``."""
        return self.speedup / self.p


def compute_scaling(records):
    """Compute speedup and efficiency of records sharing a baseline.

    >>> rows = compute_scaling([ScalingRecord(512, 6.15, 16, 114.44)])
    >>> round(rows[0].E_p, 2)
    0.58

    :raises ncprec.errors.InconsistentBaselineError: If the records do not
        share ``(n0, T_n0)``.
    """
    records = list(records)
    if len({(r.n0, r.T_n0) for r in records}) > 1:
        raise InconsistentBaselineError()
    return [ScalingRow(r.p, r.T_p, r.speedup, r.efficiency) for r in records]


def scaling_records(points):
    """Build records from ``(p, T_p)`` pairs, the smallest ``p`` as baseline."""
    points = sorted(points)
    if not points:
        raise InvalidParameterError("Give at least one (p, T) pair.")
    n0, T_n0 = points[0]
    return [ScalingRecord(p, T, n0, T_n0) for p, T in points]


def weak_scaling_check(entries):
    """Compare time ratios with the ideal ``T = O(nx**4 / p)`` law.

    Each entry is ``(nx, p, T)``; ratios are taken against the first one.

    >>> rows = weak_scaling_check([(512, 512, 13.8), (2048, 2048, 710.5)])
    >>> round(rows[-1].ratio, 1), rows[-1].ideal
    (51.5, 64.0)
    """
    entries = list(entries)
    if len(entries) < 2:
        raise InvalidParameterError("Weak scaling needs at least two entries.")
    nx0, p0, T0 = entries[0]
    rows = []
    for nx, p, T in entries:
        if not (nx >= 1 and p >= 1 and T > 0):
            raise InvalidParameterError("Expected nx, p >= 1 and T > 0.")
        ideal = float((nx / nx0) ** 4 * (p0 / p))
        rows.append(WeakScalingRow(nx, p, T, T / T0, ideal))
    return rows
