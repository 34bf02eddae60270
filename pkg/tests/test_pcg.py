# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Preconditioned conjugate gradient tests."""

import numpy as np
import pytest

from ncprec.errors import (
    DimensionMismatchError,
    IndefiniteOperatorError,
    InvalidParameterError,
)
from ncprec.linop import (
    CountingOperator,
    DenseOperator,
    IdentityOperator,
    analytic_extremes,
    fd_laplacian,
    jacobi_scale,
)
from ncprec.pcg import SolveConfig, pcg_solve, rhs_from_ones
from ncprec.polyprec import (
    ChebyshevPreconditioner,
    NewtonPreconditioner,
    cheb_params,
    newton_params,
)
from ncprec.signals import pcg_iteration


@pytest.fixture()
def lap2d_20():
    """Jacobi scaled 20x20 Laplacian and its exact bounds."""
    op, _ = jacobi_scale(fd_laplacian("2d", 20))
    alpha, beta = analytic_extremes("2d", 20)
    return op, alpha, beta


def test_rhs_from_ones():
    """Test the exact solution is the ones vector."""
    op = fd_laplacian("2d", 6)
    x, report = pcg_solve(op, rhs_from_ones(op), SolveConfig(tol=1e-12))
    assert report.converged
    assert np.allclose(x, 1.0, rtol=0, atol=1e-9)


@pytest.mark.parametrize("nlev", [0, 1, 2, 3, 4])
def test_counter_contract_newton(lap2d_20, nlev):
    """Test ddot = 3k + 1 and matvec = k (m + 1)."""
    op, alpha, beta = lap2d_20
    counting = CountingOperator(op)
    precond = NewtonPreconditioner(
        counting, newton_params(alpha, beta, nlev, scale=1.01)
    )
    x, report = pcg_solve(counting, rhs_from_ones(op), SolveConfig(tol=1e-8), precond)
    m = 2**nlev - 1
    assert report.converged
    assert report.degree == m
    assert report.ddot == 3 * report.iters + 1
    assert report.matvec == report.iters * (m + 1)
    assert report.prec_applies == report.iters
    # The true residual recomputed at exit is the only uncounted product.
    assert counting.count == report.matvec + 1
    assert report.true_rel_res <= 1e-7


def test_counter_contract_chebyshev(lap2d_20):
    """Test the counters with a Chebyshev preconditioner of odd degree."""
    op, alpha, beta = lap2d_20
    counting = CountingOperator(op)
    precond = ChebyshevPreconditioner(counting, cheb_params(alpha, beta, 5))
    _, report = pcg_solve(counting, rhs_from_ones(op), SolveConfig(), precond)
    assert report.converged
    assert report.ddot == 3 * report.iters + 1
    assert report.matvec == report.iters * 6
    assert counting.count == report.matvec + 1


def test_newton_and_chebyshev_same_iterations(lap2d_20):
    """Test both forms of the same polynomial give the same iterations."""
    op, alpha, beta = lap2d_20
    b = rhs_from_ones(op)
    for nlev in (2, 4):
        newton = NewtonPreconditioner(op, newton_params(alpha, beta, nlev, 1.01))
        cheb = ChebyshevPreconditioner(
            op, cheb_params(alpha, beta, 2**nlev - 1, 1.01)
        )
        _, r1 = pcg_solve(op, b, precond=newton)
        _, r2 = pcg_solve(op, b, precond=cheb)
        assert abs(r1.iters - r2.iters) <= 1


def test_preconditioning_reduces_iterations(lap2d_20):
    """Test higher degrees need fewer iterations."""
    op, alpha, beta = lap2d_20
    b = rhs_from_ones(op)
    iters = []
    for nlev in range(5):
        precond = NewtonPreconditioner(op, newton_params(alpha, beta, nlev, 1.01))
        iters.append(pcg_solve(op, b, precond=precond)[1].iters)
    assert iters == sorted(iters, reverse=True)
    assert iters[0] >= 3 * iters[4]


def test_a_norm_error_is_monotone(lap2d_20):
    """Test the A-norm of the error never grows."""
    op, alpha, beta = lap2d_20
    errors = []

    def listener(sender, iteration=None, x=None, r=None, rel_res=None):
        e = x - 1.0
        errors.append(e @ op.matvec(e))

    precond = NewtonPreconditioner(op, newton_params(alpha, beta, 3, 1.01))
    pcg_iteration.connect(listener, weak=False)
    try:
        _, report = pcg_solve(op, rhs_from_ones(op), SolveConfig(tol=1e-8), precond)
    finally:
        pcg_iteration.disconnect(listener)

    assert len(errors) == report.iters
    for previous, current in zip(errors, errors[1:]):
        assert current <= previous * (1 + 1e-6)


def test_zero_rhs():
    """Test b = 0 returns x = 0 without iterating."""
    x, report = pcg_solve(fd_laplacian("2d", 4), np.zeros(16))
    assert not x.any()
    assert report.converged
    assert report.iters == 0
    assert report.ddot == 1
    assert report.matvec == 0


def test_exact_initial_guess():
    """Test an exact x0 costs one product and two inner products."""
    op = fd_laplacian("2d", 4)
    x, report = pcg_solve(op, rhs_from_ones(op), SolveConfig(x0=np.ones(16)))
    assert report.converged
    assert report.iters == 0
    assert report.matvec == 1
    assert report.ddot == 2
    assert np.array_equal(x, np.ones(16))


def test_nonzero_initial_guess(lap2d_20):
    """Test a nonzero x0 adds one product and one inner product."""
    op, alpha, beta = lap2d_20
    x0 = np.linspace(0.0, 2.0, op.n)
    _, report = pcg_solve(op, rhs_from_ones(op), SolveConfig(x0=x0))
    assert report.converged
    assert report.ddot == 3 * report.iters + 2
    assert report.matvec == report.iters + 1


def test_identity_converges_in_one_iteration():
    """Test the identity needs a single iteration."""
    x, report = pcg_solve(IdentityOperator(10), np.arange(1.0, 11.0))
    assert report.iters == 1
    assert np.allclose(x, np.arange(1.0, 11.0))


def test_maxit(lap2d_20):
    """Test the solver stops at maxit."""
    op, alpha, beta = lap2d_20
    _, report = pcg_solve(op, rhs_from_ones(op), SolveConfig(maxit=5))
    assert not report.converged
    assert report.iters == 5
    assert report.ddot == 3 * 5 + 1
    assert report.rel_res > 1e-8


def test_indefinite_operator():
    """Test p^T A p <= 0 is detected."""
    op = DenseOperator(np.diag([1.0, -1.0]))
    pytest.raises(IndefiniteOperatorError, pcg_solve, op, np.ones(2))


def test_indefinite_preconditioner(lap2d_20):
    """Test r^T z <= 0 is detected."""
    op, alpha, beta = lap2d_20

    class Negative(object):
        degree = 0

        def apply(self, r):
            return -r

    with pytest.raises(IndefiniteOperatorError) as excinfo:
        pcg_solve(op, rhs_from_ones(op), precond=Negative())
    assert excinfo.value.kwargs["where"] == "preconditioner"


def test_invalid_arguments():
    """Test invalid settings and vectors."""
    pytest.raises(InvalidParameterError, SolveConfig, tol=0.0)
    pytest.raises(InvalidParameterError, SolveConfig, maxit=0)
    pytest.raises(InvalidParameterError, SolveConfig, maxit=2.5)
    op = fd_laplacian("2d", 3)
    pytest.raises(DimensionMismatchError, pcg_solve, op, np.ones(8))
    pytest.raises(
        DimensionMismatchError,
        pcg_solve,
        op,
        np.ones(9),
        SolveConfig(x0=np.ones(4)),
    )
