# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Benchmark harness tests."""

import numpy as np
import pytest

from ncprec.bench import (
    TABLE1_DEGREES,
    TABLE1_REFERENCE,
    ExperimentConfig,
    ScalingRecord,
    compute_scaling,
    degree_sweep,
    generate_matrix,
    run_solve,
    scaling_records,
    sweep_csv,
    table1,
    table1_csv,
    table1_matches_reference,
    weak_scaling_check,
)
from ncprec.errors import InconsistentBaselineError, InvalidParameterError
from ncprec.signals import solve_finished


def _row(rows, block, m):
    (row,) = [r for r in rows if r.block == block and r.m == m]
    return row


def test_compute_scaling():
    """Test speedup and efficiency against published timings."""
    (row,) = compute_scaling([ScalingRecord(512, 6.15, 16, 114.44)])
    assert row.S_p == pytest.approx(114.44 * 16 / 6.15)
    assert row.E_p == pytest.approx(0.5815, abs=5e-4)

    (row,) = compute_scaling([ScalingRecord(16, 114.44, 16, 114.44)])
    assert row.S_p == pytest.approx(16.0)
    assert row.E_p == pytest.approx(1.0)


def test_compute_scaling_inconsistent_baseline():
    """Test records must share the baseline."""
    records = [ScalingRecord(32, 60.0, 16, 114.44), ScalingRecord(64, 30.0, 16, 110.0)]
    pytest.raises(InconsistentBaselineError, compute_scaling, records)


def test_scaling_records():
    """Test the smallest processor count becomes the baseline."""
    rows = compute_scaling(scaling_records([(512, 6.15), (16, 114.44), (64, 30.5)]))
    assert [r.p for r in rows] == [16, 64, 512]
    assert rows[0].E_p == pytest.approx(1.0)
    assert rows[-1].E_p == pytest.approx(0.5815, abs=5e-4)
    pytest.raises(InvalidParameterError, scaling_records, [])


def test_scaling_record_validation():
    """Test invalid records."""
    pytest.raises(InvalidParameterError, ScalingRecord, 8, 1.0, 16, 1.0)
    pytest.raises(InvalidParameterError, ScalingRecord, 16, 1.0, 0, 1.0)
    pytest.raises(InvalidParameterError, ScalingRecord, 32, 0.0, 16, 1.0)


def test_weak_scaling_check():
    """Test weak scaling ratios against the ideal law."""
    rows = weak_scaling_check([(512, 512, 13.8), (2048, 2048, 710.5)])
    assert rows[0].ratio == 1.0
    assert rows[0].ideal == 1.0
    assert rows[1].ratio == pytest.approx(51.49, abs=5e-3)
    assert rows[1].ideal == 64.0

    rows = weak_scaling_check([(512, 512, 16.8), (2048, 2048, 1001.5)])
    assert rows[1].ratio == pytest.approx(59.6, abs=5e-2)

    rows = weak_scaling_check([(256, 64, 3.0), (256, 64, 3.0)])
    assert rows[1].ratio == 1.0
    assert rows[1].ideal == 1.0

    pytest.raises(InvalidParameterError, weak_scaling_check, [(512, 512, 13.8)])
    pytest.raises(
        InvalidParameterError, weak_scaling_check, [(512, 512, 13.8), (0, 1, 1.0)]
    )


def test_experiment_config_validation(mtx_path):
    """Test invalid experiment settings."""
    assert ExperimentConfig(problem="lap2d:8").eigs == "analytic"
    assert ExperimentConfig(matrix=mtx_path, eigs="power+dacg").problem is None
    pytest.raises(InvalidParameterError, ExperimentConfig)
    pytest.raises(
        InvalidParameterError, ExperimentConfig, problem="lap2d:8", matrix=mtx_path
    )
    pytest.raises(InvalidParameterError, ExperimentConfig, matrix=mtx_path)
    pytest.raises(InvalidParameterError, ExperimentConfig, problem="lap4d:8")
    pytest.raises(
        InvalidParameterError, ExperimentConfig, problem="lap2d:8", eigs="lanczos"
    )
    pytest.raises(
        InvalidParameterError, ExperimentConfig, problem="lap2d:8", repetitions=0
    )
    pytest.raises(InvalidParameterError, ExperimentConfig, problem="lap2d:8", tol=-1)
    pytest.raises(InvalidParameterError, ExperimentConfig, problem="lap2d:8", prec="")
    pytest.raises(
        InvalidParameterError, ExperimentConfig, problem="lap2d:8", form="banded"
    )


def test_run_solve_published_problem(state):
    """Test the scaled degree 31 Newton solve of the 78x78 Laplacian."""
    cfg = ExperimentConfig(problem="lap2d:78", prec="newton:nlev=5,scale=1.01")
    record = run_solve(cfg, state)
    report = record.report
    assert report.converged
    assert abs(report.iters - 11) <= 2
    assert record.degree == 31
    assert record.preconditioner == "newton"
    assert record.params.nlev == 5
    assert record.bounds.method == "analytic"
    assert record.error_inf < 1e-4
    assert report.ddot == 3 * report.iters + 1
    assert report.matvec == report.iters * 32
    assert record.operator_applications == report.matvec + 1


def test_run_solve_3d(state):
    """Test an unpreconditioned 3D solve."""
    record = run_solve(ExperimentConfig(problem="lap3d:32"), state)
    assert record.report.converged
    assert record.report.true_rel_res <= 1e-7
    assert record.error_inf < 1e-4
    assert record.degree == 0
    assert record.params is None
    assert record.problem.n == 32**3


def test_run_solve_matrix_file(state, mtx_path):
    """Test a loaded matrix with estimated bounds."""
    cfg = ExperimentConfig(
        matrix=mtx_path, prec="chebyshev:m=15,scale=1.001", eigs="power+dacg"
    )
    record = run_solve(cfg, state)
    assert record.report.converged
    assert record.error_inf < 1e-6
    assert record.bounds.method == "power+dacg"
    assert record.bounds.alpha0 < record.bounds.beta0
    assert record.problem.checksum.startswith("md5:")
    assert record.problem.nnz == 36 + 2 * 60
    assert record.degree == 15


def test_run_solve_repetitions(state):
    """Test repeated solves record every timing."""
    cfg = ExperimentConfig(problem="lap2d:12", prec="jacobi", repetitions=3)
    record = run_solve(cfg, state)
    assert len(record.times) == 3
    assert record.time_min <= record.time_mean
    assert record.degree == 0


def test_run_solve_exact_solution(state):
    """Test the exact solution behind the right-hand side."""
    cfg = ExperimentConfig(problem="lap2d:12", prec="jacobi")
    assert cfg.rhs == "random"
    record = run_solve(cfg, state)
    assert record.report.converged
    assert record.error_inf < 1e-6
    assert run_solve(cfg, state).report.iters == record.report.iters

    ones = run_solve(ExperimentConfig(problem="lap2d:12", rhs="ones"), state)
    assert ones.report.converged
    assert ones.error_inf < 1e-6
    pytest.raises(InvalidParameterError, ExperimentConfig, problem="lap2d:8", rhs="x")


def test_run_solve_errors(state):
    """Test errors raised while preparing a solve."""
    pytest.raises(InvalidParameterError, run_solve, ExperimentConfig(problem="lap2d"))
    pytest.raises(
        InvalidParameterError, run_solve, ExperimentConfig(problem="lap2d:x")
    )
    pytest.raises(
        InvalidParameterError,
        run_solve,
        ExperimentConfig(problem="lap2d:4", prec="taylor:m=3"),
        state,
    )
    pytest.raises(
        InvalidParameterError,
        run_solve,
        ExperimentConfig(problem="lap2d:4", prec="newton:degree=3"),
        state,
    )


def test_solve_finished_signal(state):
    """Test the record is sent once the solve is done."""
    calls = []

    def listener(sender, report=None):
        calls.append(report)

    solve_finished.connect(listener, sender="bench", weak=False)
    try:
        record = run_solve(ExperimentConfig(problem="lap2d:5"), state)
    finally:
        solve_finished.disconnect(listener, sender="bench")
    assert calls == [record]


def test_generate_matrix():
    """Test generated matrices are assembled."""
    matrix = generate_matrix("lap2d:4")
    assert matrix.nnz == 16 + 2 * 24
    assert generate_matrix("identity:7").nnz == 7
    assert generate_matrix("lap3d:3").n == 27


def test_degree_sweep_counters(state):
    """Test the counters of a sweep."""
    rows = degree_sweep(ExperimentConfig(problem="lap2d:20"), [0, 1, 2, 3], state=state)
    assert [r.m for r in rows] == [0, 1, 3, 7]
    for row in rows:
        assert row.ddot == 3 * row.iters + 1
        assert row.matvec == row.iters * (row.m + 1)
        assert row.true_rel_res <= 1e-7

    cheb = degree_sweep(
        ExperimentConfig(problem="lap2d:20"), [1, 3], form="chebyshev", state=state
    )
    for newton, other in zip(rows[1::2], cheb):
        assert abs(newton.iters - other.iters) <= 1
    pytest.raises(
        InvalidParameterError,
        degree_sweep,
        ExperimentConfig(problem="lap2d:4"),
        [1],
        form="taylor",
    )


def test_degree_sweep_identity(state):
    """Test the identity converges at once whatever the degree."""
    rows = degree_sweep(ExperimentConfig(problem="identity:20"), [0, 1, 2], state=state)
    assert all(r.iters <= 1 for r in rows)


@pytest.mark.parametrize("problem", ["lap3d:32", "lap2d:200"])
def test_degree_sweep_halves_iterations(state, problem):
    """Test each doubling of the degree roughly halves the iterations."""
    rows = degree_sweep(
        ExperimentConfig(problem=problem), range(5), scale=1.01, state=state
    )
    assert [r.m for r in rows] == [0, 1, 3, 7, 15]
    iters = [r.iters for r in rows]
    for before, after in zip(iters, iters[1:]):
        assert 1.7 <= before / after <= 2.3
    assert rows[-1].true_rel_res <= rows[0].true_rel_res


def test_sweep_csv(state):
    """Test the sweep CSV layout."""
    rows = degree_sweep(ExperimentConfig(problem="lap2d:6"), [0, 1], state=state)
    lines = sweep_csv(rows).splitlines()
    assert lines[0] == "m,iter,ddot,matvec,true_rel_res,time"
    assert len(lines) == 3
    assert lines[1].startswith("0,{0},{1},".format(rows[0].iters, rows[0].ddot))


def test_table1():
    """Test spectral values and iterations of the 78x78 Laplacian."""
    rows = table1()
    assert len(rows) == 2 * len(TABLE1_DEGREES)
    assert {r.tol for r in rows} == {1e-8}

    row = _row(rows, "original", 0)
    assert row.kappa == pytest.approx(2528.7, rel=5e-3)
    assert row.mu_max == pytest.approx(1.9992, rel=5e-3)
    assert row.mu_min == pytest.approx(7.906e-4, rel=5e-3)
    assert row.l == 1

    row = _row(rows, "original", 15)
    assert row.mu_max == pytest.approx(1.8268, rel=5e-3)
    assert row.mu_min == pytest.approx(1.7318e-1, rel=5e-3)
    assert abs(row.l - 468) <= 5

    row = _row(rows, "scaled", 31)
    assert row.kappa == pytest.approx(6.3, rel=1e-2)
    assert row.mu_min == pytest.approx(1.6060e-1, rel=5e-3)

    assert all(r.l == 1 for r in rows if r.block == "scaled")
    assert table1_matches_reference(rows)
    for block, reference in TABLE1_REFERENCE.items():
        for m, expected in zip(TABLE1_DEGREES, reference):
            iters = _row(rows, block, m).iters
            assert abs(iters - expected) <= max(0.1 * expected, 3)


def test_table1_small():
    """Test the layout of a small table."""
    rows = table1(nx=10, degrees=(0, 1, 3), tol_fallback=True)
    assert [(r.block, r.m) for r in rows] == [
        ("original", 0),
        ("original", 1),
        ("original", 3),
        ("scaled", 0),
        ("scaled", 1),
        ("scaled", 3),
    ]
    lines = table1_csv(rows).splitlines()
    assert lines[0] == "block,tol,m,iter,mu_max,mu_min,l,kappa"
    assert lines[1].startswith("original,1e-08,0,")
    assert len(lines) == 7


def test_table1_unit_scale():
    """Test a unit scale makes both blocks identical."""
    rows = table1(nx=10, scale=1.0, degrees=(0, 3))
    original = [r[2:] for r in rows if r.block == "original"]
    scaled = [r[2:] for r in rows if r.block == "scaled"]
    assert original == scaled


@pytest.mark.heavy
def test_lap1600_sweep(state):
    """Test the iteration counts of the 1598x1598 Laplacian."""
    reference = (4517, 2313, 1174, 589, 295, 149, 77)
    rows = degree_sweep(ExperimentConfig(problem="lap2d:1598"), range(7), state=state)
    for row, expected in zip(rows, reference):
        assert abs(row.iters - expected) <= 0.1 * expected
    assert rows[-1].true_rel_res <= rows[0].true_rel_res
    assert np.all(np.diff([r.iters for r in rows]) < 0)
