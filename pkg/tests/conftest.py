# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.


"""Pytest configuration."""

import os

import numpy as np
import pytest

from ncprec import NCPrec
from ncprec.bench import generate_matrix
from ncprec.linop import (
    analytic_extremes,
    fd_laplacian,
    jacobi_scale,
    save_matrix_market,
)


def pytest_addoption(parser):
    """Add the option enabling full size reproductions."""
    parser.addoption(
        "--run-heavy",
        action="store_true",
        default=False,
        help="Run the full size reproductions (minutes).",
    )


def pytest_configure(config):
    """Register markers."""
    config.addinivalue_line("markers", "heavy: full size reproduction")


def pytest_collection_modifyitems(config, items):
    """Skip heavy tests unless asked for."""
    if config.getoption("--run-heavy"):
        return
    skip_heavy = pytest.mark.skip(reason="needs --run-heavy")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip_heavy)


@pytest.fixture()
def state():
    """State fixture ignoring the environment."""
    return NCPrec(environ={})


@pytest.fixture()
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240611)


@pytest.fixture()
def random_spd(rng):
    """Factory of dense SPD matrices with a prescribed spectrum."""

    def make(n, low=1.0, high=50.0):
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        lam = np.sort(rng.uniform(low, high, n))
        lam[0], lam[-1] = low, high
        a = (q * lam) @ q.T
        return (a + a.T) / 2.0, lam

    return make


@pytest.fixture(scope="session")
def lap2d_78():
    """Jacobi scaled 78x78 Laplacian with its exact extremal eigenvalues."""
    op, _ = jacobi_scale(fd_laplacian("2d", 78))
    alpha, beta = analytic_extremes("2d", 78)
    return op, alpha, beta


@pytest.fixture()
def mtx_path(tmp_path):
    """MatrixMarket file of the 6x6 Laplacian."""
    path = os.path.join(str(tmp_path), "lap2d_6.mtx")
    save_matrix_market(generate_matrix("lap2d:6"), path)
    return path


@pytest.fixture()
def indefinite_mtx_path(tmp_path):
    """MatrixMarket file of a symmetric indefinite matrix with unit diagonal."""
    path = tmp_path / "indefinite.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 3\n"
        "1 1 1.0\n"
        "2 1 2.0\n"
        "2 2 1.0\n"
    )
    return str(path)
