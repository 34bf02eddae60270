# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Module tests."""

import numpy as np
import pytest

from ncprec import NCPrec
from ncprec.eigen import SpectralBounds
from ncprec.errors import InvalidParameterError
from ncprec.linop import DiagonalOperator
from ncprec.polyprec import ChebyshevPreconditioner, IdentityPreconditioner
from ncprec.storage import PyFSFileStorage


def test_version():
    """Test version import."""
    from ncprec import __version__

    assert __version__


def test_init():
    """Test state initialization."""
    state = NCPrec(environ={})
    assert state.config["NC_TOL"] == 1e-8
    assert state.config["NC_MAXIT"] == 20000
    assert state.config["NC_THREADS"] == 1

    state = NCPrec(overrides={"NC_TOL": 1e-6}, environ={})
    assert state.config["NC_TOL"] == 1e-6
    assert state.config["NC_MAXIT"] == 20000


def test_environment():
    """Test environment overrides and their precedence."""
    assert NCPrec(environ={"NC_THREADS": "4"}).config["NC_THREADS"] == 4
    state = NCPrec(overrides={"NC_THREADS": 2}, environ={"NC_THREADS": "4"})
    assert state.config["NC_THREADS"] == 2
    # Only known keys are read from the environment.
    assert NCPrec(environ={"NC_TOL": "1"}).config["NC_TOL"] == 1e-8
    pytest.raises(InvalidParameterError, NCPrec, environ={"NC_THREADS": "many"})


def test_preconditioner(state):
    """Test preconditioners built from spec strings."""
    op = DiagonalOperator(np.linspace(0.1, 2.0, 8))
    bounds = SpectralBounds(0.1, 2.0)

    precond = state.preconditioner("chebyshev:m=5,scale=1.01", op, bounds)
    assert isinstance(precond, ChebyshevPreconditioner)
    assert precond.degree == 5
    assert precond.params.scale == 1.01

    assert isinstance(state.preconditioner("none", op, bounds), IdentityPreconditioner)
    assert state.preconditioner("jacobi", op, bounds).name == "jacobi"
    assert state.preconditioner("newton:nlev=3", op, bounds).degree == 7

    pytest.raises(InvalidParameterError, state.preconditioner, "taylor", op, bounds)
    pytest.raises(
        InvalidParameterError, state.preconditioner, "newton:m=3", op, bounds
    )


def test_custom_factories(tmpdir):
    """Test factories given as objects."""
    calls = []

    def factory(op, bounds, **kwargs):
        calls.append(kwargs)
        return IdentityPreconditioner()

    state = NCPrec(
        overrides={
            "NC_PRECONDITIONER_FACTORIES": {"custom": factory},
            "NC_STORAGE_FACTORY": lambda url: PyFSFileStorage("prefix-" + url),
        },
        environ={},
    )
    op = DiagonalOperator(np.ones(3))
    state.preconditioner("custom:k=2", op, SpectralBounds(1.0, 1.0))
    assert calls == [{"k": 2}]
    assert state.storage("a.csv").fileurl == "prefix-a.csv"


def test_factory_errors_are_not_masked():
    """Test only a mismatch of the options becomes an input error."""

    def broken(op, bounds, m):
        raise TypeError("unsupported operand")

    state = NCPrec(
        overrides={"NC_PRECONDITIONER_FACTORIES": {"broken": broken}}, environ={}
    )
    op = DiagonalOperator(np.ones(3))
    bounds = SpectralBounds(1.0, 1.0)
    with pytest.raises(TypeError) as excinfo:
        state.preconditioner("broken:m=2", op, bounds)
    assert not isinstance(excinfo.value, InvalidParameterError)
    assert "unsupported operand" in str(excinfo.value)
    pytest.raises(InvalidParameterError, state.preconditioner, "broken:k=2", op, bounds)
    pytest.raises(InvalidParameterError, state.preconditioner, "broken", op, bounds)
