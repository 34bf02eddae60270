# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

r"""Newton-Chebyshev polynomial preconditioners for conjugate gradients.

This guide will show you how to get started with ncprec. It assumes that
you already have some knowledge of NumPy and of the conjugate gradient
method.

It will then explain key topics and concepts of this module.

Getting started
---------------

You will learn how to solve a model problem with a polynomial
preconditioner, first from the command line and then with the Python API.

First, you will have to setup your virtualenv environment and install
this module along with all its dependencies:

.. code-block:: console

   $ pip install ncprec

The ``ncprec`` command runs configured solves. The following one solves the
Jacobi scaled 2D Laplacian on a 78x78 grid with a Newton preconditioner of
degree 31 and writes a JSON report:

.. code-block:: console

   $ ncprec solve --gen lap2d:78 --prec newton:nlev=5,scale=1.01 \
       --eigs analytic --tol 1e-8 --out report.json

The same solve from Python:

.. code-block:: python

   from ncprec.linop import analytic_extremes, fd_laplacian, jacobi_scale
   from ncprec.pcg import SolveConfig, pcg_solve, rhs_from_ones
   from ncprec.polyprec import NewtonPreconditioner, newton_params

   op, _ = jacobi_scale(fd_laplacian("2d", 78))
   alpha0, beta0 = analytic_extremes("2d", 78)
   params = newton_params(alpha0, beta0, nlev=5, scale=1.01)
   x, report = pcg_solve(
       op,
       rhs_from_ones(op),
       SolveConfig(tol=1e-8),
       precond=NewtonPreconditioner(op, params),
   )

Operators
---------

Everything the solvers touch is a :class:`~ncprec.linop.LinearOperator`
with ``n``, ``matvec(v)`` and ``diagonal()``. The model Laplacians come
either as a matrix-free stencil or assembled in CSR form; both compute
bitwise identical products. User matrices are read from MatrixMarket
files with :func:`~ncprec.linop.load_matrix_market`.

Solvers always work on the Jacobi scaled operator
``D^{-1/2} A D^{-1/2}``, whose diagonal is one.

Spectral bounds
---------------

The polynomial needs an interval ``[alpha0, beta0]`` containing the
spectrum. For the model Laplacians the extremal eigenvalues are known in
closed form (``--eigs analytic``). For anything else
:func:`~ncprec.eigen.estimate_bounds` runs the power method for the
largest eigenvalue and a conjugate gradient minimization of the Rayleigh
quotient for the smallest (``--eigs power+dacg``).

Preconditioners
---------------

A preconditioner is written as ``form:key=value,...``:

* ``none``: plain conjugate gradients.
* ``jacobi``: the degree 0 polynomial.
* ``newton:nlev=L,scale=s``: Newton form of degree ``2**L - 1``.
* ``chebyshev:m=M,scale=s``: Chebyshev form of any degree ``M``.

A scale slightly above one (``1.01`` for small problems, ``1.001`` for
large ones) keeps the smallest eigenvalues of the preconditioned operator
apart, which usually halves the iterations again at high degree.

Forms are resolved from ``NC_PRECONDITIONER_FACTORIES`` in
:mod:`ncprec.config`, so further forms can be plugged in by import path.

Reports
-------

Solve reports hold the full configuration, the bounds, the polynomial
parameters, exact operation counters and timings. They are versioned
JSON documents, and ``ncprec solve --config report.json`` reruns the
experiment a report describes.
"""

from .ext import NCPrec

__version__ = "1.0.0"

__all__ = (
    "__version__",
    "NCPrec",
)
