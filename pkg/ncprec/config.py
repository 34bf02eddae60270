# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""ncprec configuration file."""

NC_TOL = 1e-8
"""Relative residual tolerance of the PCG iteration."""

NC_MAXIT = 20000
"""Maximum number of PCG iterations."""

NC_SCALE_DEMO = 1.01
"""Theta multiplier used by the desk-scale spectral experiments."""

NC_SCALE_BENCH = 1.001
"""Theta multiplier used by benchmark runs on large problems."""

NC_POWER_TOL = 1e-4
"""Relative change of the Rayleigh quotient stopping the power method."""

NC_POWER_MAXIT = 200
"""Iteration budget of the power method."""

NC_DACG_TOL = 1e-2
"""Relative eigenresidual tolerance of the smallest-eigenvalue estimator."""

NC_DACG_MAXIT = 2000
"""Iteration budget of the smallest-eigenvalue estimator."""

NC_DACG_RESTART = 50
"""Number of iterations after which the search direction is restarted."""

NC_EIGEN_SEED = 1234
"""Seed of the pseudorandom starting vectors and random exact solutions.

Recorded in every report.
"""

NC_RHS = "random"
"""Exact solution behind the right-hand side of benchmark solves.

``random`` draws it uniform in ``[-1, 1]`` from the seed, ``ones`` is the
all-ones vector.
"""

NC_THREADS = 1
"""Number of threads used by the CSR kernel.

Overridden by the ``NC_THREADS`` environment variable and by ``--threads``.
A value of 1 keeps every kernel serial and bitwise deterministic.
"""

NC_ANALYTIC_MAX_N = 10**7
"""Largest problem whose analytic spectrum may be enumerated."""

NC_ASSEMBLE_MAX_N = 2 * 10**7
"""Largest model problem that may be assembled in CSR form.

Larger model problems are only available in stencil form.
"""

NC_LOAD_SYMMETRY_RTOL = 1e-12
"""Tolerated asymmetry of loaded matrices, relative to max(abs(a_ij))."""

NC_CLUSTER_RATIO = 1.1
"""Eigenvalues below ``ratio * min`` count towards the clustering indicator."""

NC_POSITIVITY_GRID = 1000
"""Number of points used to check positivity of the polynomial."""

NC_CHI_MAX_NLEV = 30
"""Deepest level accepted by the doubling sequence."""

NC_REPORT_SCHEMA = 1
"""Version of the JSON report schema."""

NC_PRECONDITIONER_FACTORIES = {
    "none": "ncprec.polyprec:identity_factory",
    "jacobi": "ncprec.polyprec:jacobi_factory",
    "newton": "ncprec.polyprec:newton_factory",
    "chebyshev": "ncprec.polyprec:chebyshev_factory",
}
"""Import paths of the preconditioner factories, by form name.

A factory is called as ``factory(op, bounds, **options)`` and returns an
object with ``apply(r)``, ``degree`` and ``params``.
"""

NC_STORAGE_FACTORY = "ncprec.storage:pyfs_storage_factory"
"""Import path of factory used to create a storage instance."""
