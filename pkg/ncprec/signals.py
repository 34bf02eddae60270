# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Signals for ncprec."""

from blinker import Namespace

_signals = Namespace()

pcg_iteration = _signals.signal("pcg-iteration")
"""PCG iteration signal.

Sent at the end of every PCG iteration with the keyword arguments
``iteration``, ``x``, ``r`` and ``rel_res``. The vectors are the solver's
work arrays: copy them if they must outlive the handler.
"""

eigen_iteration = _signals.signal("eigen-iteration")
"""Eigenvalue estimator iteration signal.

Sent by the estimators (sender ``"power"`` or ``"dacg"``) with the keyword
arguments ``iteration`` and ``estimate``.
"""

solve_finished = _signals.signal("solve-finished")
"""Solve finished signal.

Sent by the benchmark harness once a solve is complete, with the
keyword argument ``report`` holding the full solve record.
"""
