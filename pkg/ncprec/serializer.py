# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""JSON serializers of configurations and solve reports."""

import json

from marshmallow import EXCLUDE, Schema, ValidationError, fields, post_load

from .bench import ExperimentConfig
from .errors import InvalidParameterError
from .polyprec import ChebyshevParams, NewtonParams
from .utils import array_digest


class ExperimentConfigSchema(Schema):
    """Schema for an experiment configuration."""

    class Meta:
        """Ignore keys written by newer versions."""

        unknown = EXCLUDE

    problem = fields.Str(allow_none=True)
    matrix = fields.Str(allow_none=True)
    prec = fields.Str()
    tol = fields.Float()
    maxit = fields.Integer()
    eigs = fields.Str()
    power_tol = fields.Float()
    power_maxit = fields.Integer()
    dacg_tol = fields.Float()
    dacg_maxit = fields.Integer()
    seed = fields.Integer()
    rhs = fields.Str()
    threads = fields.Integer()
    repetitions = fields.Integer()
    form = fields.Str()
    out = fields.Str(allow_none=True)

    @post_load
    def make_config(self, data, **kwargs):
        """Create the :class:`~ncprec.bench.ExperimentConfig`."""
        try:
            return ExperimentConfig(**data)
        except InvalidParameterError as e:
            raise ValidationError(e.description)


class SpectralBoundsSchema(Schema):
    """Schema for spectral bounds."""

    alpha0 = fields.Float()
    beta0 = fields.Float()
    kappa = fields.Float(dump_only=True)
    method = fields.Str()
    alpha_iters = fields.Integer()
    beta_iters = fields.Integer()
    matvecs = fields.Integer()
    converged = fields.Boolean()
    seed = fields.Integer(allow_none=True)


class NewtonParamsSchema(Schema):
    """Schema for Newton parameters."""

    form = fields.Constant("newton", dump_only=True)
    nlev = fields.Integer()
    degree = fields.Integer()
    scale = fields.Float()
    alpha0 = fields.Float(allow_none=True)
    beta0 = fields.Float(allow_none=True)
    zeta = fields.List(fields.Float())


class ChebyshevParamsSchema(Schema):
    """Schema for Chebyshev parameters.

    The ``rho`` sequence is only recorded as a digest.
    """

    form = fields.Constant("chebyshev", dump_only=True)
    m = fields.Integer()
    degree = fields.Integer()
    scale = fields.Float()
    alpha = fields.Float()
    beta = fields.Float()
    theta = fields.Float()
    delta = fields.Float()
    sigma = fields.Float()
    rho_digest = fields.Method("dump_rho_digest", dump_only=True)

    def dump_rho_digest(self, o):
        """Dump the digest of ``rho_0 .. rho_m``."""
        return array_digest(o.rho)


class SolveReportSchema(Schema):
    """Schema for the counters of a PCG solve."""

    iters = fields.Integer()
    ddot = fields.Integer()
    matvec = fields.Integer()
    prec_applies = fields.Integer()
    degree = fields.Integer()
    rel_res = fields.Float()
    true_rel_res = fields.Float()
    wall_time = fields.Float()
    converged = fields.Boolean()


class SolveRecordSchema(Schema):
    """Schema for a full solve report."""

    schema = fields.Integer()
    config = fields.Nested(ExperimentConfigSchema)
    problem = fields.Method("dump_problem", dump_only=True)
    bounds = fields.Nested(SpectralBoundsSchema)
    prec = fields.Str()
    preconditioner = fields.Str()
    degree = fields.Integer()
    params = fields.Method("dump_params", dump_only=True)
    report = fields.Nested(SolveReportSchema)
    setup_time = fields.Float()
    times = fields.List(fields.Float())
    time_min = fields.Float()
    time_mean = fields.Float()
    error_inf = fields.Float()
    operator_applications = fields.Integer()

    def dump_problem(self, o):
        """Dump the problem description."""
        p = o.problem
        return {
            "name": p.name,
            "kind": p.kind,
            "nx": p.nx,
            "n": p.n,
            "nnz": p.nnz,
            "checksum": p.checksum,
        }

    def dump_params(self, o):
        """Dump the polynomial parameters, if any."""
        if isinstance(o.params, NewtonParams):
            return NewtonParamsSchema().dump(o.params)
        if isinstance(o.params, ChebyshevParams):
            return ChebyshevParamsSchema().dump(o.params)
        return None


class ScalingRowSchema(Schema):
    """Schema for a speedup and efficiency row."""

    p = fields.Integer()
    T_p = fields.Float()
    S_p = fields.Float()
    E_p = fields.Float()


def _format_args(pretty=False):
    if pretty:
        return dict(indent=2, separators=(", ", ": "))
    else:
        return dict(indent=None, separators=(",", ":"))


def json_serializer(data, schema_class, many=False, pretty=False):
    """Serialize data to a JSON string with the given schema.

    :param data: Object or list of objects to serialize.
    :param schema_class: Marshmallow schema class.
    :param many: Serialize a list.
    :param pretty: Indent the output.
    """
    return json.dumps(schema_class().dump(data, many=many), **_format_args(pretty))


def load_config(text):
    """Load an experiment configuration from JSON text.

    Accepts a bare configuration or a full solve report embedding one.

    :raises ncprec.errors.InvalidParameterError: On malformed input.
    """
    try:
        data = json.loads(text)
    except ValueError as e:
        raise InvalidParameterError("Invalid JSON: {0}".format(e))
    if not isinstance(data, dict):
        raise InvalidParameterError("Expected a JSON object.")
    if "config" in data:
        data = data["config"]
    try:
        return ExperimentConfigSchema().load(data)
    except ValidationError as e:
        raise InvalidParameterError("Invalid configuration: {0}".format(e.messages))
