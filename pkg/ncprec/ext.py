# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Configuration state shared by the benchmark harness and the CLI."""

import inspect
import logging
import os

from werkzeug.utils import cached_property

from . import config
from .errors import InvalidParameterError
from .utils import load_or_import_from_config, obj_or_import_string, parse_spec

logger = logging.getLogger(__name__)

ENV_OVERRIDES = {"NC_THREADS": int}
"""Configuration keys that may be set from the environment, with their type."""


class NCPrec(object):
    """ncprec state.

    Holds a config mapping with every ``NC_*`` key of :mod:`ncprec.config`
    and resolves the configurable factories from it.
    """

    def __init__(self, overrides=None, environ=None):
        """Initialize state."""
        self.config = {}
        self.init_config(overrides=overrides, environ=environ)

    def init_config(self, overrides=None, environ=None):
        """Initialize configuration.

        Explicit ``overrides`` win over the environment, which wins over the
        defaults of :mod:`ncprec.config`.
        """
        overrides = dict(overrides or {})
        environ = os.environ if environ is None else environ
        for key, cast in ENV_OVERRIDES.items():
            if key in environ and key not in overrides:
                try:
                    overrides[key] = cast(environ[key])
                except ValueError:
                    raise InvalidParameterError(
                        "Invalid value {0!r} for {1}.".format(environ[key], key)
                    )
        self.config.update(overrides)
        for k in dir(config):
            if k.startswith("NC_"):
                self.config.setdefault(k, getattr(config, k))

    @cached_property
    def storage_factory(self):
        """Load default storage factory."""
        return load_or_import_from_config("NC_STORAGE_FACTORY", self.config)

    @cached_property
    def preconditioner_factories(self):
        """Load the preconditioner factories, by form name."""
        return {
            name: obj_or_import_string(path)
            for name, path in self.config["NC_PRECONDITIONER_FACTORIES"].items()
        }

    def storage(self, fileurl):
        """Get a file storage for a path or URL."""
        return self.storage_factory(fileurl)

    def preconditioner(self, spec, op, bounds):
        """Build a preconditioner from a ``form:key=value,...`` spec.

        :param spec: For example ``"newton:nlev=5,scale=1.01"``.
        :param op: Operator the preconditioner is a polynomial of.
        :param bounds: :class:`~ncprec.eigen.SpectralBounds` of ``op``.
        """
        name, options = parse_spec(spec)
        try:
            factory = self.preconditioner_factories[name]
        except KeyError:
            raise InvalidParameterError(
                "Unknown preconditioner {0!r} (expected one of {1}).".format(
                    name, ", ".join(sorted(self.preconditioner_factories))
                )
            )
        try:
            inspect.signature(factory).bind(op, bounds, **options)
        except TypeError as e:
            raise InvalidParameterError(
                "Invalid options for preconditioner {0!r}: {1}".format(spec, e)
            )
        precond = factory(op, bounds, **options)
        logger.debug("Built %s preconditioner of degree %d.", name, precond.degree)
        return precond
