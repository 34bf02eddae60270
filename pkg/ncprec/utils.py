# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Implementation of various utility functions."""

import hashlib

import numpy as np
from werkzeug.utils import import_string

from .errors import InvalidParameterError


def obj_or_import_string(value, default=None):
    """Import string or return object.

    :params value: Import path or class object to instantiate.
    :params default: Default object to return if the import fails.
    :returns: The imported object.
    """
    if isinstance(value, str):
        return import_string(value)
    elif value:
        return value
    return default


def load_or_import_from_config(key, config, default=None):
    """Load or import value from a config mapping.

    :returns: The loaded value.
    """
    return obj_or_import_string(config.get(key), default=default)


def _coerce(value):
    """Turn a textual option value into an int, a float or a string."""
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def parse_spec(value):
    """Parse a ``name:key=value,...`` specification string.

    >>> parse_spec("newton:nlev=5,scale=1.01")
    ('newton', {'nlev': 5, 'scale': 1.01})
    >>> parse_spec("lap2d:78")
    ('lap2d', {'arg': 78})
    >>> parse_spec("none")
    ('none', {})

    :returns: A ``(name, options)`` tuple. A bare positional value is
        stored under the ``arg`` key.
    """
    name, _, rest = value.strip().partition(":")
    if not name:
        raise InvalidParameterError("Empty specification {!r}.".format(value))
    options = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            key, val = "arg", key
        if not key or not val:
            raise InvalidParameterError(
                "Malformed option {!r} in {!r}.".format(item, value)
            )
        options[key.strip()] = _coerce(val.strip())
    return name.strip().lower(), options


def format_spec(name, options):
    """Render the inverse of :func:`parse_spec`.

    >>> format_spec("chebyshev", {"m": 15, "scale": 1.001})
    'chebyshev:m=15,scale=1.001'
    """
    if not options:
        return name
    parts = [
        str(v) if k == "arg" else "{0}={1}".format(k, v) for k, v in options.items()
    ]
    return "{0}:{1}".format(name, ",".join(parts))


def array_digest(values):
    """Compute an ``md5:`` digest of the float64 bytes of an array.

    :returns: String of the form ``"md5:<hex>"``.
    """
    data = np.ascontiguousarray(values, dtype=np.float64)
    return "md5:{0}".format(hashlib.md5(data.tobytes()).hexdigest())
