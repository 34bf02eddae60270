# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Utility tests."""

import numpy as np
import pytest

from ncprec.errors import InvalidParameterError
from ncprec.polyprec import newton_factory
from ncprec.utils import (
    array_digest,
    format_spec,
    load_or_import_from_config,
    obj_or_import_string,
    parse_spec,
)


def test_parse_spec():
    """Test specification strings."""
    assert parse_spec("newton:nlev=5,scale=1.01") == (
        "newton",
        {"nlev": 5, "scale": 1.01},
    )
    assert parse_spec(" Chebyshev : m = 15 ") == ("chebyshev", {"m": 15})
    assert parse_spec("lap3d:32") == ("lap3d", {"arg": 32})
    assert parse_spec("file:name=lap.mtx") == ("file", {"name": "lap.mtx"})
    assert parse_spec("none") == ("none", {})
    pytest.raises(InvalidParameterError, parse_spec, "")
    pytest.raises(InvalidParameterError, parse_spec, ":m=3")
    pytest.raises(InvalidParameterError, parse_spec, "newton:nlev=")


def test_format_spec():
    """Test specification strings are rendered back."""
    assert format_spec("none", {}) == "none"
    assert format_spec("lap2d", {"arg": 78}) == "lap2d:78"
    spec = format_spec("newton", {"nlev": 5, "scale": 1.001})
    assert parse_spec(spec) == ("newton", {"nlev": 5, "scale": 1.001})


def test_obj_or_import_string():
    """Test import paths and objects."""
    assert obj_or_import_string("ncprec.polyprec:newton_factory") is newton_factory
    assert obj_or_import_string(newton_factory) is newton_factory
    assert obj_or_import_string(None, default=len) is len
    config = {"FACTORY": "ncprec.polyprec.newton_factory"}
    assert load_or_import_from_config("FACTORY", config) is newton_factory
    assert load_or_import_from_config("MISSING", config) is None


def test_array_digest():
    """Test digests depend on the float64 bytes only."""
    digest = array_digest([1.0, 2.0])
    assert digest.startswith("md5:")
    assert digest == array_digest(np.array([1, 2], dtype=np.int32))
    assert digest != array_digest([1.0, 2.0000000000000004])
