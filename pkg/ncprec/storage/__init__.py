# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""File storage interface."""

from .base import FileStorage, StorageError
from .pyfs import PyFSFileStorage, pyfs_storage_factory

__all__ = (
    "FileStorage",
    "pyfs_storage_factory",
    "PyFSFileStorage",
    "StorageError",
)
