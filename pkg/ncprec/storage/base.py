# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""File storage base module."""

import hashlib

from ..errors import NCPrecError


class StorageError(NCPrecError):
    """Exception raised when a storage operation fails."""


class FileStorage(object):
    """Base class for storage interface to a single file."""

    def __init__(self, fileurl):
        """Initialize storage object."""
        self.fileurl = fileurl

    def open(self, mode="r"):
        """Open the file.

        The caller is responsible for closing the file.
        """
        raise NotImplementedError

    def exists(self):
        """Check if the file exists."""
        raise NotImplementedError

    #
    # Default implementation
    #
    def read_text(self):
        """Read the whole file as text."""
        try:
            with self.open(mode="r") as fp:
                return fp.read()
        except NCPrecError:
            raise
        except Exception as e:
            raise StorageError("Could not read {0}: {1}".format(self.fileurl, e))

    def save(self, text):
        """Write text to the file, replacing its content.

        :returns: The checksum of the written content.
        """
        try:
            with self.open(mode="w") as fp:
                fp.write(text)
        except NCPrecError:
            raise
        except Exception as e:
            raise StorageError("Could not write {0}: {1}".format(self.fileurl, e))
        return self._compute_checksum(text.encode("utf-8"))

    def checksum(self):
        """Compute checksum of file."""
        fp = self.open(mode="rb")
        try:
            return self._compute_checksum(fp.read())
        finally:
            fp.close()

    #
    # Helpers
    #
    def _init_hash(self):
        """Initialize message digest object.

        Overwrite this method if you want to use different checksum
        algorithm for your storage backend.
        """
        return "md5", hashlib.md5()

    def _compute_checksum(self, data):
        """Compute the ``algo:hexdigest`` checksum of raw bytes."""
        algo, m = self._init_hash()
        m.update(data)
        return "{0}:{1}".format(algo, m.hexdigest())
