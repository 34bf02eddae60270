# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Storage related module."""

from fs.opener import open_fs as opendir
from fs.path import basename, dirname

from .base import FileStorage


class PyFSFileStorage(FileStorage):
    """File system storage using PyFilesystem for access the file.

    ``fileurl`` is either a plain path or a PyFilesystem URL such as
    ``osfs:///data/matrices/lap.mtx``; the directory part is opened as a
    filesystem and the last component is the file name.
    """

    def _get_fs(self, create_dir=True):
        """Return tuple with filesystem and filename."""
        filedir = dirname(self.fileurl) or "."
        filename = basename(self.fileurl)

        return (
            opendir(filedir, writeable=True, create=create_dir),
            filename,
        )

    def open(self, mode="r"):
        """Open file.

        The caller is responsible for closing the file.
        """
        create_dir = mode[0] != "r"
        fs, path = self._get_fs(create_dir=create_dir)
        return fs.open(path, mode=mode)

    def exists(self):
        """Check if the file exists."""
        try:
            fs, path = self._get_fs(create_dir=False)
        except Exception:
            return False
        return fs.exists(path)


def pyfs_storage_factory(fileurl, filestorage_class=PyFSFileStorage):
    """Get factory function for creating a PyFS file storage instance."""
    assert fileurl
    return filestorage_class(fileurl)
