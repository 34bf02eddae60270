# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Sphinx configuration."""

from ncprec import __version__

# -- General configuration ------------------------------------------------

# Add any Sphinx extension module names here, as strings. They can be
# extensions coming with Sphinx (named 'sphinx.ext.*') or your custom
# ones.
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
]

nitpick_ignore = [
    ("py:class", "numpy.ndarray"),
    ("py:class", "np.ndarray"),
    ("py:class", "scipy.sparse.csr_matrix"),
    ("py:class", "click.core.Context"),
    ("py:class", "DefaultGroup"),
    ("py:class", "fs.base.FS"),
]

# Add any paths that contain templates here, relative to this directory.
templates_path = ["_templates"]

# The suffix(es) of source filenames.
source_suffix = ".rst"

# The master toctree document.
master_doc = "index"

# General information about the project.
project = "ncprec"
copyright = "2024, ncprec contributors"
author = "ncprec contributors"

# The version info for the project you're documenting, acts as replacement for
# |version| and |release|, also used in various other places throughout the
# built documents.
version = __version__

# The full version, including alpha/beta/rc tags.
release = version

language = "en"

exclude_patterns = []

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = "sphinx"

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"

html_theme_options = {
    "description": "Newton-Chebyshev polynomial preconditioners for CG.",
    "github_button": False,
    "github_banner": False,
    "show_powered_by": False,
}

html_sidebars = {
    "**": [
        "about.html",
        "navigation.html",
        "relations.html",
        "searchbox.html",
    ]
}

# Output file base name for HTML help builder.
htmlhelp_basename = "ncprec_namedoc"

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, "ncprec", "ncprec Documentation", [author], 1)]

# Example configuration for intersphinx: refer to the Python standard library.
intersphinx_mapping = {
    "click": ("https://click.palletsprojects.com/", None),
    "marshmallow": ("https://marshmallow.readthedocs.io/en/stable/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "python": ("https://docs.python.org/3", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

# Autodoc configuraton.
autoclass_content = "both"
autodoc_typehints = "description"
