# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Sphinx configuration of the SpanGrid documentation."""

from __future__ import print_function

import os

suppress_warnings = ["image.nonlocal_uri"]

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx_click.ext",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "spangrid"
copyright = "2025-2026 SpanGrid contributors"
author = "SpanGrid contributors"

# Get the version string. Cannot be done with import!
g = {}
with open(os.path.join("..", "spangrid", "version.py"), "rt") as fp:
    exec(fp.read(), g)
    version = g["__version__"]

release = version
language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"
todo_include_todos = False

html_theme = "alabaster"
html_theme_options = {
    "description": """<p>SpanGrid tags nested named entities by scoring
                      every span of a sentence on a grid and decoding
                      the grid greedily.</p>""",
    "github_button": False,
    "show_powered_by": False,
    "nosidebar": True,
}
html_sidebars = {
    "**": ["about.html", "navigation.html", "relations.html", "searchbox.html"]
}
htmlhelp_basename = "spangriddoc"

latex_documents = [
    (master_doc, "spangrid.tex", "SpanGrid Documentation", author, "manual"),
]
man_pages = [(master_doc, "spangrid", "SpanGrid Documentation", [author], 1)]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}
