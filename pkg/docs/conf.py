# Sphinx configuration for starkres

import os
import sys

sys.path.insert(0, os.path.abspath("../"))

import starkres  # noqa: E402


project = starkres.__name__
copyright = starkres.__copyright__
author = starkres.__author__
version = starkres.__version__
release = starkres.__version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
]

autodoc_member_order = "bysource"
napoleon_google_docstring = True

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "starkresdoc"

man_pages = [(master_doc, "starkres", "starkres Documentation", [author], 1)]
