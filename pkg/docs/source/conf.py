# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/stable/config

import os
import sys
from datetime import datetime

sys.path.insert(0, os.path.abspath('../../src/'))

from dpfacility import __version__  # noqa: E402

# -- Project information -----------------------------------------------------

project = 'dpfacility'
current_year = str(datetime.now().year)
copyright = current_year + ', dpfacility developers'
author = 'dpfacility developers'

version = __version__
release = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.autosummary',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = ['.rst']
master_doc = 'index'
language = None
exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'dpfacilitydoc'

# -- Options for other outputs -----------------------------------------------

latex_documents = [
    (master_doc, 'dpfacility.tex', 'dpfacility Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'dpfacility', 'dpfacility Documentation', [author], 1)
]
