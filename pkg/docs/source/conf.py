# -*- coding: utf-8 -*-
#
# diffshape documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import re
import sys

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('../..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

# General information about the project.
project = u'diffshape'
copyright = u'2026, the diffshape developers'


def _read_version():
    here = os.path.dirname(os.path.abspath(__file__))
    path = os.path.join(here, '..', '..', 'diffshape', '__init__.py')
    with open(path, 'r') as f:
        match = re.search(r'__version__ = ["\']([^"\']*)["\']', f.read())
    return match.group(1)


# The full version, including alpha/beta/rc tags.
release = _read_version()
# The short X.Y version.
version = '.'.join(release.split('.')[:2])

exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'
html_static_path = []
htmlhelp_basename = 'diffshapedoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    ('index', 'diffshape.tex', u'diffshape Documentation',
     u'the diffshape developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'diffshape', u'diffshape Documentation',
     [u'the diffshape developers'], 1)
]

# Cross-references into the Python and NumPy documentation.
intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}
