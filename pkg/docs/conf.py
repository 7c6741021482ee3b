# Sphinx configuration for the hgorth documentation.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
]

source_suffix = '.rst'
master_doc = 'index'

project = 'hgorth'
copyright = '2026, hgorth developers'
author = 'hgorth developers'

with open(os.path.join(os.path.dirname(__file__), '..', 'hgorth', '_version.txt')) as f:
    version = f.read().strip()

release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'bizstyle'
htmlhelp_basename = 'hgorthdoc'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}

# Parameters: / Returns: sections
autodoc_member_order = 'bysource'
napoleon_numpy_docstring = False
