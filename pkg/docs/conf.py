# Sphinx configuration for the SimpleHiggs documentation.

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'src')))

from simplehiggs import __version__  # noqa: E402

project = 'SimpleHiggs'
copyright = '2024, SimpleHiggs contributors'
author = 'SimpleHiggs contributors'
release = __version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.todo',
    'sphinx_autodoc_typehints',
    'recommonmark',
]

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']

todo_include_todos = True
