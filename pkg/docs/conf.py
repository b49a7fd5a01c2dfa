import os
import sys
sys.path.insert(0, os.path.abspath('..'))

project = 'lccbench'
author = 'lccbench contributors'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
]

html_theme = 'alabaster'
