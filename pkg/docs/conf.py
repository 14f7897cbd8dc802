#
# uniest documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

from importlib.metadata import version as distribution_version

# -- General configuration ------------------------------------------------

extensions = []

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'uniest'
copyright = 'uniest contributors'

# The full version, including alpha/beta/rc tags.
release = distribution_version("django-uniest")
# The short X.Y version.
version = '.'.join(release.split('.')[:2])

exclude_patterns = ['_build']

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'

html_static_path = ['_static']

htmlhelp_basename = 'uniestdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [
    ('index', 'uniest.tex', 'uniest Documentation',
     'uniest contributors', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'uniest', 'uniest Documentation',
     ['uniest contributors'], 1),
    ('experiments', 'Experiments', 'Experiments',
     ['uniest contributors'], 2),
]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    ('index', 'uniest', 'uniest Documentation',
     'uniest contributors', 'uniest', 'Monte Carlo estimation of unknown unitaries.',
     'Miscellaneous'),
]
