import os
import sys

sys.path.insert(0, os.path.abspath("../../src"))

project = "Levyscope"
copyright = "2026, Levyscope developers"
author = "Levyscope developers"
import levyscope

release = levyscope.__version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "myst_parser",
]

templates_path = ["_templates"]
exclude_patterns = []

# MyST-Parser configuration
myst_heading_anchors = 3
myst_all_links_external = False
myst_enable_extensions = ["colon_fence", "dollarmath"]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

suppress_warnings = [
    "myst.xref_missing",
]

# numpy typing aliases autodoc cannot resolve
nitpick_ignore = [
    ("py:class", "numpy.ndarray"),
    ("py:class", "numpy.random._generator.Generator"),
]

autodoc_default_options = {
    "imported-members": False,
    "show-inheritance": True,
}
autodoc_class_content = "init"
autodoc_member_order = "bysource"

html_theme = "furo"
html_static_path = ["_static"]

html_theme_options = {
    "source_directory": "docs/source/",
    "light_css_variables": {
        "color-brand-primary": "#6A1B9A",
        "color-brand-content": "#6A1B9A",
    },
    "dark_css_variables": {
        "color-brand-primary": "#CE93D8",
        "color-brand-content": "#CE93D8",
    },
}

html_title = "Levyscope"
