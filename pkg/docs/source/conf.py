from __future__ import annotations
import sys
from pathlib import Path
from sphinx.roles import XRefRole

# ──────────────────────────────────────────────────────────────────────────────
# Paths
# ──────────────────────────────────────────────────────────────────────────────
ROOT = Path(__file__).resolve().parents[2]          # repo root
sys.path.insert(0, str(ROOT))                       # import project without install

# ──────────────────────────────────────────────────────────────────────────────
# Project meta
# ──────────────────────────────────────────────────────────────────────────────
project   = "foel-verify"
author    = "foel-verify contributors"
copyright = "2025, foel-verify contributors"
from foel_verify import __version__
release   = __version__


# ──────────────────────────────────────────────────────────────────────────────
# Extensions
# ──────────────────────────────────────────────────────────────────────────────
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "autoapi.extension",
]

# ──────────────────────────────────────────────────────────────────────────────
# Theme / HTML
# ──────────────────────────────────────────────────────────────────────────────
html_theme       = "furo"
html_title       = f"foel-verify {release}"
templates_path   = ["_templates"]

# ──────────────────────────────────────────────────────────────────────────────
# Навигация и compact-style
# ──────────────────────────────────────────────────────────────────────────────
add_module_names                     = False        # energy_table, а не foel_verify.experiments...
toc_object_entries_show_parents      = "hide"       # короче TOC
python_use_unqualified_type_names    = True
multi_line_parameter_list            = True         # каждый аргумент с новой строки
python_maximum_signature_line_length = 60           # длина, после которой рвём строку

# ──────────────────────────────────────────────────────────────────────────────
# Type-hints
# ──────────────────────────────────────────────────────────────────────────────
autodoc_typehints = "signature"

# ──────────────────────────────────────────────────────────────────────────────
# AutoAPI – строим flat API Reference
# ──────────────────────────────────────────────────────────────────────────────
autoapi_type              = "python"
autoapi_dirs              = [str(ROOT / "foel_verify")]
autoapi_root              = "reference/api"
autoapi_add_toctree_entry = True

autoapi_options = [
    "members",
    "undoc-members",
    "show-module-summary",
    "imported-members",
]

# ──────────────────────────────────────────────────────────────────────────────
# Intersphinx – ссылки на stdlib / numpy / scipy / networkx
# ──────────────────────────────────────────────────────────────────────────────
intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "networkx": ("https://networkx.org/documentation/stable/", None),
}


def setup(app):
    app.add_role("pyclass", XRefRole("class"))
    app.add_role("pyfunc", XRefRole("func"))
