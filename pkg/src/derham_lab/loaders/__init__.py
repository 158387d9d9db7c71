"""Subpackage for reading complexes, forms and cochains and for the reference complexes."""

from ._json import dump_json, load_cochain, load_complex, load_form
from ._reference import REFERENCE_NAMES, reference_complex

__all__ = [
    "REFERENCE_NAMES",
    "dump_json",
    "load_cochain",
    "load_complex",
    "load_form",
    "reference_complex",
]
