from __future__ import annotations

import json
import logging
import os
from typing import TYPE_CHECKING, Any

from derham_lab._complex import SimplicialComplex, build_complex
from derham_lab._errors import ComplexError
from derham_lab.forms._piecewise import PiecewiseForm
from derham_lab.whitney._cochain import Cochain

if TYPE_CHECKING:
    from collections.abc import Mapping

logger = logging.getLogger(__name__)


def _read_json(path: str | os.PathLike) -> Any:
    if not os.path.exists(path):
        raise FileNotFoundError(f"No file found at {path}")
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ComplexError(f"Malformed JSON in {path}: {e}") from None


def dump_json(data: Mapping[str, Any] | list, path: str | os.PathLike | None = None) -> str:
    """Serialize a report deterministically, optionally writing it to ``path``.

    Keys are sorted so equal inputs give byte identical output.
    """
    text = json.dumps(data, sort_keys=True, indent=2)
    if path is not None:
        with open(path, "w") as f:
            f.write(text + "\n")
    return text


def load_complex(path: str | os.PathLike) -> SimplicialComplex:
    """Load a complex from a JSON description.

    The file holds ``{"vertices": [...], "maximal_simplices": [[...]],
    "edge_lengths": {"i-j": x}, "L": x}`` where everything but
    ``maximal_simplices`` is optional. The file stem is used as the name when
    none is given.

    Raises:
        FileNotFoundError: if ``path`` does not exist
        ComplexError: on malformed JSON or a malformed description
    """
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ComplexError(f"Expected a JSON object in {path}, got {type(data).__name__}")
    data.setdefault("name", os.path.splitext(os.path.basename(path))[0])
    complex = build_complex(data)
    logger.info(f"Loaded {complex!r} from {path}")
    return complex


def load_form(path: str | os.PathLike, complex: SimplicialComplex) -> PiecewiseForm:
    """Load a piecewise polynomial form keyed by facet, see :meth:`PiecewiseForm.to_dict`."""
    data = _read_json(path)
    form = PiecewiseForm.from_dict(data, complex)
    logger.info(f"Loaded a {form.degree}-form on {complex.name} from {path}")
    return form


def load_cochain(path: str | os.PathLike, complex: SimplicialComplex) -> Cochain:
    """Load a cochain keyed by ``"i-j-..."`` simplex strings, see :meth:`Cochain.to_dict`."""
    data = _read_json(path)
    return Cochain.from_dict(data, complex)
