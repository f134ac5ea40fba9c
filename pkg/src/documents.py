"""JSON interchange documents: schemas, parsing and canonical emission.

Rationals travel as lowest-terms strings ("p" or "p/q"); complex values as
[re, im] pairs. Input documents are validated with jsonschema (Draft 2020-12)
before conversion. A `space` field may hold an inline space document or a path
to one, resolved relative to the referring document.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from src.algebra_core import AlgebraElement, CRational, FiniteSpace, element, make_space
from src.errors import DocumentError
from src.forms import BilinearForm, ComplexForm, FormDecomposition, Functional
from src.preservers import BiopCertificate, LinearMap, PreserverStructure, reconstruct
from src.utils import FRACTION_PATTERN, format_fraction, parse_fraction, rationalize

DOCUMENT_KINDS = ("space", "element", "functional", "form", "map")


def build_schemas(float_input: bool = False) -> dict[str, dict]:
    """Returns the input schemas keyed by document kind.

    Args:
        float_input: Whether JSON numbers are accepted in place of fraction strings.
    """
    fraction: dict = {"type": "string", "pattern": FRACTION_PATTERN.pattern}
    if float_input:
        fraction = {"anyOf": [fraction, {"type": "number"}]}
    space = {
        "type": "object",
        "properties": {
            "points": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
            "sigma": {"type": "object", "additionalProperties": {"type": "string"}},
        },
        "required": ["points"],
        "additionalProperties": False,
    }
    defs = {
        "fraction": fraction,
        "complex": {"type": "array", "items": {"$ref": "#/$defs/fraction"}, "minItems": 2, "maxItems": 2},
        "space": space,
        "spaceRef": {"oneOf": [{"type": "string"}, {"$ref": "#/$defs/space"}]},
        "matrix": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/fraction"}}},
    }

    def _object(properties: dict) -> dict:
        return {
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "$defs": defs,
            "type": "object",
            "properties": properties,
            "required": list(properties),
            "additionalProperties": False,
        }

    space_schema = {"$schema": "https://json-schema.org/draft/2020-12/schema", "$defs": defs, **space}
    return {
        "space": space_schema,
        "element": _object(
            {
                "space": {"$ref": "#/$defs/spaceRef"},
                "values": {"type": "object", "additionalProperties": {"$ref": "#/$defs/complex"}},
            }
        ),
        "functional": _object(
            {
                "space": {"$ref": "#/$defs/spaceRef"},
                "coefficients": {"type": "array", "items": {"$ref": "#/$defs/fraction"}},
            }
        ),
        "form": _object({"space": {"$ref": "#/$defs/spaceRef"}, "matrix": {"$ref": "#/$defs/matrix"}}),
        "map": _object(
            {
                "domain": {"$ref": "#/$defs/spaceRef"},
                "codomain": {"$ref": "#/$defs/spaceRef"},
                "matrix": {"$ref": "#/$defs/matrix"},
            }
        ),
    }


class DocumentReader:
    """Validates and converts input documents into library objects.

    Attributes:
        float_input: Whether JSON numbers are accepted and rationalized.
        tolerance: Rationalization tolerance for float input.
    """

    def __init__(self, float_input: bool = False, tolerance: float = 1e-9):
        self.float_input = float_input
        self.tolerance = tolerance
        self.validators = {kind: Draft202012Validator(schema) for kind, schema in build_schemas(float_input).items()}

    def load(self, path: Union[str, Path], kind: str) -> Any:
        """Reads a document file of the given kind.

        Raises:
            DocumentError: On unreadable files, malformed JSON, schema violations or invalid content.
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise DocumentError(f"Cannot read {path}: {e}") from e
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"{path}: {e.msg}", line=e.lineno, column=e.colno) from e
        logging.debug(f"Loaded {kind} document from {path}")
        return self.parse(doc, kind, base_dir=path.parent)

    def parse(self, doc: Any, kind: str, base_dir: Optional[Path] = None) -> Any:
        """Converts an already decoded document.

        Args:
            doc: The decoded JSON value.
            kind: One of DOCUMENT_KINDS.
            base_dir: Directory against which space references are resolved.
        """
        if kind not in self.validators:
            raise DocumentError(f"Unknown document kind {kind!r}")
        error = best_match(self.validators[kind].iter_errors(doc))
        if error is not None:
            location = "/".join(str(p) for p in error.absolute_path) or "<root>"
            raise DocumentError(f"Invalid {kind} document at {location}: {error.message}")
        base_dir = base_dir or Path(".")
        try:
            if kind == "space":
                return make_space(doc["points"], doc.get("sigma"))
            if kind == "element":
                space = self._space(doc["space"], base_dir)
                values = {label: CRational(*map(self._number, pair)) for label, pair in doc["values"].items()}
                return element(space, values)
            if kind == "functional":
                space = self._space(doc["space"], base_dir)
                return Functional(space, tuple(map(self._number, doc["coefficients"])))
            if kind == "form":
                space = self._space(doc["space"], base_dir)
                return BilinearForm(space, tuple(tuple(map(self._number, row)) for row in doc["matrix"]))
            domain = self._space(doc["domain"], base_dir)
            codomain = self._space(doc["codomain"], base_dir)
            return LinearMap(domain, codomain, tuple(tuple(map(self._number, row)) for row in doc["matrix"]))
        except DocumentError:
            raise
        except (ValueError, OverflowError) as e:
            raise DocumentError(f"Invalid {kind} document: {e}") from e

    def _space(self, ref: Union[str, dict], base_dir: Path) -> FiniteSpace:
        if isinstance(ref, str):
            return self.load(base_dir / ref, "space")
        return self.parse(ref, "space", base_dir)

    def _number(self, value: Union[str, int, float]) -> Fraction:
        if isinstance(value, str):
            return parse_fraction(value)
        if isinstance(value, bool):
            raise ValueError(f"Not a number: {value!r}")
        return rationalize(value, self.tolerance)


def _complex(value: CRational) -> list[str]:
    return [format_fraction(value.re), format_fraction(value.im)]


def space_to_doc(space: FiniteSpace) -> dict:
    return {"points": list(space.points), "sigma": space.sigma_map()}


def element_to_doc(x: AlgebraElement) -> dict:
    return {"space": space_to_doc(x.space), "values": {p: _complex(v) for p, v in zip(x.space.points, x.values)}}


def functional_to_doc(f: Functional) -> dict:
    return {"space": space_to_doc(f.space), "coefficients": [format_fraction(c) for c in f.coefficients]}


def form_to_doc(V: BilinearForm) -> dict:
    return {"space": space_to_doc(V.space), "matrix": [[format_fraction(v) for v in row] for row in V.matrix]}


def map_to_doc(T: LinearMap) -> dict:
    return {
        "domain": space_to_doc(T.domain),
        "codomain": space_to_doc(T.codomain),
        "matrix": [[format_fraction(v) for v in row] for row in T.matrix],
    }


def decomposition_to_doc(decomposition: FormDecomposition) -> dict:
    return {
        "phi1": functional_to_doc(decomposition.phi1),
        "phi2": functional_to_doc(decomposition.phi2),
        "verified": True,
    }


def complex_form_to_doc(W: ComplexForm) -> dict:
    return {"space": space_to_doc(W.space), "matrix": [[_complex(v) for v in row] for row in W.matrix]}


def structure_to_doc(structure: PreserverStructure) -> dict:
    return {
        "domain": space_to_doc(structure.domain),
        "codomain": space_to_doc(structure.codomain),
        "z1": list(structure.z1),
        "z2": list(structure.z2),
        "z3": list(structure.z3),
        "phi": dict(structure.phi),
        "a1": {s: _complex(v) for s, v in structure.a1.items()},
        "a2": {s: _complex(v) for s, v in structure.a2.items()},
    }


def certificate_to_doc(certificate: BiopCertificate) -> dict:
    return {
        "structure": structure_to_doc(certificate.structure),
        "orbit_map": dict(certificate.orbit_map),
        "determinants": {s: format_fraction(d) for s, d in certificate.determinants.items()},
        "inverse_structure": structure_to_doc(certificate.inverse),
        "inverse": map_to_doc(reconstruct(certificate.inverse)),
    }


def dumps(doc: Any) -> str:
    """Canonical emission: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
