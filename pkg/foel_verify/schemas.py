"""
JSON Schemas of the documents the package reads and writes.
"""

from typing import Any

from jsonschema import Draft202012Validator, ValidationError

from .errors import InternalConsistencyError, InvalidInputError

TREE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "vertices": {"type": "integer", "minimum": 2},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "root": {"type": "integer", "minimum": 0},
    },
    "required": ["vertices", "edges"],
    "additionalProperties": False,
}

LIEB_MATTIS_MODEL_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "sites": {"type": "integer", "minimum": 2},
        "couplings": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {"type": "integer", "minimum": 0},
                    {"type": "integer", "minimum": 0},
                    {"type": "number"},
                ],
                "minItems": 3,
                "maxItems": 3,
            },
        },
        "a_sites": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "spins": {"type": "array", "items": {"type": "number"}},
    },
    "required": ["sites", "couplings", "a_sites"],
    "additionalProperties": False,
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "verdict": {"type": "boolean"},
        "margins": {"type": "array"},
        "violations": {"type": "array"},
        "tolerances": {"type": "object", "additionalProperties": {"type": "number"}},
        "versions": {
            "type": "object",
            "properties": {
                "foel-verify": {"type": "string"},
                "numpy": {"type": "string"},
                "scipy": {"type": "string"},
            },
            "required": ["foel-verify", "numpy", "scipy"],
        },
    },
    "required": ["verdict", "margins", "violations", "tolerances", "versions"],
}


def validate_input(document: Any, schema: dict[str, Any], what: str) -> None:
    """Validate a user document; failures become :class:`InvalidInputError`."""
    try:
        Draft202012Validator(schema).validate(document)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid {what}: {e.message}") from None


def validate_report(document: Any) -> None:
    """Our own output must always match; a mismatch is a bug."""
    try:
        Draft202012Validator(REPORT_SCHEMA).validate(document)
    except ValidationError as e:
        raise InternalConsistencyError(f"Report does not match its schema: {e.message}") from e
