"""JSON Schemas for input documents and emitted reports."""

from __future__ import annotations

import jsonschema

from .errors import SchemaError

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
EXT_RATIONAL = {"type": "string", "pattern": r"^(-?[0-9]+(/[0-9]+)?|inf|-inf)$"}
INTEGER_LITERAL = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+$"}]}
RATIONAL_LITERAL = {"anyOf": [{"type": "integer"}, RATIONAL]}

POLY = {
    "type": "object",
    "required": ["vars", "terms"],
    "properties": {
        "vars": {"type": "integer", "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["exp", "num"],
                "properties": {
                    "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "num": INTEGER_LITERAL,
                    "den": INTEGER_LITERAL,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

DOMAIN = {
    "type": "object",
    "properties": {
        "vars": {"type": "integer", "minimum": 1},
        "caps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["poly", "log_r"],
                "properties": {"poly": POLY, "log_r": RATIONAL_LITERAL},
                "additionalProperties": False,
            },
        },
        "cups": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["poly", "log_s"],
                "properties": {"poly": POLY, "log_s": RATIONAL_LITERAL},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_ENTRY = {
    "type": "object",
    "required": ["num"],
    "properties": {"num": POLY, "den": POLY},
    "additionalProperties": False,
}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _ENTRY}}

SYSTEM = {
    "type": "object",
    "required": ["p", "d", "mu", "G"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 1},
        "mu": {"type": "integer", "minimum": 1},
        # one matrix per variable; a bare matrix is accepted when d = 1
        "G": {"anyOf": [{"type": "array", "minItems": 1, "items": _MATRIX}, _MATRIX]},
        "domain": DOMAIN,
    },
    "additionalProperties": False,
}

TABLE_REPORT = {
    "type": "object",
    "required": ["command", "columns", "rows"],
    "properties": {
        "command": {"type": "string"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": {"type": ["string", "boolean", "integer"]},
            },
        },
    },
    "additionalProperties": False,
}

AUDIT_REPORT = {
    "type": "object",
    "required": ["command", "pass", "audits"],
    "properties": {
        "command": {"const": "audit"},
        "pass": {"type": "boolean"},
        "audits": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["pass", "violations"],
                "properties": {
                    "pass": {"type": "boolean"},
                    "violations": {"type": "array", "items": {"type": "object"}},
                },
            },
        },
    },
    "additionalProperties": False,
}


def validate(instance, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(instance, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(k) for k in exc.absolute_path) or "<root>"
        raise SchemaError(f"{what}: {exc.message} at {where}") from exc
