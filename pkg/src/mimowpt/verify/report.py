"""JSON Schema validation of optimize reports."""

from __future__ import annotations

import json
from functools import cache
from importlib import resources
from typing import Any

import jsonschema

from mimowpt.exceptions.errors import ValidationError


def validate_json_schema(data: dict[str, Any] | list[Any], schema: dict[str, Any]) -> list[str]:
    """Validate data against JSON Schema.

    Returns:
        List of validation error messages, each prefixed with the dotted path
        of the offending value. Empty if valid.
    """
    validator = jsonschema.Draft7Validator(schema)
    errors: list[str] = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path))):
        path = ".".join(str(p) for p in error.absolute_path)
        errors.append(f"{path}: {error.message}" if path else error.message)
    return errors


@cache
def report_schema() -> dict[str, Any]:
    """The bundled schema of the optimize report."""
    text = resources.files("mimowpt.verify").joinpath("report.schema.json").read_text("utf-8")
    schema: dict[str, Any] = json.loads(text)
    return schema


def validate_report(report: dict[str, Any]) -> dict[str, Any]:
    """Check an optimize report against the bundled schema.

    Returns:
        The report, unchanged.

    Raises:
        ValidationError: Listing every schema violation.
    """
    errors = validate_json_schema(report, report_schema())
    if errors:
        raise ValidationError("Optimize report does not match its schema", errors=errors)
    return report
