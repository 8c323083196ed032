"""Policy checks and report validation."""

from mimowpt.verify.checks import PolicyCheck
from mimowpt.verify.report import report_schema, validate_json_schema, validate_report

__all__ = [
    "PolicyCheck",
    "report_schema",
    "validate_json_schema",
    "validate_report",
]
