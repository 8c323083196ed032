"""Shared fixtures and pytest-html integration.

Structlog events emitted while a test runs are captured; when the test
fails they are attached to the HTML report (reports/report.html) so the
solver history of the failing case can be read next to the traceback.
"""

from __future__ import annotations

import json
from collections.abc import Iterator
from html import escape
from typing import Any

import numpy as np
import pytest
from structlog.testing import capture_logs

from mimowpt import REFERENCE_PARAMS, RectennaParams, SolverSettings, generate_rician
from mimowpt.channel import ChannelMatrix
from mimowpt.strategy.lemma import ScalarFunctionTable

# =============================================================================
# LOG EVENT TRACKING
# =============================================================================

_EVENTS = pytest.StashKey[list[dict[str, Any]]]()

# events beyond this are summarized, SCA runs can log thousands
_MAX_EVENTS = 200


def _events_to_html(events: list[dict[str, Any]]) -> str:
    pre_style = (
        "background: #f8f9fa; padding: 8px; border-radius: 3px; overflow-x: hidden; "
        "white-space: pre-wrap; word-break: break-word; font-size: 11px;"
    )
    shown = events[-_MAX_EVENTS:]
    lines = [json.dumps(e, default=str, sort_keys=True) for e in shown]
    skipped = len(events) - len(shown)
    header = f"Log events ({len(events)} total"
    header += f", first {skipped} omitted)" if skipped else ")"
    return f"""
    <div class="log-events" style="margin-top: 15px;">
        <h4 style="color: #dc3545; margin-bottom: 10px;">{header}</h4>
        <pre style="{pre_style} max-height: 400px;">{escape(chr(10).join(lines))}</pre>
    </div>
    """


def _create_html_extra(content: str) -> Any:
    """Create pytest-html extra HTML content."""
    try:
        from pytest_html import extras

        return extras.html(content)
    except ImportError:

        class HtmlExtra:
            def __init__(self, content: str) -> None:
                self.content = content
                self.name = "html"

        return HtmlExtra(content)


@pytest.fixture(autouse=True)
def log_events(request: pytest.FixtureRequest) -> Iterator[list[dict[str, Any]]]:
    """Structlog events of the running test."""
    with capture_logs() as events:
        request.node.stash[_EVENTS] = events
        yield events


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo[None]) -> Iterator[None]:
    """Add captured log events to the HTML report for failed tests."""
    outcome = yield
    report = outcome.get_result()  # type: ignore[attr-defined]

    if report.when == "call" and report.failed:
        events = item.stash.get(_EVENTS, [])
        if events:
            extra_item = _create_html_extra(_events_to_html(events))

            # Use 'extras' (pytest-html 4.x API), fallback to 'extra' (deprecated)
            if hasattr(report, "extras"):
                if report.extras is None:
                    report.extras = []
                report.extras.append(extra_item)
            else:
                if not hasattr(report, "extra") or report.extra is None:
                    report.extra = []
                report.extra.append(extra_item)


# =============================================================================
# FIXTURES
# =============================================================================

# at 2 m the path loss is about 46.6 dB, so a few watt saturate a 2x2 node
DESK_DISTANCE = 2.0


@pytest.fixture
def params() -> RectennaParams:
    return REFERENCE_PARAMS


@pytest.fixture
def fast_settings() -> SolverSettings:
    """One SCA run per power level with a short iteration cap."""
    return SolverSettings(n_restarts=1, sca_max_iter=40, eps_sca=1e-4)


@pytest.fixture
def channel_2x2() -> ChannelMatrix:
    return generate_rician(seed=7, n_t=2, n_e=2, distance=DESK_DISTANCE, k_factor=1.0)


@pytest.fixture
def channel_siso() -> ChannelMatrix:
    return generate_rician(seed=3, n_t=1, n_e=1, distance=DESK_DISTANCE, k_factor=1.0)


@pytest.fixture
def channel_miso() -> ChannelMatrix:
    """Two TX antennas, one rectenna."""
    return generate_rician(seed=5, n_t=2, n_e=1, distance=DESK_DISTANCE, k_factor=1.0)


@pytest.fixture
def nu_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, 41)


@pytest.fixture
def convex_table(nu_grid: np.ndarray) -> ScalarFunctionTable:
    return ScalarFunctionTable(nu_grid, nu_grid**2)


@pytest.fixture
def concave_table(nu_grid: np.ndarray) -> ScalarFunctionTable:
    return ScalarFunctionTable(nu_grid, np.sqrt(nu_grid))


@pytest.fixture
def sigmoid_table(nu_grid: np.ndarray) -> ScalarFunctionTable:
    """Clamped logistic, convex then concave then flat."""
    logistic = 1.0 / (1.0 + np.exp(-12.0 * (nu_grid - 0.5)))
    return ScalarFunctionTable(nu_grid, np.minimum(logistic, 0.9))
