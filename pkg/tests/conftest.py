from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from nilpotent_graph.families import parse_group_spec
from nilpotent_graph.nilgraph import build_graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_GROUPS: dict = {}
_GRAPHS: dict = {}


def group(spec: str):
    if spec not in _GROUPS:
        _GROUPS[spec] = parse_group_spec(spec)
    return _GROUPS[spec]


def graph(spec: str):
    if spec not in _GRAPHS:
        _GRAPHS[spec] = build_graph(group(spec))
    return _GRAPHS[spec]


@pytest.fixture
def get_group():
    return group


@pytest.fixture
def get_graph():
    return graph


CRITERIA: list = []


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, problems: list) -> None:
        status = "PASS" if not problems else "FAIL"
        line = f"criterion {number:>2} {status}: {title}"
        if problems:
            line += " | " + "; ".join(problems)
        CRITERIA.append((number, line))
        print(line)
        assert not problems, line

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(CRITERIA):
            terminalreporter.write_line(line)
