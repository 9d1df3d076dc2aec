"""Shared fixtures and the acceptance-summary reporter.

Tests marked ``@pytest.mark.acceptance("C1", "...")`` get one PASS/FAIL line
each in the terminal summary so the acceptance gate is auditable at a glance.
"""

from __future__ import annotations

import numpy as np
import pytest

from itsa.arma import iid
from itsa.design import build_design
from itsa.periods import Period
from itsa.simulate import SimulationSpec, gen_its_dataset

_ACCEPTANCE_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(id, description): acceptance-criterion test"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call":
        return
    crit_id, desc = marker.args
    if hasattr(rep, "wasxfail"):
        status = "FAIL (expected: known tolerance defect)"
    elif rep.passed:
        status = "PASS"
    elif rep.failed:
        status = "FAIL"
    else:
        status = rep.outcome.upper()
    _ACCEPTANCE_RESULTS[crit_id] = (status, desc)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit_id in sorted(_ACCEPTANCE_RESULTS):
        status, desc = _ACCEPTANCE_RESULTS[crit_id]
        terminalreporter.write_line(f"{crit_id:<5} {desc}: {status}")


@pytest.fixture()
def toy_design():
    """Noiseless 39-month design with a known linear trend plus break."""
    spec = SimulationSpec(
        n=39,
        intervention_index=26,
        beta=(2.0, 3.0, -5.0, 1.5),
        error=iid(0.0),
        seed=0,
        start_period=Period(2018, 2),
    )
    dataset = gen_its_dataset(spec)
    return build_design(dataset, "y", spec.intervention_spec())


@pytest.fixture()
def rng():
    return np.random.default_rng(20240901)
