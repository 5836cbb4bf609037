"""Shared fixtures plus the acceptance-criteria summary hook.

Desk-scale scenario builders live here so module tests stay fast; the
full-size reference scenario is session-scoped because its codebook and
campaigns are the expensive parts of the suite.
"""

import pytest

import nearris as nr

_ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """One printable pass/fail line per acceptance criterion."""

    def rec(num, ok, detail):
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE_LINES.append(line)
        assert ok, line

    return rec


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def small_scenario(**overrides):
    """Reduced-aperture scenario (Q = 784) for fast module tests."""
    base = dict(
        ris_size_y_m=0.15,
        ris_size_z_m=0.15,
        codebook_levels=((2, 2), (4, 4), (4, 8)),
        trials=12,
        beta_list_db=(0.0, 10.0, 20.0),
    )
    base.update(overrides)
    return nr.Scenario(**base)


def los_only_scenario(**overrides):
    """Same but multipath disabled: one LOS path per link."""
    return small_scenario(paths_direct=1, paths_bs_ris=1, paths_ris_mu=1, **overrides)


@pytest.fixture(scope="session")
def reference_scenario():
    return nr.Scenario()


@pytest.fixture(scope="session")
def reference_codebook(reference_scenario):
    return reference_scenario.build_codebook()
