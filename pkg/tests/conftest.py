import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tedsa.harness import CeremonyConfig, run_ceremony  # noqa: E402
from tedsa.profiles import ED25519, TINY_PURIFY, TOY  # noqa: E402
from tedsa.recovery_enc import RecoveryKeypair  # noqa: E402


@pytest.fixture
def toy():
    return TOY


@pytest.fixture
def ed25519():
    return ED25519


@pytest.fixture
def tiny():
    return TINY_PURIFY


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def toy_keys():
    """One honest keygen on the toy profile: (recovery keypair, records)."""
    r = random.Random(77)
    rk = RecoveryKeypair.generate(TOY, r)
    result = run_ceremony("keygen", CeremonyConfig(TOY, "fixture-kg", recovery_key=rk, seed=78))
    assert result.outcome.ok
    return rk, result.records


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when != "call" and not (report.skipped or report.failed):
        return
    name = report.nodeid.split("::")[-1]
    ACCEPTANCE_LINES[name] = "SKIP" if report.skipped else "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(ACCEPTANCE_LINES.items()):
        terminalreporter.write_line(f"{status}  {name}")
