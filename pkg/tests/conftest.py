import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from contactmetric.cli import load_pair_spec  # noqa: E402
from contactmetric.gallery import gallery_pair  # noqa: E402

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def flat_torus():
    return gallery_pair("flat-torus")


@pytest.fixture(scope="session")
def counterexample():
    return gallery_pair("counterexample")


@pytest.fixture(scope="session")
def hyperbolic():
    return gallery_pair("hyperbolic")


@pytest.fixture(scope="session")
def euclidean_dz():
    return load_pair_spec(str(DATA / "euclidean_dz.json"), {})


@pytest.fixture(scope="session")
def perturbed():
    return load_pair_spec(str(DATA / "perturbed_counterexample.json"), {})


@pytest.fixture(scope="session")
def n_lambda_pair():
    return load_pair_spec(str(DATA / "n_lambda_pair.json"), {})


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    def record(label: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
