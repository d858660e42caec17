import pytest

from linfwiener.channel import NoiseModel
from linfwiener.priors import BernoulliGaussianPrior, GaussianMixturePrior


@pytest.fixture
def bg():
    return BernoulliGaussianPrior(s=0.3, mean_x=0.0, variance_x=1.0)


@pytest.fixture
def gm3():
    return GaussianMixturePrior.from_arrays([1 / 3, 1 / 3, 1 / 3], [0.0, 0.0, 0.0], [1.0, 0.25, 0.04])


@pytest.fixture
def unit_noise():
    return NoiseModel(1.0)


_ACCEPTANCE = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the test itself still asserts."""
    def record(name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
