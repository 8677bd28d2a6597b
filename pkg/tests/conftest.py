import pytest

from tauvalues.tau import tau_table

# Lines recorded by the acceptance suite, printed once at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def naive_tau(n_max: int) -> list[int]:
    """tau(1..n_max) by multiplying out (1 - q^k)^24 term by term."""
    s = [1] + [0] * n_max
    for k in range(1, n_max + 1):
        for _ in range(24):
            for i in range(n_max, k - 1, -1):
                s[i] -= s[i - k]
    return s[:n_max]


@pytest.fixture(scope="session")
def table():
    return tau_table(10_000)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
