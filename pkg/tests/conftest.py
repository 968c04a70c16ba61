
import numpy as np
import pytest
from scipy import stats

from scalingwindow.configuration import enumerate_configurations


def partitions_even(total_max):
    """Non-increasing positive degree multisets with even sum <= total_max."""
    out = []

    def rec(prefix, remaining, cap):
        if prefix and sum(prefix) % 2 == 0:
            out.append(tuple(prefix))
        for d in range(min(cap, remaining), 0, -1):
            rec(prefix + [d], remaining - d, d)

    rec([], total_max, total_max)
    return out


def matching_codes(matchings, m2):
    """Encode (reps, |E|, 2) matchings as partner arrays packed into integers."""
    reps = matchings.shape[0]
    partner = np.empty((reps, m2), dtype=np.int64)
    rows = np.arange(reps)[:, None]
    partner[rows, matchings[:, :, 0]] = matchings[:, :, 1]
    partner[rows, matchings[:, :, 1]] = matchings[:, :, 0]
    weights = m2 ** np.arange(m2, dtype=np.int64)
    return partner @ weights


def oracle_codes(seq):
    configs = enumerate_configurations(seq)
    arr = np.stack([g.matching for g in configs])
    return matching_codes(arr, seq.total_copies), configs


def chi_square_uniform(codes, support):
    """Chi-square p-value of sampled codes against the uniform law on ``support``."""
    index = {int(c): i for i, c in enumerate(support)}
    counts = np.zeros(len(support))
    for c, k in zip(*np.unique(codes, return_counts=True)):
        counts[index[int(c)]] = k  # KeyError means a matching outside the support
    if len(support) == 1:
        return 1.0
    return stats.chisquare(counts).pvalue


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
