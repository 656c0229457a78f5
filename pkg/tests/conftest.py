import numpy as np
import pytest


def zero_mean_acvf(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Autocovariance of a known-zero-mean process, biased 1/n normalization."""
    n = len(x)
    return np.array([float(x[: n - k] @ x[k:]) / n for k in range(max_lag + 1)])


def max_run_length(x: np.ndarray) -> int:
    """Longest constant stretch of a piecewise-constant series."""
    change = np.flatnonzero(np.diff(x) != 0)
    edges = np.concatenate([[-1], change, [len(x) - 1]])
    return int(np.diff(edges).max())


def run_lengths(x: np.ndarray) -> np.ndarray:
    change = np.flatnonzero(np.diff(x) != 0)
    edges = np.concatenate([[-1], change, [len(x) - 1]])
    return np.diff(edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
