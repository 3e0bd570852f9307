import numpy as np
import pytest

from gpcquad import MonotoneData, fit_transform, select_points


def mixture_values(rng, size=3000, atoms=True):
    """Random mixture of Gaussians, uniforms and point masses."""
    parts = []
    n_comp = int(rng.integers(1, 4))
    for _ in range(n_comp):
        n = size // n_comp
        kind = int(rng.integers(0, 3 if atoms else 2))
        if kind == 0:
            parts.append(rng.normal(rng.uniform(-3, 3), rng.uniform(0.05, 2.0), n))
        elif kind == 1:
            lo = rng.uniform(-4, 3)
            parts.append(rng.uniform(lo, lo + rng.uniform(0.1, 3.0), n))
        else:
            parts.append(np.full(n, rng.uniform(-3, 3)))
    values = np.concatenate(parts)
    if values.max() == values.min():
        values = np.concatenate([values, values + 1.0])
    return values


def random_selected_data(rng, size=3000, atoms=True, m_range=(5, 40)):
    """MonotoneData selected from a random sample mixture, plus transform."""
    values = mixture_values(rng, size=size, atoms=atoms)
    delta = 1e-3 * (values.max() - values.min())
    transform, cdf = fit_transform(values, delta)
    m = int(rng.integers(*m_range))
    return select_points(cdf, m), transform, m


def diagonal_data(n=5):
    x = np.linspace(0.0, 1.0, n)
    return MonotoneData(x=x, y=x.copy())


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
