"""Shared numeric helpers and fixtures."""

import numpy as np
import pytest

from ellsixj.context import make_context
from ellsixj.harness import Level, SampleConfig, Shape, sample_generic


def rel(got, want):
    """Relative infinity-norm distance with a zero-scale guard."""
    got = np.asarray(got, dtype=complex)
    want = np.asarray(want, dtype=complex)
    scale = max(float(np.abs(got).max()), float(np.abs(want).max()), 1e-300)
    return float(np.abs(got - want).max()) / scale


def draw_quad(seed, N, level=Level.TRIG):
    """One deterministic generic parameter quadruple."""
    cfg = SampleConfig(seed=seed, N_max=max(N, 1))
    return sample_generic(cfg, Shape.QUAD, N=N, level=level)


@pytest.fixture
def trig_ctx():
    return make_context(0.43)


@pytest.fixture
def ell_ctx():
    return make_context(0.43, p=0.11)
