import numpy as np
import pytest

from otskit.core import OrdinalSeries, StateSpace, build_state_distance

AW10_CODES = [3, 3, 3, 3, 3, 0, 0, 3, 2, 0, 4, 0, 0, 3, 3, 3, 4, 5, 4, 4, 4, 5]


@pytest.fixture
def aw10():
    """Six-state wage trajectory used as a worked example throughout."""
    return OrdinalSeries(codes=np.array(AW10_CODES), state_space=StateSpace(6))


@pytest.fixture
def block6():
    return build_state_distance("block", StateSpace(6))


def make_series(codes, n_states):
    return OrdinalSeries(codes=np.asarray(codes, dtype=np.int64), state_space=StateSpace(n_states))


def random_series(rng, n_states=None, length=None, full_support=False):
    """Random series; with full_support every state appears at least once."""
    if n_states is None:
        n_states = int(rng.integers(2, 7))
    if length is None:
        length = int(rng.integers(n_states + 2, 60))
    codes = rng.integers(0, n_states, size=length)
    if full_support:
        codes[: n_states] = rng.permutation(n_states)
    return make_series(codes, n_states)
