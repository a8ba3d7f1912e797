import numpy as np
import pytest

from fraclamb import Exponential, GaussTail, ShiftedGaussian


@pytest.fixture
def family():
    """One instance of each built-in function kind."""
    return [
        Exponential(1.0),
        Exponential(2.0),
        GaussTail(1.0, 0.0),
        ShiftedGaussian(1.0, 0.0),
    ]


def rel_error(got, want, floor=0.0):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    scale = np.max(np.abs(want)) if want.size else 0.0
    denom = np.maximum(np.abs(want), floor * scale if scale > 0 else 1e-300)
    denom = np.where(denom == 0.0, 1e-300, denom)
    return float(np.max(np.abs(got - want) / denom))
