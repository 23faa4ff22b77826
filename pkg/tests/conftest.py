import math

import numpy as np
import pytest

from mqsym import make_realization
from mqsym.registry import Registry

H = 1.0 / math.sqrt(2.0)


@pytest.fixture
def spin_registry():
    reg = Registry()
    reg.define_observable("Z", ["up", "down"], [1, -1])
    reg.define_observable("X", ["plus", "minus"])
    return reg.freeze()


@pytest.fixture
def spin_realization(spin_registry):
    # Z the standard basis, X the Hadamard-rotated basis.
    return make_realization(spin_registry, 2, {
        "Z": np.eye(2),
        "X": np.array([[H, H], [H, -H]]),
    })


def make_abc_registry(dim: int, with_values: bool = False) -> Registry:
    reg = Registry()
    for name in ("A", "B", "C"):
        labels = [f"{name.lower()}{k}" for k in range(dim)]
        values = list(range(1, dim + 1)) if with_values else None
        reg.define_observable(name, labels, values)
    return reg.freeze()
