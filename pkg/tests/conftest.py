import numpy as np
import pytest

from qcw.qcentral import FiniteGroupTable


def build_quaternion_table() -> FiniteGroupTable:
    """Q8 = {+-1, +-i, +-j, +-k}; index = 2*basis + sign, generators i, j."""
    basis_mult = {
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }
    mult = np.zeros((8, 8), dtype=np.int64)
    for b1 in range(4):
        for s1 in range(2):
            for b2 in range(4):
                for s2 in range(2):
                    b, s = basis_mult[(b1, b2)]
                    mult[2 * b1 + s1, 2 * b2 + s2] = 2 * b + ((s + s1 + s2) % 2)
    return FiniteGroupTable(order=8, mult=mult, identity=0, generators=(2, 4))


@pytest.fixture
def quaternion_table() -> FiniteGroupTable:
    return build_quaternion_table()
