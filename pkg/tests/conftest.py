import pytest

from cslab import EnumBounds, enumerate_std_forms
from cslab.linalg import IntMat3

M = IntMat3.of

A0 = M([[0, 1, 0], [0, 1, 1], [1, 0, 1]])
SIG0_A = M([[0, -1, -2], [0, -1, -3], [1, 2, 5]])
SIG0_B = M([[0, -1, -2], [0, 1, 1], [1, 2, 3]])
SIG0_C = M([[2, 1, 2], [0, -1, -1], [-1, 0, -1]])
AMB = M([[0, -5, -8], [0, 2, 3], [1, 0, -7]])
AMB_TRACE1 = M([[0, -9, -14], [0, 2, 3], [1, 4, -1]])
AMB_P = M([[-1, -4, 1], [1, 5, 1], [0, 0, -1]])
DELTA = M([[1, -1, 0], [0, 1, 0], [0, 1, 1]])

# Smallest survivor found in the |c|,|e|,|f| <= 14 box whose trace hits no
# admissible residue mod d; every strategy gives up on it.
EVADING_SURVIVOR = (-4, -13, -7, -23, -3, -6)


@pytest.fixture(scope="session")
def acceptance_box():
    """Every standard form with |c|, |e|, |f| <= 6 and |d| <= 60."""
    return list(enumerate_std_forms(EnumBounds.box(6, 60)))
