"""Shared catalog fixtures; session-scoped since construction is pure."""

import pytest

from braceflows import (
    AbelianPGroup,
    Modulus,
    PreLieRing,
    brace_to_prelie,
    enumerate_prelie,
    radical_brace,
)


@pytest.fixture(scope="session")
def Z25():
    return AbelianPGroup(Modulus(5, 2), (2,))


@pytest.fixture(scope="session")
def Z5():
    return AbelianPGroup(Modulus(5, 1), (1,))


@pytest.fixture(scope="session")
def Z5xZ5():
    return AbelianPGroup(Modulus(5, 2), (1, 1))


@pytest.fixture(scope="session")
def B5():
    return radical_brace(5, 2)


@pytest.fixture(scope="session")
def B7():
    return radical_brace(7, 2)


@pytest.fixture(scope="session")
def P5(B5):
    # a (.) b = 5ab on Z/25
    return brace_to_prelie(B5)


@pytest.fixture(scope="session")
def zero25(Z25):
    return PreLieRing.zero(Z25)


@pytest.fixture(scope="session")
def nilpotent_on_Z25(Z25):
    return enumerate_prelie(Z25, require_nilpotent=True)


@pytest.fixture(scope="session")
def nilpotent_on_Z5xZ5(Z5xZ5):
    return enumerate_prelie(Z5xZ5, require_nilpotent=True)


@pytest.fixture(scope="session")
def heisenberg():
    # u.v = w, v.u = -w on (Z/5)^3: nilpotent of index 3, Lie class 2;
    # the smallest catalog instance whose bracket is nonzero
    G = AbelianPGroup(Modulus(5, 3), (1, 1, 1))
    sc = [[(0, 0, 0)] * 3 for _ in range(3)]
    sc[0][1] = (0, 0, 1)
    sc[1][0] = (0, 0, 4)
    return PreLieRing(G, sc, name="heisenberg")
