import pytest

from qultra import SpectralPoint, UltraParams

# default verification parameter set: every region constraint is satisfied
# (|q/beta| = 0.375 < 0.6 < 1, |q/(beta^2 gamma)| ~ 0.67 < 1)
Q, BETA, GAMMA, T = 0.3, 0.8, 0.7, 0.6
THETAS = (0.4, 1.0, 2.2)


@pytest.fixture
def params():
    return UltraParams(BETA, GAMMA, Q)


@pytest.fixture
def points():
    return [SpectralPoint.from_theta(t) for t in THETAS]
