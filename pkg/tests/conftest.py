import numpy as np
import pytest

from lorentzgas import EnsembleSpec, LatticeConfig


@pytest.fixture(scope="session")
def square_lattice():
    return LatticeConfig(d=2, m=np.eye(2), alpha=np.zeros(2), alpha_class="integer", r=0.1)


@pytest.fixture(scope="session")
def cubic_lattice():
    return LatticeConfig(d=3, m=np.eye(3), alpha=np.zeros(3), alpha_class="integer", r=0.1)


@pytest.fixture(scope="session")
def boundary_spec():
    return EnsembleSpec(kind="boundary")


@pytest.fixture(scope="session")
def phase_spec():
    return EnsembleSpec(kind="phase")
