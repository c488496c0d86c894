import math

import numpy as np
import pytest

from beable_sdk.exceptions import ValidationError
from beable_sdk.fock import dirac_spinors, packet_spinor
from beable_sdk.models.types import EnergySign

SIGMA_X = np.array([[0, 1], [1, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]])


def dirac(p, m):
    return p * SIGMA_X + m * SIGMA_Z


@pytest.mark.parametrize("p", [-2.0, -0.3, 0.0, 0.7, 3.1])
def test_spinors_solve_the_dirac_equation(p):
    m = 0.8
    basis = dirac_spinors(p, m)
    assert basis.energy == pytest.approx(math.hypot(p, m))
    assert np.allclose(dirac(p, m) @ basis.u, basis.energy * basis.u)
    # v(p) multiplies e^{-ipx}: a negative-energy solution at momentum -p
    assert np.allclose(dirac(-p, m) @ basis.v, -basis.energy * basis.v)


def test_spinor_normalization():
    basis = dirac_spinors(1.3, 0.5)
    assert np.vdot(basis.u, basis.u).real == pytest.approx(basis.energy / basis.mass)
    assert np.vdot(basis.v, basis.v).real == pytest.approx(basis.energy / basis.mass)


def test_massless_spinors_need_the_packet_path():
    with pytest.raises(ValidationError):
        dirac_spinors(1.0, 0.0)


@pytest.mark.parametrize("sign", list(EnergySign))
@pytest.mark.parametrize("p", [-1.0, 0.0, 0.4])
@pytest.mark.parametrize("m", [0.0, 0.5])
def test_packet_spinor_is_unit_norm(sign, p, m):
    assert np.linalg.norm(packet_spinor(p, m, sign)) == pytest.approx(1.0)


def test_massless_packet_spinor_is_chiral():
    right = packet_spinor(0.5, 0.0)
    left = packet_spinor(-0.5, 0.0)
    assert np.allclose(right, np.array([1, 1]) / math.sqrt(2))
    assert np.allclose(left, np.array([1, -1]) / math.sqrt(2))
    # J = 2 Re(ψ₁*ψ₂) carries the sign of the motion
    assert 2 * np.real(np.conj(right[0]) * right[1]) == pytest.approx(1.0)
    assert 2 * np.real(np.conj(left[0]) * left[1]) == pytest.approx(-1.0)
