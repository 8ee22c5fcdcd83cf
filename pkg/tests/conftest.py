"""Shared test data and generators."""

from __future__ import annotations

import math

import numpy as np
import pytest

from rmfspline.hermite import HermiteData
from rmfspline.ph import PreImage
from rmfspline.quat import Quaternion, bisector, neg_cross, unit

# The worked configuration used throughout: quoted to four decimals.
EX_A0 = [0.0, 1.0, 0.0, 0.0]
EX_A1 = [-0.3016, 0.6819, 0.3326, -0.4600]
EX_A2 = [-0.4784, 0.2338, 0.7311, -0.4266]
EX_AXIS = [1.0, 0.0, 0.0]

EX_S0 = [1.0, 0.0, 0.0]
EX_S1 = [0.7686, 0.3749, -0.5184]
EX_S2 = [0.2662, 0.8325, -0.4858]
EX_S4 = [-0.4330, 0.7500, 0.5000]

EX_H1 = [0.6819, 0.3326, -0.4600]
EX_H2 = [0.2338, 0.7311, -0.4266]
EX_H3 = [-0.1357, 0.9250, -0.0188]

EX_LEN_H1 = 0.8872
EX_LEN_H2 = 0.8782
EX_LEN_H3 = 0.9351

EX_SCALED_A1 = [-0.2286, 0.5168, 0.2521, -0.3486]
EX_SCALED_A2 = [-0.2748, 0.1343, 0.4200, -0.2451]
EX_SCALED_LENGTHS = [0.6725, 0.5045, 0.4071]

QUOTED_TOL = 1.5e-3


@pytest.fixture
def worked_preimage() -> PreImage:
    return PreImage(
        Quaternion.from_wxyz(EX_A0),
        Quaternion.from_wxyz(EX_A1),
        Quaternion.from_wxyz(EX_A2),
        np.array(EX_AXIS),
    )


def random_quaternion(rng: np.random.RandomState, scale: float = 1.0) -> Quaternion:
    return Quaternion(scale * rng.randn(), scale * rng.randn(3))


def random_unit(rng: np.random.RandomState) -> np.ndarray:
    return unit(rng.randn(3))


def random_preimage(rng: np.random.RandomState) -> PreImage:
    return PreImage(
        random_quaternion(rng),
        random_quaternion(rng),
        random_quaternion(rng),
        random_unit(rng),
    )


def random_frame(rng: np.random.RandomState) -> np.ndarray:
    u = random_unit(rng)
    v = unit(np.cross(rng.randn(3), u))
    return np.array([u, v, np.cross(u, v)])


def random_hermite_data(
    rng: np.random.RandomState,
    gamma_range: tuple[float, float] = (0.4 * math.pi + 0.01, math.pi - 0.01),
    beta_range: tuple[float, float] = (0.0, 2.0 * math.pi),
) -> HermiteData:
    """Admissible data: the chord lies on the symmetry circle by construction."""
    frame = random_frame(rng)
    u = frame[0]
    gamma = rng.uniform(*gamma_range)
    d = unit(rng.randn(3))
    d = unit(d - float(d @ u) * u)
    u_end = math.cos(gamma) * u + math.sin(gamma) * d
    b = bisector(u, u_end)
    n = neg_cross(u, u_end)
    beta = rng.uniform(*beta_range)
    du = math.cos(beta) * b + math.sin(beta) * n
    dist = 10.0 ** rng.uniform(-1.0, 1.0)
    p0 = rng.randn(3)
    return HermiteData(p0, p0 + dist * du, frame[0], frame[1], frame[2], u_end)
