import math

import numpy as np
import pytest

from agile_eye import EulerZyx, JointTriplet, euler_to_rotation, wrap_angle

HALF_PI = math.pi / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240615)


def circ_diff(a: float, b: float) -> float:
    """Absolute angular difference on the circle."""
    return abs(wrap_angle(a - b))


def euler_matches(e: EulerZyx, expected, tol: float) -> bool:
    """Per-angle circular comparison against an (phi, theta, psi) tuple."""
    return all(circ_diff(x, y) <= tol for x, y in zip(e.as_tuple(), expected))


def random_euler(rng, theta_margin: float = 0.05) -> EulerZyx:
    """Euler triplet clear of the representation singularity."""
    return EulerZyx(
        rng.uniform(-math.pi, math.pi),
        rng.uniform(-(HALF_PI - theta_margin), HALF_PI - theta_margin),
        rng.uniform(-math.pi, math.pi),
    )


def random_orientation(rng, theta_margin: float = 0.05) -> np.ndarray:
    return euler_to_rotation(random_euler(rng, theta_margin))


def random_joints(rng) -> JointTriplet:
    return JointTriplet(*rng.uniform(-math.pi, math.pi, 3))
