"""Geometry of the orthogonal 3-RRR wrist: joint axes and constraints.

Legs are indexed 1..3.  Leg i runs from a base revolute joint with fixed
axis u_i through an intermediate joint with axis w_i(theta_i) to a
platform joint whose axis v_i rotates with the mobile platform.  All
adjacent axes are orthogonal by construction; the wrist is assembled at
(joints, orientation) exactly when w_i . v_i = 0 for every leg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .so3 import wrap_angle

# Leg i is fully folded or extended when |u_i . v_i| exceeds 1 minus this.
LEG_FOLD_TOL = 1e-9

_BASE_AXES = (
    np.array([1.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 1.0]),
)

# Platform joint axes in the mobile frame (reference orientation).
_PLATFORM_AXES_HOME = (
    np.array([0.0, -1.0, 0.0]),
    np.array([0.0, 0.0, -1.0]),
    np.array([-1.0, 0.0, 0.0]),
)


@dataclass(frozen=True)
class JointTriplet:
    """Active-joint angles (theta1, theta2, theta3), each in (-pi, pi]."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        object.__setattr__(self, "theta1", wrap_angle(float(self.theta1)))
        object.__setattr__(self, "theta2", wrap_angle(float(self.theta2)))
        object.__setattr__(self, "theta3", wrap_angle(float(self.theta3)))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


@dataclass(frozen=True)
class LegAxes:
    """The three joint axes of one leg, all in the base frame."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray


def base_axes() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Base joint axes: the x, y, z axes of the base frame."""
    return tuple(a.copy() for a in _BASE_AXES)


def platform_axes_home() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Platform joint axes in the mobile frame."""
    return tuple(a.copy() for a in _PLATFORM_AXES_HOME)


def platform_axes_base(r: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Platform joint axes in the base frame: v_i = R v'_i."""
    return (-r[:, 1].copy(), -r[:, 2].copy(), -r[:, 0].copy())


def intermediate_axes(j: JointTriplet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Intermediate joint axes w_i as functions of the active angles."""
    t1, t2, t3 = j.as_tuple()
    return (
        np.array([0.0, -math.sin(t1), math.cos(t1)]),
        np.array([math.cos(t2), 0.0, -math.sin(t2)]),
        np.array([-math.sin(t3), math.cos(t3), 0.0]),
    )


def constraint_residuals(j: JointTriplet, r: np.ndarray) -> np.ndarray:
    """Raw dot products w_i . v_i; all zero when assembled.

    Signs are kept (not absolute values) so downstream mode logic can
    reuse them.
    """
    t1, t2, t3 = j.as_tuple()
    return np.array(
        [
            math.sin(t1) * float(r[1, 1]) - math.cos(t1) * float(r[2, 1]),
            -math.cos(t2) * float(r[0, 2]) + math.sin(t2) * float(r[2, 2]),
            math.sin(t3) * float(r[0, 0]) - math.cos(t3) * float(r[1, 0]),
        ]
    )


def leg_axes(leg: int, j: JointTriplet, r: np.ndarray) -> LegAxes:
    """All three axes of one leg (1..3) in the base frame."""
    if leg not in (1, 2, 3):
        raise ValueError(f"leg index must be 1..3, got {leg}")
    i = leg - 1
    return LegAxes(
        u=_BASE_AXES[i].copy(),
        v=platform_axes_base(r)[i],
        w=intermediate_axes(j)[i],
    )


def singular_legs(r: np.ndarray) -> tuple[bool, bool, bool]:
    """Which legs are fully folded/extended at this orientation.

    Leg i is singular when its base and platform joint axes coincide,
    i.e. |u_i . v_i| > 1 - LEG_FOLD_TOL.  For this geometry u_i . v_i is
    a single matrix entry per leg.
    """
    lim = 1.0 - LEG_FOLD_TOL
    return (
        abs(float(r[0, 1])) > lim,
        abs(float(r[1, 2])) > lim,
        abs(float(r[2, 0])) > lim,
    )
