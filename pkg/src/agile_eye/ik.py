"""Inverse kinematics: all eight working modes for a given orientation.

Each leg's constraint w_i . v_i = 0 is linear in (sin theta_i, cos theta_i),
so each leg admits exactly two solutions half a turn apart -- unless both
coefficients vanish, in which case the leg is fully folded or extended and
its angle is arbitrary.  The full solution set is the Cartesian product
over legs: generically 2^3 = 8 joint triplets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .mechanism import JointTriplet
from .so3 import wrap_angle

# A leg is degenerate when max(|numerator|, |denominator|) falls below this.
DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class LegIkOutcome:
    """Per-leg result: two antipodal angles, or an arbitrary (singular) leg."""

    arbitrary: bool
    angles: tuple[float, float] | None = None

    @classmethod
    def two(cls, angle: float) -> "LegIkOutcome":
        a = wrap_angle(angle)
        return cls(arbitrary=False, angles=(a, wrap_angle(a + math.pi)))

    @classmethod
    def arbitrary_leg(cls) -> "LegIkOutcome":
        return cls(arbitrary=True)


@dataclass(frozen=True)
class IkSolutionSet:
    """Outcome of the full inverse-kinematic solve.

    `enumerated` holds the Cartesian product of per-leg angles.  When some
    leg is arbitrary it is empty, unless the solve was asked to fill
    arbitrary legs with the convention angle 0, in which case it has
    2^k entries for k non-arbitrary legs.
    """

    legs: tuple[LegIkOutcome, LegIkOutcome, LegIkOutcome]
    enumerated: tuple[JointTriplet, ...]

    @property
    def any_arbitrary(self) -> bool:
        return any(leg.arbitrary for leg in self.legs)


def _leg_atan2_args(leg: int, r: np.ndarray) -> tuple[float, float]:
    # (numerator, denominator) of tan(theta_i) read off the orientation matrix
    if leg == 1:
        return float(r[2, 1]), float(r[1, 1])
    if leg == 2:
        return float(r[0, 2]), float(r[2, 2])
    if leg == 3:
        return float(r[1, 0]), float(r[0, 0])
    raise ValueError(f"leg index must be 1..3, got {leg}")


def leg_ik(leg: int, r: np.ndarray) -> LegIkOutcome:
    """Solve one leg: two antipodal angles, or Arbitrary when singular."""
    num, den = _leg_atan2_args(leg, r)
    if max(abs(num), abs(den)) < DEGENERATE_TOL:
        return LegIkOutcome.arbitrary_leg()
    return LegIkOutcome.two(math.atan2(num, den))


def solve_ik(r: np.ndarray, fill_arbitrary: bool = False) -> IkSolutionSet:
    """All working modes for the given orientation.

    Degenerate legs are reported, not raised.  With fill_arbitrary=True
    each arbitrary leg contributes the single convention angle 0 to the
    enumeration instead of suppressing it.
    """
    legs = tuple(leg_ik(i, r) for i in (1, 2, 3))
    if any(leg.arbitrary for leg in legs) and not fill_arbitrary:
        return IkSolutionSet(legs, ())
    options = [(0.0,) if leg.arbitrary else leg.angles for leg in legs]
    enumerated = tuple(JointTriplet(*combo) for combo in itertools.product(*options))
    return IkSolutionSet(legs, enumerated)
