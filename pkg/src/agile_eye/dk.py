"""Direct kinematics: trivial orientations, the four-solution cascade,
and the degenerate branches (self-motion families, trivial-only joints).

For fixed actuator angles the constraint system splits in two.  One branch
(cos theta = 0) is independent of the joints and yields four fixed
"trivial" orientations at which every leg is singular.  The other branch
forces phi = theta3 and reduces to a scalar equation
c1 * cos(theta) + c2 * sin(theta) = 0 whose coefficients depend only on
the joints; each of its two roots admits two psi values, giving four
nontrivial solutions related by half-turns about platform joint axes.

The cascade degenerates in two ways.  When both coefficients vanish
(equivalently when one of three condition pairs on the joints holds), a
whole one-parameter family of orientations assembles: a self-motion.  Each
condition pair allows two such curves -- one with the singular leg folded
("a" variant), one with it extended ("b" variant) -- and both curves are
reachable for any joints satisfying the pair; which one applies is a
property of the platform orientation, not of the joints.  When only c2
vanishes and no condition pair holds, the nontrivial branch collapses
into the trivial one and the four trivial orientations are the only
solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import UnknownFamily
from .mechanism import JointTriplet
from .so3 import HALF_PI, EulerZyx, wrap_angle

# Tolerance on the sines/cosines deciding every degeneracy in the cascade.
DEGENERACY_TOL = 1e-9

_TRIVIAL = (
    np.array([[0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, 0.0, 0.0]]),
    np.array([[0.0, 1.0, 0.0], [0.0, 0.0, -1.0], [-1.0, 0.0, 0.0]]),
    np.array([[0.0, -1.0, 0.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]]),
    np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]),
)

FAMILY_LABELS = ("1a", "1b", "2a", "2b", "3a", "3b")

# Condition pair -> the two self-motion family ids it enables (a, b).
PAIR_FAMILIES = {1: (1, 2), 2: (3, 4), 3: (5, 6)}

# Leg that stays singular (and free) on each family.
FAMILY_SINGULAR_LEG = {1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 6: 3}

_PAIR_DESCRIPTIONS = {
    1: "cos(phi) = 0 and sin(psi) = 0, theta free (leg 1 singular)",
    2: "sin(phi) = 0 and cos(psi) = 0, theta free (leg 2 singular)",
    3: "theta = +pi/2 with phi - psi free, or theta = -pi/2 with "
    "phi + psi free (leg 3 singular)",
}


@dataclass(frozen=True)
class CascadeIntermediates:
    """Coefficients of the cascade at a candidate theta.

    c1 * cos(theta) + c2 * sin(theta) = 0 determines theta from the joints
    alone (q1 = c1, q2 = c2 here); then p1 * cos(psi) + p2 * sin(psi) = 0
    and p3 * cos(psi) + p4 * sin(psi) = 0 determine psi.
    """

    p1: float
    p2: float
    p3: float
    p4: float
    q1: float
    q2: float


@dataclass(frozen=True)
class JointDegeneracy:
    """Degeneracy class of a joint triplet.

    kind is one of "generic", "self_motion", "trivial_only".  For
    self-motion joints, `pair` (1..3) names the condition pair that
    holds; both of the pair's family curves assemble, so no single a/b
    variant is attached here.
    """

    kind: str
    pair: int | None = None


@dataclass(frozen=True)
class DkResult:
    """Full direct-kinematics outcome for one joint triplet.

    The four trivial orientations are always present.  `branch` is
    "finite" (four Euler solutions in half-turn order: (phi, theta, psi),
    (phi, theta, psi+pi), (phi, theta+pi, -psi), (phi, theta+pi, -psi+pi)),
    "self_motion" (a condition pair holds; `families` lists the two
    assembling curves) or "trivial_only".
    """

    trivial: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    branch: str
    solutions: tuple[EulerZyx, EulerZyx, EulerZyx, EulerZyx] | None = None
    pair: int | None = None
    families: tuple[int, int] | None = None
    constrained: str | None = None

    @property
    def is_finite(self) -> bool:
        return self.branch == "finite"


def trivial_orientations() -> tuple[np.ndarray, ...]:
    """The four orientations that solve the constraints for any joints."""
    return tuple(m.copy() for m in _TRIVIAL)


def _theta_coeffs(t1: float, t2: float, t3: float) -> tuple[float, float]:
    q1 = math.sin(t1) * math.cos(t2) * math.cos(t3) * math.sin(t3) - math.cos(
        t1
    ) * math.sin(t2)
    q2 = math.sin(t1) * math.sin(t2) * math.sin(t3) + math.cos(t1) * math.cos(
        t2
    ) * math.cos(t3)
    return q1, q2


def cascade_intermediates(j: JointTriplet, theta: float) -> CascadeIntermediates:
    """Evaluate all cascade coefficients at the given theta."""
    t1, t2, t3 = j.as_tuple()
    q1, q2 = _theta_coeffs(t1, t2, t3)
    ct, st = math.cos(theta), math.sin(theta)
    return CascadeIntermediates(
        p1=math.sin(t1) * math.cos(t3),
        p2=math.sin(t1) * st * math.sin(t3) - ct * math.cos(t1),
        p3=math.cos(t2) * st * math.cos(t3) - ct * math.sin(t2),
        p4=math.cos(t2) * math.sin(t3),
        q1=q1,
        q2=q2,
    )


def _condition_pair(j: JointTriplet, tol: float) -> int | None:
    t1, t2, t3 = j.as_tuple()
    if abs(math.sin(t2)) < tol and abs(math.cos(t3)) < tol:
        return 1
    if abs(math.sin(t3)) < tol and abs(math.cos(t1)) < tol:
        return 2
    if abs(math.sin(t1)) < tol and abs(math.cos(t2)) < tol:
        return 3
    return None


def classify_joint_degeneracy(
    j: JointTriplet, tol: float = DEGENERACY_TOL
) -> JointDegeneracy:
    """Sort a joint triplet into generic / self-motion / trivial-only."""
    pair = _condition_pair(j, tol)
    if pair is not None:
        return JointDegeneracy(kind="self_motion", pair=pair)
    _, q2 = _theta_coeffs(*j.as_tuple())
    if abs(q2) <= tol:
        return JointDegeneracy(kind="trivial_only")
    return JointDegeneracy(kind="generic")


def _fold_half(a: float) -> float:
    # Representative of an angle-mod-pi class in (-pi/2, pi/2].
    a = wrap_angle(a)
    if a > HALF_PI:
        return a - math.pi
    if a <= -HALF_PI:
        return a + math.pi
    return a


def solve_dk(j: JointTriplet, tol: float = DEGENERACY_TOL) -> DkResult:
    """Solve the direct kinematics for one joint triplet.

    Generic joints give four nontrivial Euler solutions in canonical
    order: solution 1 has theta in (-pi/2, pi/2] and psi in (-pi/2, pi/2],
    the rest follow the half-turn table.  Degenerate joints give the
    self-motion or trivial-only branch instead.  The trivial orientations
    are attached in every case.
    """
    deg = classify_joint_degeneracy(j, tol)
    if deg.kind == "self_motion":
        return DkResult(
            trivial=trivial_orientations(),
            branch="self_motion",
            pair=deg.pair,
            families=PAIR_FAMILIES[deg.pair],
            constrained=_PAIR_DESCRIPTIONS[deg.pair],
        )
    if deg.kind == "trivial_only":
        return DkResult(trivial=trivial_orientations(), branch="trivial_only")

    t1, t2, t3 = j.as_tuple()
    q1, q2 = _theta_coeffs(t1, t2, t3)
    phi = t3
    theta = _fold_half(math.atan2(-q1, q2))
    inter = cascade_intermediates(j, theta)
    # Either psi equation may degenerate alone; use the better-conditioned one.
    if max(abs(inter.p1), abs(inter.p2)) >= max(abs(inter.p3), abs(inter.p4)):
        psi = _fold_half(math.atan2(-inter.p1, inter.p2))
    else:
        psi = _fold_half(math.atan2(-inter.p3, inter.p4))
    raw = (
        EulerZyx(phi, theta, psi),
        EulerZyx(phi, theta, psi + math.pi),
        EulerZyx(phi, theta + math.pi, -psi),
        EulerZyx(phi, theta + math.pi, -psi + math.pi),
    )
    solutions = tuple(raw[i] for i in _table_order(j, raw[0], q2))
    return DkResult(
        trivial=trivial_orientations(), branch="finite", solutions=solutions
    )


def _leg_branch_values(j: JointTriplet, e: EulerZyx) -> tuple[float, float, float]:
    # diag(B) at a direct solution, expanded in the Euler angles; the sign
    # of entry i tells which of the two leg-i branches the solution uses
    t1, t2, t3 = j.as_tuple()
    cf, sf = math.cos(e.phi), math.sin(e.phi)
    ct, st = math.cos(e.theta), math.sin(e.theta)
    cp, sp = math.cos(e.psi), math.sin(e.psi)
    return (
        math.sin(t1) * ct * sp + math.cos(t1) * (cf * cp + sf * st * sp),
        math.sin(t2) * (cf * st * cp + sf * sp) + math.cos(t2) * ct * cp,
        math.sin(t3) * sf * ct + math.cos(t3) * cf * ct,
    )


def _table_order(j: JointTriplet, first: EulerZyx, q2: float) -> tuple[int, ...]:
    # Solution 1 is anchored to the all-equal working-mode signature (the
    # one signature group member whose three signs coincide; those signs
    # equal the sign of q2).  Unlike an angle-interval anchor, this label
    # is continuous everywhere inside one det-sign domain, so the mode id
    # of a tracked orientation cannot change without a singularity
    # crossing.  The remaining labels follow the half-turn table, which
    # flips (1,2), (2,3), (1,3) of the signature respectively.
    sigma = q2 > 0.0
    b1, b2, b3 = _leg_branch_values(j, first)
    pattern = ((b1 > 0.0) == sigma, (b2 > 0.0) == sigma, (b3 > 0.0) == sigma)
    if pattern == (True, True, True):
        return (0, 1, 2, 3)
    if pattern == (False, False, True):
        return (1, 0, 3, 2)
    if pattern == (True, False, False):
        return (2, 3, 0, 1)
    if pattern == (False, True, False):
        return (3, 2, 1, 0)
    # unreachable for generic joints (the signature product equals the
    # sign of q2); keep cascade order if roundoff ever lands here
    return (0, 1, 2, 3)


def self_motion_family(family_id, parameter: float) -> np.ndarray:
    """Orientation on one of the six self-motion curves.

    family_id is 1..6 or a label from FAMILY_LABELS ("1a".."3b"); the
    free angle is `parameter`.  On the "a" curves the singular leg is
    fully folded (platform joint axis equal to the base joint axis), on
    the "b" curves fully extended (opposite).
    """
    if isinstance(family_id, str):
        label = family_id.lower()
        if label not in FAMILY_LABELS:
            raise UnknownFamily(f"unknown self-motion family {family_id!r}")
        fid = FAMILY_LABELS.index(label) + 1
    else:
        fid = int(family_id)
        if fid < 1 or fid > 6:
            raise UnknownFamily(f"self-motion family id must be 1..6, got {family_id}")
    c, s = math.cos(parameter), math.sin(parameter)
    if fid == 1:
        return np.array([[0.0, -1.0, 0.0], [c, 0.0, s], [-s, 0.0, c]])
    if fid == 2:
        return np.array([[0.0, 1.0, 0.0], [c, 0.0, -s], [-s, 0.0, -c]])
    if fid == 3:
        return np.array([[c, s, 0.0], [0.0, 0.0, -1.0], [-s, c, 0.0]])
    if fid == 4:
        return np.array([[c, -s, 0.0], [0.0, 0.0, 1.0], [-s, -c, 0.0]])
    if fid == 5:
        return np.array([[0.0, -s, c], [0.0, c, s], [-1.0, 0.0, 0.0]])
    return np.array([[0.0, -s, -c], [0.0, c, -s], [1.0, 0.0, 0.0]])
