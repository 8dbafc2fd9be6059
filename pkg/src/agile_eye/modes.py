"""Working-mode signatures, the working/assembly mode correspondence,
and singularity-aware path tracking.

The sign triple of diag(B) identifies the working mode: flipping one
leg's angle by pi flips the corresponding B_ii.  For fixed generic joints
the four nontrivial assembly modes realize four distinct signatures whose
pattern relative to the canonical first solution is (s1,s2,s3),
(-s1,-s2,s3), (s1,-s2,-s3), (-s1,s2,-s3); the common sign product equals
the sign of the joint-space determinant factor, so only one of the two
signature groups is ever reachable for given joints.  Tracking a joint
path therefore pins the assembly mode as long as no singularity is
crossed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, ToolConfig
from .dk import DkResult, _condition_pair, _theta_coeffs, solve_dk
from .exceptions import (
    DegenerateJoints,
    NoMatchingSolution,
    NoSuchMode,
    SingularNoSignature,
    StartNotASolution,
)
from .mechanism import JointTriplet
from .singularity import jacobians
from .so3 import EulerZyx, euler_to_rotation, rotation_distance, wrap_angle

# Orientation-to-solution matching tolerance (rotation distance, radians).
MATCH_TOL = 1e-6

# Path refinement: base per-joint step bound, and the tighter bound applied
# near roots of the determinant factor.
COARSE_STEP = 0.2
FINE_STEP = 0.05
NEAR_ROOT_BAND = 0.2

# Nearest-solution ambiguity guard: second-nearest must be at least this
# factor farther than the nearest.
AMBIGUITY_FACTOR = 2.0


@dataclass(frozen=True)
class WorkingModeSignature:
    """Signs of (B11, B22, B33); one of the 8 working modes."""

    s1: int
    s2: int
    s3: int

    def __post_init__(self):
        for s in (self.s1, self.s2, self.s3):
            if s not in (-1, 1):
                raise ValueError("signature components must be +1 or -1")

    @property
    def label(self) -> str:
        return "".join("+" if s > 0 else "-" for s in (self.s1, self.s2, self.s3))

    @property
    def product(self) -> int:
        return self.s1 * self.s2 * self.s3

    @classmethod
    def from_label(cls, label: str) -> "WorkingModeSignature":
        if len(label) != 3 or any(ch not in "+-" for ch in label):
            raise ValueError(f"signature label must be three of '+'/'-', got {label!r}")
        return cls(*(1 if ch == "+" else -1 for ch in label))


@dataclass(frozen=True)
class SingularityCrossing:
    """Report of a singularity encountered while tracking a path."""

    segment: int
    reason: str


@dataclass(frozen=True)
class TrackResult:
    """Orientation path produced by track_path.

    One entry per input waypoint actually reached.  `crossing` is None
    for a clean track; otherwise it names the first offending segment
    (path[segment] -> path[segment + 1]) and the orientations list stops
    at the last safely reached waypoint.
    """

    orientations: tuple[np.ndarray, ...]
    eulers: tuple[EulerZyx, ...]
    crossing: SingularityCrossing | None = None

    @property
    def crossed(self) -> bool:
        return self.crossing is not None


def working_mode_signature(
    j: JointTriplet, r: np.ndarray, tol: float = 1e-9
) -> WorkingModeSignature:
    """Componentwise signs of the numeric diag(B).

    Raises SingularNoSignature when any |B_ii| <= tol: the configuration
    is leg-singular and carries no working mode.
    """
    b = jacobians(j, r).b_diag
    if float(np.min(np.abs(b))) <= tol:
        raise SingularNoSignature(
            f"diag(B) = {tuple(b)} has a vanishing entry (tol {tol:g})"
        )
    return WorkingModeSignature(*(1 if x > 0 else -1 for x in b))


def _finite_dk(j: JointTriplet) -> DkResult:
    dk = solve_dk(j)
    if not dk.is_finite:
        raise DegenerateJoints(
            f"direct kinematics branch is {dk.branch!r}; finite solutions required"
        )
    return dk


def assembly_mode_for(j: JointTriplet, sig: WorkingModeSignature) -> EulerZyx:
    """The direct solution realizing a requested working-mode signature.

    Only the four signatures whose sign product matches the sign of the
    joint-space determinant factor are realizable; asking for one from
    the opposite group raises NoSuchMode.
    """
    dk = _finite_dk(j)
    for sol in dk.solutions:
        if working_mode_signature(j, euler_to_rotation(sol)) == sig:
            return sol
    _, q2 = _theta_coeffs(*j.as_tuple())
    raise NoSuchMode(
        f"signature {sig.label} not realized: these joints admit the "
        f"sign-product {'+' if q2 > 0 else '-'} group only"
    )


def assembly_mode_id(
    j: JointTriplet, r: np.ndarray, tol: float = MATCH_TOL
) -> int:
    """Index (1..4) of the canonical direct solution matching r."""
    dk = _finite_dk(j)
    for idx, sol in enumerate(dk.solutions, 1):
        if rotation_distance(r, euler_to_rotation(sol)) < tol:
            return idx
    raise NoMatchingSolution(
        "orientation matches no nontrivial direct solution of these joints"
    )


def _interp(a: JointTriplet, b: JointTriplet, f: float) -> JointTriplet:
    # Shortest-arc interpolation per joint on the circle.
    aa, bb = a.as_tuple(), b.as_tuple()
    return JointTriplet(*(x + f * wrap_angle(y - x) for x, y in zip(aa, bb)))


def _segment_substeps(a: JointTriplet, b: JointTriplet) -> list[float]:
    span = max(abs(wrap_angle(y - x)) for x, y in zip(a.as_tuple(), b.as_tuple()))
    n = max(1, math.ceil(span / COARSE_STEP))
    return [k / n for k in range(1, n + 1)]


def track_path(
    path, start: np.ndarray, cfg: ToolConfig = DEFAULT_CONFIG
) -> TrackResult:
    """Track the assembly mode along a joint path by nearest-solution
    continuation.

    `start` must match one of the four direct solutions of path[0] within
    MATCH_TOL (else StartNotASolution).  Segments are refined so that no
    substep moves a joint more than COARSE_STEP, and more finely near
    roots of the determinant factor.  A SingularityCrossing is reported
    when the determinant factor changes sign or drops below the singular
    tolerance, when the joints enter a self-motion condition pair, when
    the direct solve degenerates, or when nearest-solution matching is
    ambiguous.
    """
    waypoints = [p if isinstance(p, JointTriplet) else JointTriplet(*p) for p in path]
    if not waypoints:
        raise ValueError("path must contain at least one waypoint")

    dk0 = solve_dk(waypoints[0])
    if not dk0.is_finite:
        raise StartNotASolution(
            f"first waypoint has branch {dk0.branch!r}, not finite solutions"
        )
    mats = [euler_to_rotation(s) for s in dk0.solutions]
    dists = [rotation_distance(start, m) for m in mats]
    best = min(range(4), key=dists.__getitem__)
    if dists[best] > MATCH_TOL:
        raise StartNotASolution(
            f"start orientation is {dists[best]:.3e} rad from the nearest "
            f"direct solution (tol {MATCH_TOL:g})"
        )
    current = mats[best]
    current_euler = dk0.solutions[best]
    orientations = [current]
    eulers = [current_euler]

    prev_q2 = _theta_coeffs(*waypoints[0].as_tuple())[1]
    for seg in range(len(waypoints) - 1):
        a, b = waypoints[seg], waypoints[seg + 1]
        fractions = _segment_substeps(a, b)
        crossing = None
        prev_f = 0.0
        for f in fractions:
            js = _interp(a, b, f)
            q2 = _theta_coeffs(*js.as_tuple())[1]
            # Near a determinant root, re-walk this substep finely.
            if min(abs(prev_q2), abs(q2)) < NEAR_ROOT_BAND:
                span = max(
                    abs(wrap_angle(y - x))
                    for x, y in zip(a.as_tuple(), b.as_tuple())
                ) * (f - prev_f)
                pieces = max(1, math.ceil(span / FINE_STEP))
                subs = [prev_f + (f - prev_f) * k / pieces for k in range(1, pieces + 1)]
            else:
                subs = [f]
            for ff in subs:
                jj = _interp(a, b, ff)
                q2_here = _theta_coeffs(*jj.as_tuple())[1]
                if abs(q2_here) <= cfg.singular_tol:
                    crossing = SingularityCrossing(seg, "determinant factor vanished")
                    break
                if q2_here * prev_q2 < 0.0:
                    crossing = SingularityCrossing(seg, "determinant sign change")
                    break
                if _condition_pair(jj, cfg.structure_tol) is not None:
                    crossing = SingularityCrossing(seg, "self-motion conditions entered")
                    break
                dk = solve_dk(jj)
                if not dk.is_finite:
                    crossing = SingularityCrossing(seg, f"direct solve became {dk.branch}")
                    break
                cand = [euler_to_rotation(s) for s in dk.solutions]
                dd = sorted(
                    range(4), key=lambda i: rotation_distance(current, cand[i])
                )
                d1 = rotation_distance(current, cand[dd[0]])
                d2 = rotation_distance(current, cand[dd[1]])
                if d2 < AMBIGUITY_FACTOR * d1:
                    crossing = SingularityCrossing(seg, "nearest-solution matching ambiguous")
                    break
                current = cand[dd[0]]
                current_euler = dk.solutions[dd[0]]
                prev_q2 = q2_here
            if crossing is not None:
                break
            prev_f = f
        if crossing is not None:
            return TrackResult(tuple(orientations), tuple(eulers), crossing)
        orientations.append(current)
        eulers.append(current_euler)
    return TrackResult(tuple(orientations), tuple(eulers), None)
