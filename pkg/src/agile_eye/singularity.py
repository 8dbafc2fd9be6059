"""Jacobian construction, closed-form determinants, and the singularity
classification into three families.

The velocity relation is A @ omega + B @ theta_dot = 0 with row i of A
equal to (w_i x v_i)^T and B diagonal with B_ii = (w_i x v_i)^T u_i.
On the nontrivial direct solutions det(A) reduces to a function of the
joints alone,

    det(A) = sin(t1) sin(t2) sin(t3) + cos(t1) cos(t2) cos(t3),

and on the trivial orientations to its negative.  The three singular
families: self-motions (six one-parameter orientation curves), lockups
(trivial orientation, det factor nonzero), and infinitesimal motions at a
trivial orientation (det factor zero without a condition pair).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, ToolConfig
from .dk import (
    PAIR_FAMILIES,
    _condition_pair,
    _theta_coeffs,
    self_motion_family,
    trivial_orientations,
)
from .exceptions import DenominatorDegenerate, NotAssembled
from .mechanism import JointTriplet, constraint_residuals, singular_legs
from .so3 import TWO_PI, rotation_distance

# Signs of (B11, B22, B33) per assembly mode, relative labeling with the
# first (canonical) solution taken all-negative.
TABLE_SIGNS = ((-1, -1, -1), (1, 1, -1), (-1, 1, 1), (1, -1, 1))

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class JacobianPair:
    """Matrix A (rows w_i x v_i) and the diagonal of B."""

    a: np.ndarray
    b_diag: np.ndarray


@dataclass(frozen=True)
class SingularityClass:
    """Classification of an assembled configuration.

    kind: "regular", "self_motion" (with family_id 1..6),
    "infinitesimal_at_trivial" or "lockup" (with trivial_id 1..4).
    """

    kind: str
    family_id: int | None = None
    trivial_id: int | None = None


def jacobians(j: JointTriplet, r: np.ndarray) -> JacobianPair:
    """Numeric A and diag(B) at a configuration.

    Because u_i is the i-th base frame axis, B_ii is simply the i-th
    component of row i of A.
    """
    t1, t2, t3 = j.as_tuple()
    w = (
        (0.0, -math.sin(t1), math.cos(t1)),
        (math.cos(t2), 0.0, -math.sin(t2)),
        (-math.sin(t3), math.cos(t3), 0.0),
    )
    v = (
        (-float(r[0, 1]), -float(r[1, 1]), -float(r[2, 1])),
        (-float(r[0, 2]), -float(r[1, 2]), -float(r[2, 2])),
        (-float(r[0, 0]), -float(r[1, 0]), -float(r[2, 0])),
    )
    rows = []
    b = []
    for i in range(3):
        wx, wy, wz = w[i]
        vx, vy, vz = v[i]
        row = (wy * vz - wz * vy, wz * vx - wx * vz, wx * vy - wy * vx)
        rows.append(row)
        b.append(row[i])
    return JacobianPair(a=np.array(rows), b_diag=np.array(b))


def det3(m: np.ndarray) -> float:
    """Determinant of a 3x3 matrix, expanded directly."""
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def det_a_closed_form(j: JointTriplet, branch: str = "nontrivial") -> float:
    """Closed-form det(A) in joint space.

    branch "nontrivial" applies on the four nontrivial direct solutions;
    branch "trivial" (the four trivial orientations) carries the opposite
    sign.  The value is identical across the four assembly modes.
    """
    _, q2 = _theta_coeffs(*j.as_tuple())
    if branch == "nontrivial":
        return q2
    if branch == "trivial":
        return -q2
    raise ValueError(f"branch must be 'nontrivial' or 'trivial', got {branch!r}")


def _denominators(j: JointTriplet) -> tuple[float, float, float]:
    # sqrt(1 - cos^2 a sin^2 b) rewritten without cancellation
    t1, t2, t3 = j.as_tuple()
    s1, c1 = math.sin(t1), math.cos(t1)
    s2, c2 = math.sin(t2), math.cos(t2)
    s3, c3 = math.sin(t3), math.cos(t3)
    d1 = math.sqrt(s3 * s3 + c3 * c3 * c1 * c1)  # 1 - cos^2 t3 sin^2 t1
    d2 = math.sqrt(s1 * s1 + c1 * c1 * c2 * c2)  # 1 - cos^2 t1 sin^2 t2
    d3 = math.sqrt(s2 * s2 + c2 * c2 * c3 * c3)  # 1 - cos^2 t2 sin^2 t3
    return d1, d2, d3


def b_diag_closed_form(
    j: JointTriplet, mode: int, tol: float = 1e-9
) -> np.ndarray:
    """Closed-form diagonal of B for one assembly mode (1..4).

    Magnitudes are |det factor| / (paired denominators); the sign pattern
    follows TABLE_SIGNS for the requested mode.  The mode-1-all-negative
    labeling is a convention: the numerically realized global sign at a
    physical configuration depends on the joints (see working-mode
    signatures), while the relative pattern between modes does not.

    Raises DenominatorDegenerate when a denominator vanishes within tol;
    there the numerator vanishes too and the configuration is leg-singular,
    so no finite ratio is reported.
    """
    if mode not in (1, 2, 3, 4):
        raise ValueError(f"assembly mode must be 1..4, got {mode}")
    d1, d2, d3 = _denominators(j)
    if min(d1, d2, d3) <= tol:
        raise DenominatorDegenerate(
            "closed-form B denominator vanished (leg-singular joints): "
            f"d = ({d1:.3e}, {d2:.3e}, {d3:.3e})"
        )
    _, q2 = _theta_coeffs(*j.as_tuple())
    mag = abs(q2)
    signs = TABLE_SIGNS[mode - 1]
    return np.array(
        [signs[0] * mag / (d1 * d2), signs[1] * mag / (d3 * d2), signs[2] * mag / (d3 * d1)]
    )


def family_distance(
    r: np.ndarray, family_id: int, coarse: int = 128
) -> tuple[float, float]:
    """Min rotation distance from r to a self-motion curve.

    Returns (parameter, distance).  Coarse scan over the parameter circle
    followed by golden-section refinement around the best sample.
    """
    best_t, best_d = 0.0, math.inf
    step = TWO_PI / coarse
    for k in range(coarse):
        t = -math.pi + step * (k + 1)
        d = rotation_distance(r, self_motion_family(family_id, t))
        if d < best_d:
            best_t, best_d = t, d
    lo, hi = best_t - step, best_t + step
    f = lambda t: rotation_distance(r, self_motion_family(family_id, t))
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(60):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    t = 0.5 * (lo + hi)
    return t, f(t)


def _best_family(r: np.ndarray, family_ids) -> tuple[int, float]:
    best_fid, best_d = 0, math.inf
    for fid in family_ids:
        _, d = family_distance(r, fid)
        if d < best_d:
            best_fid, best_d = fid, d
    return best_fid, best_d


def _nearest_trivial(r: np.ndarray) -> tuple[int, float]:
    best_id, best_d = 0, math.inf
    for k, m in enumerate(trivial_orientations(), 1):
        d = rotation_distance(r, m)
        if d < best_d:
            best_id, best_d = k, d
    return best_id, best_d


def classify_configuration(
    j: JointTriplet, r: np.ndarray, cfg: ToolConfig = DEFAULT_CONFIG
) -> SingularityClass:
    """Classify an assembled configuration into the three singular
    families or Regular.

    Raises NotAssembled when some constraint residual exceeds the
    residual tolerance.
    """
    residuals = constraint_residuals(j, r)
    worst = float(np.max(np.abs(residuals)))
    if worst > cfg.residual_tol:
        raise NotAssembled(
            f"constraint residuals reach {worst:.3e} (> {cfg.residual_tol:g})"
        )
    pair = _condition_pair(j, cfg.structure_tol)
    if pair is not None:
        fid, dist = _best_family(r, PAIR_FAMILIES[pair])
        if dist < cfg.singular_tol:
            return SingularityClass(kind="self_motion", family_id=fid)
    _, q2 = _theta_coeffs(*j.as_tuple())
    trivial_id, trivial_dist = _nearest_trivial(r)
    if trivial_dist < cfg.singular_tol:
        if abs(q2) > cfg.structure_tol:
            return SingularityClass(kind="lockup", trivial_id=trivial_id)
        return SingularityClass(
            kind="infinitesimal_at_trivial", trivial_id=trivial_id
        )
    det = det3(jacobians(j, r).a)
    if abs(det) > cfg.singular_tol and not any(singular_legs(r)):
        return SingularityClass(kind="regular")
    # Tolerance-band fallback: attribute to the nearest singular structure.
    fid, fdist = _best_family(r, range(1, 7))
    if fdist <= trivial_dist:
        return SingularityClass(kind="self_motion", family_id=fid)
    if abs(q2) > cfg.structure_tol:
        return SingularityClass(kind="lockup", trivial_id=trivial_id)
    return SingularityClass(kind="infinitesimal_at_trivial", trivial_id=trivial_id)
