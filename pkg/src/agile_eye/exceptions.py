"""Exception types raised by the agile_eye library."""


class AgileEyeError(Exception):
    """Base class for all library errors."""


class MalformedRotation(AgileEyeError):
    """Matrix fails the proper-orthogonality checks for a rotation."""


class UnknownFamily(AgileEyeError):
    """Self-motion family identifier out of range."""


class DenominatorDegenerate(AgileEyeError):
    """A closed-form B_ii denominator vanished; the leg is singular there."""


class NotAssembled(AgileEyeError):
    """Joints and orientation do not satisfy the leg constraints."""


class SingularNoSignature(AgileEyeError):
    """Working-mode signature undefined: a diagonal entry of B is zero."""


class NoSuchMode(AgileEyeError):
    """Requested working-mode signature is not realized by these joints."""


class DegenerateJoints(AgileEyeError):
    """Operation needs joints with a finite set of direct solutions."""


class NoMatchingSolution(AgileEyeError):
    """Orientation matches no nontrivial direct-kinematic solution."""


class StartNotASolution(AgileEyeError):
    """Tracking start orientation does not solve the first waypoint."""
