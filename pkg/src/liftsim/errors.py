"""Exception hierarchy shared across the package."""


class LiftSimError(Exception):
    """Base class for all liftsim errors."""


class ParseError(LiftSimError):
    """Malformed scene/crane/chart/path document."""


class DegenerateMesh(ParseError):
    """Mesh violates its invariants (bad index, zero-area triangle, empty)."""


class MissingMesh(LiftSimError):
    """A mesh file referenced by a scene document could not be resolved."""


class UnitError(LiftSimError):
    """Scene document units tag missing or not 'm,t,rad'."""


class NonFiniteState(LiftSimError):
    """Crane state contains NaN or infinity."""


class NoSolution(LiftSimError):
    """Inverse kinematics target is unreachable within limits."""


class OutOfChart(LiftSimError):
    """Capacity query outside the rated region of the load chart."""


class NoPath(LiftSimError):
    """Planner exhausted the lattice without reaching the goal."""


class SnapError(LiftSimError):
    """Start/goal cannot be represented on the planning lattice."""


class InvalidScene(LiftSimError):
    """Scene failed validation; carries the issue list."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(f"{i.code}: {i.message}" for i in self.issues))


class BadTimestep(LiftSimError):
    """Session timestep outside the supported range."""


class SessionClosed(LiftSimError):
    """Step requested on a closed session."""


class HashMismatch(LiftSimError):
    """Replay inputs do not match the hashes recorded in the session header."""


class BindError(LiftSimError):
    """The requested serve port is unavailable."""
