"""
Errors raised by the sublorentz modules.

All of them derive from ValueError so callers that only guard against bad
input keep working.
"""


class SubLorentzError(ValueError):
    """Base class for every error raised by the package."""


class NonHorizontal(SubLorentzError):
    pass


class InadmissibleControl(SubLorentzError):
    pass


class NegativeParameter(SubLorentzError):
    pass


class OutOfDomain(SubLorentzError):
    pass


class NonpositiveTime(SubLorentzError):
    pass


class NotInterior(SubLorentzError):
    pass


class Unreachable(SubLorentzError):
    pass


class DegenerateTarget(SubLorentzError):
    pass


class NoFeasibleSchedule(SubLorentzError):
    pass


class BadGrid(SubLorentzError):
    pass


class EmptySection(SubLorentzError):
    pass


class SolverFailure(SubLorentzError):
    """A bracketed root solve did not converge."""
