"""Exception hierarchy shared across the package.

Everything raised on bad user input or violated preconditions derives from
ValidationError, which the command line maps to exit code 2. Anything else
escaping a command is treated as an internal error (exit code 1).
"""


class ValidationError(Exception):
    """Bad input or a violated call precondition."""


class NotMSNE(ValidationError):
    """Operation requires a game with an interior mixed equilibrium."""


class TooShort(ValidationError):
    """Trajectory has fewer than two states."""


class MismatchedPopulationSize(ValidationError):
    """States drawn from populations of different sizes."""


class DegenerateRowMean(ValidationError):
    """A game row of the rotation table averages to exactly zero."""


class NonInteriorStart(ValidationError):
    """ODE integration must start strictly inside the unit square."""


class BoundaryState(ValidationError):
    """Point on the boundary where the invariant of motion diverges."""


class EmptySchedule(ValidationError):
    """Simulation schedule contains no entries."""


class ParseError(ValidationError):
    """Malformed input file; message carries the file and line number."""


class LatticeViolation(ValidationError):
    """Strategy count outside [0, N]."""


class NonContiguousRounds(ValidationError):
    """Trajectory rounds do not increase by exactly 1 from 0."""
