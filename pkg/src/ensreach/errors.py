"""Exception hierarchy shared by the library and the command line front end."""


class EnsreachError(Exception):
    """Base class for all errors raised by this package."""


class ConditionError(EnsreachError):
    """A structural condition required by a method does not hold.

    ``check`` names the failed test (``"N1"``, ``"S2"`` ...).
    """

    def __init__(self, check, message):
        super().__init__(f"check_{check} failed: {message}")
        self.check = check


class ArcClassificationError(EnsreachError):
    """An arc is neither a real interval nor an arc of the unit circle."""


class DegreeCapError(EnsreachError):
    """A certified degree or pole count exceeds its configured cap."""


class GridError(EnsreachError):
    """The parameter grid is too coarse to resolve the requested object."""


class ToleranceError(EnsreachError):
    """A measured error could not be brought below its allotted budget."""
