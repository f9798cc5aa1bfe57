"""Exception types raised by lcawigner."""


class LCAError(ValueError):
    """Base class for invalid-input errors (the CLI maps these to exit code 2)."""


class NotTwoRegular(LCAError):
    """The doubling map x -> 2x is not invertible on the group in question."""


class CapExceeded(LCAError):
    """An enumeration was requested on a group larger than the configured cap."""


class GroupMismatch(LCAError):
    """Operands live on different groups, or an element has the wrong shape."""


class NotASubgroup(LCAError):
    pass


class NonRealTable(LCAError):
    pass


class ZeroVector(LCAError):
    pass
