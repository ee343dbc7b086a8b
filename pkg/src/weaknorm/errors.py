"""Exception hierarchy shared by every module of the package."""


class GroupError(Exception):
    """Base class for all errors raised by weaknorm."""


class InvalidPermutation(GroupError, ValueError):
    pass


class OrderCapExceeded(GroupError):
    def __init__(self, cap: int, reached: int):
        super().__init__(f"group closure exceeded the order cap {cap} (reached {reached} elements)")
        self.cap = cap
        self.reached = reached


class LatticeCapExceeded(GroupError):
    def __init__(self, cap: int, estimate: int):
        super().__init__(f"subgroup enumeration exceeded the cap {cap} (at least {estimate} subgroups)")
        self.cap = cap
        self.estimate = estimate


class NotNormal(GroupError, ValueError):
    pass


class ForeignSubgroup(GroupError, ValueError):
    pass


class NotSolvable(GroupError, ValueError):
    pass


class NotPSolvable(GroupError, ValueError):
    pass


class ParseError(GroupError, ValueError):
    pass


class OrderMismatch(GroupError, ValueError):
    pass


class UnknownFixture(GroupError, KeyError):
    pass
