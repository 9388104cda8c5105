"""Exception hierarchy shared by every layer of the workbench."""


class EvsemError(Exception):
    pass


class ValidationError(EvsemError, ValueError):
    """A value violates a well-formedness condition (λI, joinability, ...)."""


class NotJoinable(ValidationError):
    pass


class NotLambdaI(ValidationError):
    pass


class DegreeMismatch(ValidationError):
    pass


class DegreeUnderflow(ValidationError):
    pass


class BlockedRedex(EvsemError):
    pass


class InvalidSite(EvsemError):
    pass


class RuleMismatch(EvsemError):
    def __init__(self, path, reason):
        self.path = tuple(path)
        self.reason = reason
        where = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"at {where}: {reason}")


class GrammarViolation(RuleMismatch):
    pass


class ModeError(EvsemError):
    pass


class NotClosed(EvsemError, ValueError):
    pass


class ParseError(EvsemError, ValueError):
    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")
