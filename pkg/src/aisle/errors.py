"""Exception hierarchy shared by the engine and the command line."""


class AisleError(Exception):
    """Base class for every error raised on user-controllable input."""

    exit_code = 2
    kind = "error"

    def to_dict(self):
        return {"kind": self.kind, "message": str(self)}


class RingMismatch(AisleError):
    kind = "ring-mismatch"


class InvalidInput(AisleError):
    kind = "invalid-input"


class ParseError(AisleError):
    kind = "parse-error"

    def __init__(self, message, line=None, col=None, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        where = f" at line {line}, column {col}" if line is not None else ""
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message}{where}{exp}")

    def to_dict(self):
        d = super().to_dict()
        d.update(line=self.line, col=self.col, expected=list(self.expected), message=self.message)
        return d


class ResourceExhausted(AisleError):
    """The Groebner pair budget ran out; never a wrong answer, just no answer."""

    exit_code = 3
    kind = "resource-exhausted"


class Undetermined(AisleError):
    """A finite scan window was exhausted without settling the question."""

    kind = "undetermined"


class InconsistentEvidence(AisleError):
    kind = "inconsistent-evidence"

    def __init__(self, message, chain=()):
        self.chain = list(chain)
        super().__init__(message)

    def to_dict(self):
        d = super().to_dict()
        d["chain"] = self.chain
        return d


class InvariantViolation(AisleError):
    """An internal consistency check failed (d∘d != 0, non-commuting square, ...)."""

    exit_code = 4
    kind = "invariant-violation"
