"""Exception hierarchy shared by all modules."""


class SSetError(Exception):
    pass


class InvalidParameter(SSetError, ValueError):
    pass


class InvalidInput(SSetError, ValueError):
    """Malformed or inconsistent input (e.g. a non-commuting square)."""


class CertificateRejected(SSetError):
    def __init__(self, stage: int, reason: str):
        super().__init__(f"stage {stage}: {reason}")
        self.stage = stage
        self.reason = reason


class InsufficientFillers(SSetError):
    """A required filler search was exhausted; not a mathematical refutation."""

    def __init__(self, step: str, detail: str = ""):
        super().__init__(f"insufficient fillers at {step}" + (f": {detail}" if detail else ""))
        self.step = step
        self.detail = detail


class ParseError(SSetError):
    kind = "parse-error"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"{line}:{column}: {self.kind}: {message}")
        self.message = message
        self.line = line
        self.column = column


class SyntaxDiagnostic(ParseError):
    kind = "syntax-error"


class IndexOutOfRange(ParseError):
    kind = "index-out-of-range"


class DanglingReference(ParseError):
    kind = "dangling-reference"


class IdentityViolation(ParseError):
    kind = "identity-violation"
