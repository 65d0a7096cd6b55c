"""Exception types shared across the package."""


class ArtifactError(Exception):
    pass


class GradingError(ArtifactError, ValueError):
    """Degree vectors or grading data that do not fit together."""


class RingError(ArtifactError, ValueError):
    """An operation needs an inverse the coefficient ring does not have."""


class NotAComplexError(ArtifactError):
    def __init__(self, degree, row, col, value):
        self.degree = degree
        self.entry = (row, col, value)
        super().__init__(
            f"d∘d != 0 at degree {degree}: entry ({row}, {col}) = {value}"
        )


class DgLaAxiomError(ArtifactError):
    def __init__(self, axiom, detail=""):
        self.axiom = axiom
        super().__init__(f"{axiom} fails" + (f": {detail}" if detail else ""))


class WindowError(ArtifactError):
    """A truncated Hochschild window cannot be certified as exact."""


class StructureError(ArtifactError, ValueError):
    """Malformed in-memory structure (type errors in chains, bad metadata)."""


class ParseError(ArtifactError, ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
