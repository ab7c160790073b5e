"""Exception hierarchy shared by every layer of the engine."""


class JetFrameError(Exception):
    """Base class for all engine errors."""


class MalformedExpressionError(JetFrameError):
    """Division by the zero polynomial or an otherwise ill-formed scalar."""


class InvalidDirectionError(JetFrameError):
    """A function atom was differentiated along a coordinate it does not depend on."""


class SingularPointError(JetFrameError):
    """Numeric evaluation hit a pole of a rational expression."""


class MissingBindingError(JetFrameError):
    """A numeric binding lacks the callable needed to evaluate an atom."""


class RadicandMismatchError(JetFrameError):
    """Two expressions carrying different radicals were combined."""


class BasisMismatchError(JetFrameError):
    """Forms over different coframe bases were combined."""


class WrongSpaceError(JetFrameError):
    """An ambient operation received section atoms (pull back first)."""


class InternalConsistencyError(JetFrameError):
    """A structural identity that must hold symbolically failed."""


class UnresolvedAtomError(JetFrameError):
    """A pulled-back f-partial is not determined by the section."""

    def __init__(self, atoms):
        self.atoms = sorted(str(a) for a in atoms)
        super().__init__("unresolved atoms under pullback: " + ", ".join(self.atoms))


class IncompatibleSectionError(JetFrameError):
    """The section violates the compatibility conditions."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("incompatible section: " + "; ".join(self.violations))


class ParseError(JetFrameError):
    """Syntax or identifier error in an input expression."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")
