"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class ProfpresError(Exception):
    """Base class for all errors raised by this package."""


class EndpointMismatch(ProfpresError):
    """Two paths were composed whose endpoints do not meet."""


class CompositionMismatch(ProfpresError):
    """Consecutive symbols in a path do not compose."""


class UnknownSymbol(ProfpresError):
    """A symbol name does not resolve in the presentation at hand."""


class UnknownSort(ProfpresError):
    """A sort name does not resolve in the presentation at hand."""


class AmbiguousSymbol(ProfpresError):
    """A symbol name resolves to more than one declaration."""


class ForeignPath(ProfpresError):
    """A path does not belong to the presentation or theory it was used with."""


class NonParallel(ProfpresError):
    """Two paths (or morphisms) that must be parallel are not."""


class KindMismatch(ProfpresError):
    """Two entities of different kinds were combined."""


class BaseMismatch(ProfpresError):
    """Two presentations or tables disagree on a shared base category."""


class FrameMismatch(ProfpresError):
    """Two cells are not composable because their frames do not match."""


class MiddleMismatch(ProfpresError):
    """Two profunctor tables do not share their middle category table."""


class NonGlobular(ProfpresError):
    """A globular morphism was required but the boundary maps are not identities."""


class TypeMismatch(ProfpresError):
    """A term or generator was used at the wrong sort."""


class ReplayError(ProfpresError):
    """A derivation failed to replay under the stated inference rules."""


class NongenerativityUnverified(ProfpresError):
    """Currying was attempted on a presentation whose nongenerativity could not
    be established; carries the short left cross-paths lacking witnesses."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(
            "no right cross-path witness found for: "
            + ", ".join(str(m) for m in self.missing)
        )


class CurryValidationFailed(ProfpresError):
    """The curried presentation built from an uncurried one failed validation,
    signalling a conservativity failure; carries the offending equation."""

    def __init__(self, equation, detail=""):
        self.equation = equation
        msg = f"curried output invalid on equation {equation}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class SourceSpan:
    """Source location of a token or construct, for diagnostics."""

    file: str
    line: int
    column: int
    end_line: int
    end_column: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class DslError(ProfpresError):
    """A DSL-level error carrying a source span."""

    def __init__(self, message: str, span: SourceSpan):
        self.span = span
        super().__init__(f"{span}: {message}")


class LexError(DslError):
    pass


class ParseError(DslError):
    pass


class ResolveError(DslError):
    pass
