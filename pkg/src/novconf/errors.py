"""Error taxonomy for novconf.

Precondition violations raise; failed identity checks never do, they come
back as reports carrying exact residuals.
"""

from __future__ import annotations


class NovConfError(Exception):
    """Base class for every error raised by novconf."""


class UsageError(NovConfError, ValueError):
    """A documented precondition was violated by the caller."""


class ClosureError(UsageError):
    """A derived bracket leaves the span of the presentation."""

    def __init__(self, pair: tuple[str, str], message: str) -> None:
        self.pair = pair
        super().__init__(f"closure failure at ({pair[0]}, {pair[1]}): {message}")


class AxiomError(UsageError):
    """Input structure fails an axiom it is required to satisfy."""

    def __init__(self, axiom: str, witness: tuple[str, ...], residual: str) -> None:
        self.axiom = axiom
        self.witness = witness
        self.residual = residual
        super().__init__(f"axiom {axiom} fails on {witness}: residual {residual}")


class CertificateError(NovConfError):
    """A certificate references a generator that is not in its context."""


class ParseError(NovConfError):
    """Syntax error in a script, with a 1-based position."""

    def __init__(
        self,
        line: int,
        column: int,
        offset: int,
        expected: tuple[str, ...],
        found: str,
    ) -> None:
        self.line = line
        self.column = column
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        self.found = found
        wanted = ", ".join(self.expected) if self.expected else "nothing"
        super().__init__(f"{line}:{column}: expected {wanted}, found {found}")
