"""Exception types raised across gemkit.

Every error carries a short machine-readable ``code`` used by the CLI when
reporting failures on stderr.
"""

from __future__ import annotations


class GemError(ValueError):
    code = "gem-error"


# construction
class NotAMatching(GemError):
    code = "not-a-matching"


class FixedPoint(GemError):
    code = "fixed-point"


class Disconnected(GemError):
    code = "disconnected"

    def __init__(self, message: str, components: list[list[int]] | None = None):
        super().__init__(message)
        self.components = components or []


# static predicates
class NotAGem(GemError):
    code = "not-a-gem"


class NotACrystallization(GemError):
    code = "not-a-crystallization"


class NotBipartite(GemError):
    code = "not-bipartite"


# moves
class NotADipole(GemError):
    code = "not-a-dipole"


class BadAttachment(GemError):
    code = "bad-attachment"


class NotDipoleAfterInsertion(GemError):
    code = "not-dipole-after-insertion"


class SameEdge(GemError):
    code = "same-edge"


class NotATwistor(GemError):
    code = "not-a-twistor"


class NotTwoEdges(GemError):
    code = "not-two-edges"


class NotA2Dipole(GemError):
    code = "not-a-2-dipole"


class NotBlobAfterFlip(GemError):
    code = "not-blob-after-flip"


# gray graph / search
class NoAdequateSiteFound(GemError):
    code = "no-adequate-site"


class EdgeNotInGrayGraph(GemError):
    code = "edge-not-in-gray-graph"


# jordan
class InvalidDiagram(GemError):
    code = "invalid-diagram"


class GenerationFailed(GemError):
    code = "generation-failed"


class No2DipoleFound(GemError):
    code = "no-2-dipole"


# io
class MismatchedGray(GemError):
    code = "mismatched-gray"


class GemSyntaxError(GemError):
    code = "syntax-error"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SemanticError(GemError):
    code = "semantic-error"

    def __init__(self, message: str, line: int, cause: GemError | None = None):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.cause = cause
