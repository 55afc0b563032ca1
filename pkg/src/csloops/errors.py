"""Shared exception types.

Each exception names a pipeline stage so the CLI can report where a run
failed: parse, frame, basis, well-definedness, B, A, loop.
"""


class CsloopsError(Exception):
    """Base class for all toolkit errors."""

    stage = "internal"


class PresentationError(CsloopsError):
    """Malformed presentation text; carries the offending line number."""

    stage = "parse"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InconsistentPresentationError(CsloopsError):
    """The collected multiplication table is not associative."""

    stage = "parse"


class FrameError(CsloopsError):
    """The subgroup frame (Z, R, M) does not have the required shape."""

    stage = "frame"


class BasisError(CsloopsError):
    """No admissible basis triple exists for the given frame."""

    stage = "basis"


class WellDefinednessError(CsloopsError):
    """Seeded cocycle values conflict on a coset of the modulus subgroup.

    ``conflict`` holds the two subset expressions (tuples of commutator
    index pairs) that land on the same coset with different seeded values.
    """

    stage = "well-definedness"

    def __init__(self, message, conflict=None):
        super().__init__(message)
        self.conflict = conflict


class LatinSquareError(CsloopsError):
    """A multiplication table is not a Latin square with identity."""

    stage = "loop"


class SizeOverflowError(CsloopsError):
    """A group exceeded the explicit-materialization bound."""

    stage = "loop"
