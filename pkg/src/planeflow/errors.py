"""Exception types shared across the package."""

from __future__ import annotations


class PlaneflowError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PlaneflowError):
    """Syntax error in an expression string; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EntiretyViolation(ParseError):
    """The expression would not define an entire function.

    Raised for division by a non-constant and for negative or
    fractional exponents.
    """


class EvaluationOverflow(PlaneflowError):
    """A value or Taylor coefficient left the double range.

    ``node`` is the innermost subexpression whose evaluation overflowed.
    """

    def __init__(self, node, at=None):
        where = f" at z={at}" if at is not None else ""
        super().__init__(f"evaluation overflow in {node!r}{where}")
        self.node = node
        self.at = at


class UnsupportedAntiderivative(PlaneflowError):
    """Antiderivative requested outside the closed expression class.

    ``node`` is the first offending subexpression.
    """

    def __init__(self, node):
        super().__init__(f"no symbolic antiderivative for {node!r}")
        self.node = node


class CorrectorDivergence(PlaneflowError):
    """Newton correction failed to converge even after step refinement."""

    def __init__(self, message: str, z: complex):
        super().__init__(f"{message} (last point {z})")
        self.z = z


class SegmentTruncated(PlaneflowError):
    """Transverse segment tracing met a zero of f before the requested span."""

    def __init__(self, achieved_delta: float, z: complex):
        super().__init__(
            f"segment truncated at |y| = {achieved_delta:.6g} near a zero of f"
        )
        self.achieved_delta = achieved_delta
        self.z = z


class TractViolation(PlaneflowError):
    """Seed or path left the region where the growth-path construction is valid."""
