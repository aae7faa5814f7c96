"""
Error hierarchy.

- DomainError: the caller asked for something outside an operation's
  preconditions (CLI exit code 2).
- InvariantViolation: a computed object breaks a property the geometry
  guarantees, i.e. a numerical or logic fault (CLI exit code 3).
- VertexHit: a trace runs into a cone point.
"""

from __future__ import annotations


class TetraGeoError(Exception):
    pass


# -----------------------------
# Precondition failures
# -----------------------------


class DomainError(TetraGeoError, ValueError):
    pass


class DegenerateGeometryError(DomainError):
    pass


class NotCoprime(DomainError):
    def __init__(self, p: int, q: int):
        super().__init__(f"({p},{q}) is not coprime")
        self.p = p
        self.q = q


class NonCanonicalType(DomainError):
    def __init__(self, p: int, q: int):
        super().__init__(f"({p},{q}) is not canonical: need 0 <= p <= q")
        self.p = p
        self.q = q


class NonAdjacentFaces(DomainError):
    pass


class OutsideChart(DomainError):
    pass


# -----------------------------
# Trace events
# -----------------------------


class VertexHit(TetraGeoError):
    def __init__(self, message: str, *, location: object | None = None):
        super().__init__(message)
        self.location = location


# -----------------------------
# Invariant failures
# -----------------------------


class InvariantViolation(TetraGeoError):
    pass


class SegmentEscapesDevelopment(InvariantViolation):
    pass


class StructureViolation(InvariantViolation):
    pass


class ClosureFailure(InvariantViolation):
    pass


class SimplicityFailure(InvariantViolation):
    pass


class ConvergenceFailure(InvariantViolation):
    pass
