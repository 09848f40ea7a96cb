"""2x2 matrices over the Laurent ring, plus the trace / upper-right helpers."""

from __future__ import annotations

from . import laurent
from .errors import DomainError, SignError
from .laurent import LaurentPoly, canonical_string


class Mat2:
    """Immutable 2x2 matrix with LaurentPoly entries."""

    __slots__ = ("a11", "a12", "a21", "a22")

    def __init__(self, a11, a12, a21, a22):
        self.a11 = _p(a11)
        self.a12 = _p(a12)
        self.a21 = _p(a21)
        self.a22 = _p(a22)

    def __matmul__(self, other):
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    __mul__ = __matmul__

    def __eq__(self, other):
        return isinstance(other, Mat2) and (
            self.a11 == other.a11
            and self.a12 == other.a12
            and self.a21 == other.a21
            and self.a22 == other.a22
        )

    def __hash__(self):
        return hash((self.a11, self.a12, self.a21, self.a22))

    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def __str__(self):
        e = [canonical_string(x) for x in self.entries()]
        return f"[[{e[0]}, {e[1]}], [{e[2]}, {e[3]}]]"

    __repr__ = __str__

    def inverse(self):
        """Inverse when the determinant is plus or minus a monomial."""
        d = det(self)
        if d.is_zero() or not d.is_monomial():
            raise DomainError("matrix inverse requires a unit determinant")
        return Mat2(
            self.a22 / d, (-self.a12) / d, (-self.a21) / d, self.a11 / d
        )


def _p(value):
    if isinstance(value, LaurentPoly):
        return value
    return laurent.const(value)


def identity():
    return Mat2(laurent.one(), laurent.zero(), laurent.zero(), laurent.one())


def mat_mul(a, b):
    return a @ b


def trace(m):
    return m.a11 + m.a22


def upper_right(m):
    return m.a12


def det(m):
    return m.a11 * m.a22 - m.a12 * m.a21


def normalize_sign(p):
    """Strip one global sign; mixed-sign coefficients are an error.

    Used to realize absolute values of traces and upper-right entries: a
    valid standard path yields coefficients of a single sign.
    """
    coeffs = p.coefficients()
    if all(c > 0 for c in coeffs):
        return p
    if all(c < 0 for c in coeffs):
        return -p
    raise SignError("mixed signs; not a standard path product")
