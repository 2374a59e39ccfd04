"""Exact arithmetic in number fields Q[x]/(m(x)) and unit evaluation.

Elements are kept in power-basis coordinates with exact rationals; zero
testing is therefore exact.  Irreducibility of the modulus is an input
contract, screened only by a rational-root check; a non-invertible unit is
reported as a presentation error rather than silently tolerated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Mapping, Sequence

from .ring import DomainError, LaurentPoly


class FieldPresentationError(ValueError):
    """Bad modulus or an assignment that is not a unit."""


def _poly_trim(c: List[Fraction]) -> List[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _poly_trim(list(a))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, y in enumerate(b):
            a[shift + i] -= factor * y
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_xgcd(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Extended Euclid in Q[x]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while _poly_trim(r1):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _poly_trim([x - y for x, y in _zip_pad(t0, _poly_mul(q, t1))])
    return r0, s0, t0


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _has_rational_root(coeffs: Sequence[Fraction]) -> bool:
    # Clear denominators, then run the rational root theorem.
    from math import lcm

    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    if ints[0] == 0:
        return True  # root at 0
    c0, cn = abs(ints[0]), abs(ints[-1])
    if c0 > 10 ** 9 or cn > 10 ** 9:
        return False  # screen only; large constants are the caller's contract
    ps = [k for k in range(1, c0 + 1) if c0 % k == 0]
    qs = [k for k in range(1, cn + 1) if cn % k == 0]
    for p in ps:
        for q in qs:
            for r in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * r ** i for i, c in enumerate(ints)) == 0:
                    return True
    return False


class NumberField:
    """Q[x]/(m(x)) with m monic; degree 1 presents Q itself."""

    def __init__(self, modulus: Sequence):
        coeffs = [Fraction(c) for c in modulus]
        coeffs = _poly_trim(list(coeffs))
        if len(coeffs) < 2:
            raise FieldPresentationError("modulus must have degree >= 1")
        if coeffs[-1] != 1:
            raise FieldPresentationError("modulus must be monic")
        self.modulus = tuple(coeffs)
        self.degree = len(coeffs) - 1
        if self.degree > 1 and _has_rational_root(coeffs):
            raise FieldPresentationError("modulus has a rational root, hence is reducible")

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"NumberField(modulus={[str(c) for c in self.modulus]})"

    # -- element constructors ----------------------------------------------

    def element(self, coeffs: Sequence) -> "FieldElement":
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            _, c = _poly_divmod(c, list(self.modulus))
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def from_rational(self, q) -> "FieldElement":
        return self.element([Fraction(q)])

    @property
    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_rational(1)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.from_rational(-self.modulus[0])
        return self.element([0, 1])

    # -- arithmetic ---------------------------------------------------------

    def _check(self, a: "FieldElement"):
        if a.field != self:
            raise DomainError("element belongs to a different field presentation")

    def mul(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        self._check(a)
        self._check(b)
        prod = _poly_mul(list(a.coeffs), list(b.coeffs))
        _, rem = _poly_divmod(prod, list(self.modulus))
        return self.element(rem)

    def inv(self, a: "FieldElement") -> "FieldElement":
        self._check(a)
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = _poly_xgcd(_poly_trim(list(a.coeffs)), list(self.modulus))
        if len(g) != 1:
            raise FieldPresentationError(
                "element has no inverse: the modulus is reducible"
            )
        return self.element([c / g[0] for c in s])


class FieldElement:
    """A field element in power-basis coordinates."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self.field._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return self.field.mul(self, other)

    def inv(self) -> "FieldElement":
        return self.field.inv(self)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inv()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inv() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"FieldElement({[str(c) for c in self.coeffs]})"


def field_mul(K: NumberField, a: FieldElement, b: FieldElement) -> FieldElement:
    return K.mul(a, b)


def field_inv(K: NumberField, a: FieldElement) -> FieldElement:
    return K.inv(a)


def evaluate(K: NumberField, assignment: Mapping[int, FieldElement], f: LaurentPoly) -> FieldElement:
    """Evaluate f under variable -> unit assignments, exactly.

    Exponents must be integral (apply level embedding first for rational
    exponents); every assigned element must be invertible.
    """
    inverses = {}
    for i, v in assignment.items():
        if v.is_zero():
            raise FieldPresentationError(f"variable u{i + 1} assigned zero")
        inverses[i] = K.inv(v)  # also certifies invertibility
    total = K.zero
    for m, c in f.terms.items():
        term = K.from_rational(Fraction(c))
        for i, e in enumerate(m):
            if e == 0:
                continue
            if e.denominator != 1:
                raise DomainError(
                    f"fractional exponent {e} remains; apply level embedding first"
                )
            if i not in assignment:
                raise DomainError(f"no assignment for variable u{i + 1}")
            e = int(e)
            base = assignment[i] if e > 0 else inverses[i]
            term = term * base ** abs(e)
        total = total + term
    return total
