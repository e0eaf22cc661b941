"""Exact arithmetic in the degree-4 number field Q[w]/(w^4 - q) for a fixed prime q.

The generator w plays the role of q^(1/4), so v := sqrt(q) = w^2 and every
square or fourth root of a power of q is an exact monomial.  For q prime the
polynomial w^4 - q is Eisenstein, hence irreducible, and the quotient is a
field.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MismatchedContext

SUPPORTED_PRIMES = (2, 3, 5)

_ZERO4 = (Fraction(0), Fraction(0), Fraction(0), Fraction(0))


class Coeff:
    """Element c0 + c1*w + c2*w^2 + c3*w^3 of Q[w]/(w^4 - q).

    Coordinates are reduced Fractions, so equality and hashing are
    structural: two elements are equal iff all four coordinates agree.
    """

    __slots__ = ("q", "c")

    def __init__(self, q: int, coords=(1, 0, 0, 0)):
        if q not in SUPPORTED_PRIMES:
            raise ValueError(f"q must be one of {SUPPORTED_PRIMES}, got {q}")
        self.q = q
        self.c = tuple(Fraction(x) for x in coords)
        if len(self.c) != 4:
            raise ValueError("need exactly 4 coordinates")

    # -- constructors -------------------------------------------------
    @classmethod
    def from_fraction(cls, q: int, x) -> "Coeff":
        return cls(q, (Fraction(x), 0, 0, 0))

    @classmethod
    def zero(cls, q: int) -> "Coeff":
        return cls(q, _ZERO4)

    @classmethod
    def one(cls, q: int) -> "Coeff":
        return cls(q, (1, 0, 0, 0))

    # -- helpers ------------------------------------------------------
    def _check(self, other: "Coeff") -> None:
        if self.q != other.q:
            raise MismatchedContext(f"mixed ambient primes {self.q} and {other.q}")

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def is_rational(self) -> bool:
        return self.c[1] == 0 and self.c[2] == 0 and self.c[3] == 0

    def in_v_subring(self) -> bool:
        """True when the element lies in Q[v] = Q[w^2] (no odd w powers)."""
        return self.c[1] == 0 and self.c[3] == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Coeff(self.q, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Coeff(self.q, tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return Coeff(self.q, tuple(-a for a in self.c))

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        a, b, q = self.c, other.c, self.q
        out = [Fraction(0)] * 4
        for i in range(4):
            if a[i] == 0:
                continue
            for j in range(4):
                if b[j] == 0:
                    continue
                k = i + j
                # reduction rule w^4 = q
                if k < 4:
                    out[k] += a[i] * b[j]
                else:
                    out[k - 4] += a[i] * b[j] * q
        return Coeff(q, out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def _coerce(self, other):
        if isinstance(other, Coeff):
            return other
        if isinstance(other, (int, Fraction)):
            return Coeff.from_fraction(self.q, other)
        return NotImplemented

    def inverse(self) -> "Coeff":
        """Multiplicative inverse, by solving the 4x4 multiplication system."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q[w]/(w^4 - q)")
        if self.is_rational():
            return Coeff.from_fraction(self.q, Fraction(1) / self.c[0])
        q = self.q
        # columns: coordinates of self * w^j
        cols = []
        acc = Coeff.one(q)
        w = Coeff(q, (0, 1, 0, 0))
        for _ in range(4):
            cols.append((self * acc).c)
            acc = acc * w
        # solve M x = e0 with M[i][j] = cols[j][i], over Q
        m = [[cols[j][i] for j in range(4)] + [Fraction(1 if i == 0 else 0)] for i in range(4)]
        n = 4
        row = 0
        for col in range(n):
            piv = next((r for r in range(row, n) if m[r][col] != 0), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = Fraction(1) / m[row][col]
            m[row] = [x * inv for x in m[row]]
            for r in range(n):
                if r != row and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[row])]
            row += 1
        if row < n:
            raise ZeroDivisionError("element is a zero divisor (should not happen for prime q)")
        return Coeff(q, tuple(m[i][4] for i in range(4)))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Coeff.one(self.q)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- equality / display -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Coeff.from_fraction(self.q, other)
        return isinstance(other, Coeff) and self.q == other.q and self.c == other.c

    def __hash__(self):
        return hash((self.q, self.c))

    def __repr__(self):
        return f"Coeff(q={self.q}, {self.c})"

    def __str__(self):
        if self.is_zero():
            return "0"
        names = ["", "w", "v", "w^3"]
        parts = []
        for x, sym in zip(self.c, names):
            if x == 0:
                continue
            if sym == "":
                parts.append(str(x))
            elif x == 1:
                parts.append(sym)
            elif x == -1:
                parts.append(f"-{sym}")
            else:
                parts.append(f"{x}*{sym}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialization -------------------------------------------------
    def to_json(self):
        return [f"{x.numerator}/{x.denominator}" for x in self.c]

    @classmethod
    def from_json(cls, q: int, data) -> "Coeff":
        return cls(q, tuple(Fraction(s) for s in data))


def q_power(q: int, e) -> Coeff:
    """w^(4e) as an exact monomial; e may be an integer, half- or quarter-integer."""
    e = Fraction(e)
    k = e * 4
    if k.denominator != 1:
        raise ValueError(f"exponent {e} is not a quarter-integer")
    k = k.numerator
    neg = k < 0
    k = abs(k)
    m, r = divmod(k, 4)
    coords = [Fraction(0)] * 4
    coords[r] = Fraction(q) ** m
    out = Coeff(q, coords)
    return out.inverse() if neg else out
