"""Exact scalars, dense univariate polynomials and rational functions.

Rationals are :class:`gmpy2.mpq` values (ints and :class:`fractions.Fraction`
are accepted wherever a scalar is expected).  Elements of a cyclotomic field Q(zeta_m)
are :class:`Cyclo` instances holding the reduced residue modulo the m-th
cyclotomic polynomial.  Both interoperate through the usual operators, so
the polynomial and series code below is written once for either field.
"""

from __future__ import annotations

from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from gmpy2 import mpq


class FieldMismatchError(ValueError):
    """Arithmetic between elements of different cyclotomic fields."""


def rational(num: int, den: int = 1) -> mpq:
    """Reduced rational num/den with positive denominator."""
    if den == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return mpq(num, den)


# -- cyclotomic fields -------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("conductor must be positive")
    # x^m - 1 divided by every Phi_d, d | m, d < m
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _int_exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _int_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] // b[-1]
        out[k] = c
        for j, bj in enumerate(b):
            a[k + j] -= c * bj
    assert not any(a[: len(b) - 1])
    return out


def euler_phi(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


class Cyclo:
    """Element of Q(zeta_m), stored as coefficients of 1, zeta, ..., zeta^(phi(m)-1)."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Sequence):
        mod = cyclotomic_poly(m)
        deg = len(mod) - 1
        c = [mpq(x) for x in coeffs]
        # reduce modulo the monic cyclotomic polynomial
        for k in range(len(c) - 1, deg - 1, -1):
            lead = c[k]
            if lead:
                for j in range(deg):
                    c[k - deg + j] -= lead * mod[j]
        c = c[:deg] + [mpq(0)] * (deg - len(c))
        self.m = m
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, m: int, coeffs: tuple) -> "Cyclo":
        obj = object.__new__(cls)
        obj.m = m
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def zeta(cls, m: int, power: int = 1) -> "Cyclo":
        power %= m
        return cls(m, [0] * power + [1])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.m != self.m:
                raise FieldMismatchError(f"Q(zeta_{self.m}) vs Q(zeta_{other.m})")
            return other.coeffs
        if isinstance(other, Rational):
            return (mpq(other),) + (mpq(0),) * (len(self.coeffs) - 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo._raw(self.m, tuple(a + b for a, b in zip(self.coeffs, o)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo._raw(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo._raw(self.m, tuple(a - b for a, b in zip(self.coeffs, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Cyclo._raw(self.m, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = len(o)
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o):
                    if b:
                        prod[i + j] += a * b
        mod = cyclotomic_poly(self.m)
        for k in range(2 * n - 2, n - 1, -1):
            lead = prod[k]
            if lead:
                for j in range(n):
                    if mod[j]:
                        prod[k - n + j] -= lead * mod[j]
        return Cyclo._raw(self.m, tuple(mpq(c) for c in prod[:n]))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return Cyclo(self.m, [1 / self.coeffs[0]])
        a = Poly(self.coeffs)
        g, s, _ = a.gcdex(Poly(cyclotomic_poly(self.m)))
        # the cyclotomic polynomial is irreducible, so g is a nonzero constant
        assert g.degree() == 0
        return Cyclo(self.m, (s * (1 / g.coeffs[0])).coeffs)

    def __truediv__(self, other):
        if isinstance(other, Cyclo):
            return self * other.inverse()
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Cyclo(self.m, [a / other for a in self.coeffs])
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Cyclo(self.m, [1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash((self.m, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Cyclo({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (f"z{self.m}" if k == 1 else f"z{self.m}^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return "(" + "+".join(parts).replace("+-", "-") + ")" if parts else "0"


def cyclo_make(m: int, coeffs: Sequence):
    """Reduced element of Q(zeta_m); conductors with phi(m) = 1 collapse to mpq."""
    if m < 1:
        raise ValueError("conductor must be positive")
    c = Cyclo(m, coeffs)
    if len(c.coeffs) == 1:
        return c.coeffs[0]
    return c


def inv(a):
    """Multiplicative inverse of a field scalar."""
    if isinstance(a, Cyclo):
        return a.inverse()
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / mpq(a)


def conductor(a) -> int:
    return a.m if isinstance(a, Cyclo) else 1


def common_conductor(values: Iterable) -> int:
    ms = {conductor(v) for v in values} - {1}
    if len(ms) > 1:
        raise FieldMismatchError(f"mixed conductors {sorted(ms)}")
    return ms.pop() if ms else 1


def scalar_to_json(a):
    if isinstance(a, Cyclo):
        if a.is_rational():
            return _frac_str(a.coeffs[0])
        return {"m": a.m, "coeffs": [_frac_str(c) for c in a.coeffs]}
    return _frac_str(mpq(a))


def _frac_str(c) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return cyclo_make(obj["m"], [mpq(c) for c in obj["coeffs"]])
    return mpq(obj)


# -- polynomials -------------------------------------------------------------

class Poly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [mpq(x) if isinstance(x, int) else x for x in coeffs]
        if any(isinstance(x, float) for x in c):
            raise TypeError("floating-point coefficient in an exact polynomial")
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls([1])
        for r in roots:
            out = out * cls([-r, 1])
        return out

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        if not isinstance(other, (Poly, Rational, Cyclo)):
            return NotImplemented
        o = self._lift(other).coeffs
        a = self.coeffs
        n = max(len(a), len(o))
        return Poly([(a[k] if k < len(a) else 0) + (o[k] if k < len(o) else 0) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, (Poly, Rational, Cyclo)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Rational, Cyclo)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out, base = Poly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree()
        ilc = inv(other.lc())
        if len(r) - 1 < db:
            return Poly(), Poly(r)
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c:
                c = c * ilc
                q[k - db] = c
                for j, b in enumerate(other.coeffs):
                    if b:
                        r[k - db + j] -= c * b
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Poly":
        if not self:
            return self
        return self * inv(self.lc())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def gcdex(self, other: "Poly"):
        """(g, s, t) with s*self + t*other = g monic."""
        r0, r1 = self, other
        s0, s1 = Poly([1]), Poly()
        t0, t1 = Poly(), Poly([1])
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        c = inv(r0.lc())
        return r0 * c, s0 * c, t0 * c

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; x may be a scalar, a Poly or a power series."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def valuation(self) -> int:
        """Multiplicity of the root 0."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ValueError("valuation of the zero polynomial")

    def to_json(self):
        return [scalar_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj) -> "Poly":
        return cls([scalar_from_json(c) for c in obj])

    def format(self, var: str = "L") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            cs = str(c)
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}")
        return "+".join(terms).replace("+-", "-")

    def __repr__(self):
        return f"Poly({self.format('x')})"


# -- rational functions ------------------------------------------------------

class RationalFunction:
    """num/den in one variable with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = Poly(), Poly([1])
        elif not reduced:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            c = inv(den.lc())
            if c != 1:
                num, den = num * c, den * c
        self.num = num
        self.den = den

    @classmethod
    def var(cls) -> "RationalFunction":
        return cls(Poly.x())

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (Poly, Rational, Cyclo)):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Rational, Cyclo)):
            return RationalFunction(self.num * other, self.den, reduced=bool(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        # cross-cancel before multiplying to keep degrees small
        g1 = self.num.gcd(o.den) if self.num and o.den.degree() > 0 else Poly([1])
        g2 = o.num.gcd(self.den) if o.num and self.den.degree() > 0 else Poly([1])
        num = self.num.exact_div(g1) * o.num.exact_div(g2)
        den = self.den.exact_div(g2) * o.den.exact_div(g1)
        return RationalFunction(num, den, reduced=True) if den.lc() == 1 else RationalFunction(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, reduced=True)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, x):
        d = self.den(x)
        if isinstance(d, (Rational, Cyclo)):
            return self.num(x) * inv(d)
        return self.num(x) * d.inverse()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def format(self, var: str = "L", base: Poly | None = None) -> str:
        """Readable form; with ``base`` a denominator c*base^k prints as (base)^-k."""
        num = self.num.format(var)
        if self.is_polynomial():
            return num
        if base is not None:
            k = power_of(self.den, base)
            if k is not None:
                e, c = k
                body = self.num * inv(c)
                return f"({base.format(var)})^-{e}*({body.format(var)})"
        return f"({num})/({self.den.format(var)})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj) -> "RationalFunction":
        return cls(Poly.from_json(obj["num"]), Poly.from_json(obj["den"]))

    def __repr__(self):
        return f"RationalFunction({self.format()})"


def power_of(p: Poly, base: Poly):
    """(k, c) with p == c * base**k for a scalar c, or None."""
    if base.degree() < 1:
        raise ValueError("base must be non-constant")
    k = 0
    while p.degree() >= base.degree():
        q, r = divmod(p, base)
        if r:
            return None
        p, k = q, k + 1
    if p.degree() != 0:
        return None
    return k, p.coeffs[0]


def squarefree_part(p: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of p (characteristic 0)."""
    g = p.gcd(p.derivative())
    return p.exact_div(g).monic() if g.degree() > 0 else p.monic()
