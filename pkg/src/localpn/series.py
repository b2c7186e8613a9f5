"""Truncated power series in q, (q, z) bi-graded series and differential operators.

``QSeries`` holds c_0..c_N exactly; every operation is exact to the
truncation order N.  ``QZSeries`` stores, for each power q^d, a finite
Laurent vector in z with exponents -d..zmax.  ``DiffOperator`` is a
polynomial in z and a derivation with coefficients in any differential
ring (power series with D = q d/dq, or rational functions in L with d/dL).
"""

from __future__ import annotations

from math import comb
from numbers import Rational
from typing import Callable, Sequence

from .scalars import Cyclo, Poly, cyclotomic_poly, inv, mpq, scalar_from_json, scalar_to_json

DEFAULT_ORDER = 30


class NonIntegrableError(ArithmeticError):
    """Anti-derivative requested for a series with nonzero constant term."""


class DegeneracyError(ArithmeticError):
    """A Newton step or closed form hit a vanishing leading quantity."""


def _is_scalar(x) -> bool:
    return isinstance(x, (Rational, Cyclo))


class QSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, trunc: int | None = None):
        c = list(coeffs)
        if trunc is not None:
            c = c[: trunc + 1] + [0] * (trunc + 1 - len(c))
        if not c:
            raise ValueError("a series needs at least one coefficient")
        if any(isinstance(x, float) for x in c):
            raise TypeError("floating-point coefficient in an exact series")
        self.coeffs = tuple(mpq(x) if isinstance(x, int) else x for x in c)

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def const(cls, c, trunc: int = DEFAULT_ORDER) -> "QSeries":
        return cls([c], trunc)

    @classmethod
    def q(cls, trunc: int = DEFAULT_ORDER) -> "QSeries":
        return cls([0, 1], trunc)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, n: int) -> "QSeries":
        return QSeries(self.coeffs, n)

    def _align(self, other):
        if isinstance(other, QSeries):
            n = min(self.trunc, other.trunc)
            return self.coeffs[: n + 1], other.coeffs[: n + 1]
        if _is_scalar(other):
            return self.coeffs, (other,) + (0,) * self.trunc
        return None, None

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return QSeries([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return QSeries([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return QSeries([x * other for x in self.coeffs])
        if not isinstance(other, QSeries):
            return NotImplemented
        return ps_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            c = inv(other)
            return QSeries([x * c for x in self.coeffs])
        if isinstance(other, QSeries):
            return ps_mul(self, ps_invert(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return ps_invert(self) * other
        return NotImplemented

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return ps_invert(self) ** (-k)
        out = QSeries.const(1, self.trunc)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "QSeries":
        return ps_invert(self)

    def __eq__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return all(x == y for x, y in zip(a, b))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def shift(self, k: int = 1) -> "QSeries":
        """Multiply by q^k keeping the truncation order."""
        return QSeries([0] * k + list(self.coeffs[: len(self.coeffs) - k]))

    def first_nonzero(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def to_json(self):
        return {"var": "q", "trunc": self.trunc, "coeffs": [scalar_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "QSeries":
        return cls([scalar_from_json(c) for c in obj["coeffs"]], obj["trunc"])

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        return f"QSeries([{shown}{', ...' if self.trunc > 5 else ''}], trunc={self.trunc})"


def _convolve(x, y, n):
    out = []
    for k in range(n + 1):
        acc = mpq(0)
        for i in range(k + 1):
            xi = x[i]
            if xi:
                yk = y[k - i]
                if yk:
                    acc = acc + xi * yk
        out.append(acc)
    return out


def _components(x, m, deg):
    comps = [[mpq(0)] * len(x) for _ in range(deg)]
    for k, c in enumerate(x):
        if isinstance(c, Cyclo):
            for r, v in enumerate(c.coeffs):
                comps[r][k] = v
        else:
            comps[0][k] = c
    return comps


def ps_mul(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.trunc, b.trunc)
    x, y = a.coeffs, b.coeffs
    m = next((c.m for c in x + y if isinstance(c, Cyclo)), None)
    if m is None:
        return QSeries(_convolve(x, y, n))
    # multiply component series over Q, then reduce modulo Phi_m once per coefficient
    mod = cyclotomic_poly(m)
    deg = len(mod) - 1
    xa, ya = _components(x[:n + 1], m, deg), _components(y[:n + 1], m, deg)
    prod = [[0] * (n + 1) for _ in range(2 * deg - 1)]
    for r in range(deg):
        if not any(xa[r]):
            continue
        for t in range(deg):
            if not any(ya[t]):
                continue
            conv = _convolve(xa[r], ya[t], n)
            row = prod[r + t]
            for k in range(n + 1):
                row[k] += conv[k]
    for top in range(2 * deg - 2, deg - 1, -1):
        lead = prod[top]
        for j in range(deg):
            if mod[j]:
                row = prod[top - deg + j]
                for k in range(n + 1):
                    if lead[k]:
                        row[k] -= lead[k] * mod[j]
    return QSeries([Cyclo._raw(m, tuple(mpq(prod[r][k]) for r in range(deg))) for k in range(n + 1)])


def ps_invert(a: QSeries) -> QSeries:
    if not a.coeffs[0]:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    c0 = inv(a.coeffs[0])
    x = a.coeffs
    out = [c0]
    for k in range(1, a.trunc + 1):
        acc = mpq(0)
        for i in range(1, k + 1):
            if x[i]:
                acc = acc + x[i] * out[k - i]
        out.append(-acc * c0)
    return QSeries(out)


def ps_sqrt(a: QSeries, root0=None) -> QSeries:
    """Square root with constant term ``root0``.

    Without ``root0`` the constant term must be 1 or the square of a rational.
    """
    c0 = a.coeffs[0]
    if root0 is None:
        root0 = _rational_sqrt(c0)
    elif root0 * root0 != c0:
        raise ValueError("supplied root0 does not square to the constant term")
    if not root0:
        raise ValueError("square root of a series with zero constant term")
    half = inv(2 * root0)
    out = [root0]
    for k in range(1, a.trunc + 1):
        acc = a.coeffs[k]
        for i in range(1, k):
            acc = acc - out[i] * out[k - i]
        out.append(acc * half)
    return QSeries(out)


def _rational_sqrt(c):
    if isinstance(c, Cyclo):
        if c == 1:
            return mpq(1)
        if not c.is_rational():
            raise ValueError("constant term is not a known square; supply root0")
        c = c.coeffs[0]
    c = mpq(c)
    if c <= 0:
        raise ValueError(f"constant term {c} is not a rational square")
    from math import isqrt
    n, d = isqrt(c.numerator), isqrt(c.denominator)
    if n * n != c.numerator or d * d != c.denominator:
        raise ValueError(f"constant term {c} is not a rational square")
    return mpq(n, d)


def euler_D(a: QSeries) -> QSeries:
    """D = q d/dq."""
    return QSeries([k * c for k, c in enumerate(a.coeffs)])


def euler_antiD(a: QSeries, c0=0) -> QSeries:
    """Series y with euler_D(y) = a and y(0) = c0."""
    if a.coeffs[0]:
        raise NonIntegrableError("D^-1 of a series with nonzero constant term")
    return QSeries([c0] + [c / k for k, c in enumerate(a.coeffs) if k])


def ps_exp(a: QSeries) -> QSeries:
    """exp(a) for a(0) = 0, via D y = y * D a."""
    if a.coeffs[0]:
        raise NonIntegrableError("exp needs a zero constant term")
    da = euler_D(a).coeffs
    out = [mpq(1)]
    for k in range(1, a.trunc + 1):
        acc = mpq(0)
        for i in range(1, k + 1):
            if da[i]:
                acc = acc + da[i] * out[k - i]
        out.append(acc / k)
    return QSeries(out)


def ps_log(a: QSeries) -> QSeries:
    """log(a) for a(0) = 1."""
    if a.coeffs[0] != 1:
        raise ValueError("log needs constant term 1")
    return euler_antiD(euler_D(a) / a, 0)


def newton_root(poly_coeffs: Sequence[QSeries], x0, trunc: int | None = None) -> QSeries:
    """Series root X, X(0) = x0, of sum_j poly_coeffs[j] * X**j.

    Newton iteration doubling the number of correct coefficients per step.
    """
    if trunc is None:
        trunc = min(c.trunc for c in poly_coeffs)
    coeffs = [c.truncate(trunc) for c in poly_coeffs]
    dcoeffs = [c * j for j, c in enumerate(coeffs)][1:]

    def horner(cs, x):
        acc = QSeries.const(0, x.trunc)
        for c in reversed(cs):
            acc = acc * x + c.truncate(x.trunc)
        return acc

    deriv0 = sum((c.coeffs[0] * x0 ** j for j, c in enumerate(dcoeffs)), 0)
    if not deriv0:
        raise DegeneracyError("initial value is not a simple root at q=0")
    val0 = sum((c.coeffs[0] * x0 ** j for j, c in enumerate(coeffs)), 0)
    if val0:
        raise ValueError("x0 is not a root of the polynomial at q=0")
    x = QSeries([x0])
    prec = 1
    while prec < trunc + 1:
        prec = min(2 * prec, trunc + 1)
        x = x.truncate(prec - 1)
        step = horner(coeffs, x) / horner(dcoeffs, x)
        x = x - step
    return x.truncate(trunc)


# -- (q, z) series -----------------------------------------------------------

class QZSeries:
    """Rows d = 0..N; row d is a Laurent vector in z over exponents [-d, zmax]."""

    __slots__ = ("zmax", "rows")

    def __init__(self, rows: Sequence[Sequence], zmax: int):
        self.zmax = zmax
        out = []
        for d, row in enumerate(rows):
            width = zmax + d + 1
            r = list(row)[:width]
            r = r + [0] * (width - len(r))
            out.append(tuple(mpq(x) if isinstance(x, int) else x for x in r))
        self.rows = tuple(out)

    @property
    def trunc(self) -> int:
        return len(self.rows) - 1

    def get(self, d: int, e: int):
        """Coefficient of q^d z^e."""
        if e < -d:
            return 0
        return self.rows[d][e + d]

    def row_dict(self, d: int) -> dict[int, object]:
        return {e - d: c for e, c in enumerate(self.rows[d]) if c}

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __add__(self, other: "QZSeries") -> "QZSeries":
        zmax = min(self.zmax, other.zmax)
        n = min(self.trunc, other.trunc)
        return QZSeries([[self.get(d, e) + other.get(d, e) for e in range(-d, zmax + 1)]
                         for d in range(n + 1)], zmax)

    def __neg__(self):
        return QZSeries([[-c for c in r] for r in self.rows], self.zmax)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, QZSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def to_json(self):
        return {
            "trunc": self.trunc,
            "zmax": self.zmax,
            "rows": [{"d": d, "zmin": -d, "coeffs": [scalar_to_json(c) for c in r]}
                     for d, r in enumerate(self.rows)],
        }

    @classmethod
    def from_json(cls, obj) -> "QZSeries":
        rows = [[scalar_from_json(c) for c in r["coeffs"]] for r in obj["rows"]]
        return cls(rows, obj["zmax"])


def zq_laurent_expand(r_num: Poly, r_den: Poly, pole_bound: int, z_max: int) -> list:
    """Laurent coefficients of r_num/r_den at z=0 for exponents -pole_bound..z_max."""
    if not r_num:
        return [0] * (pole_bound + z_max + 1)
    vn, vd = r_num.valuation(), r_den.valuation()
    pole = vd - vn
    if pole > pole_bound:
        raise ValueError(f"pole order {pole} exceeds bound {pole_bound}")
    num = Poly(r_num.coeffs[vn:])
    den = Poly(r_den.coeffs[vd:])
    # num/den is a power series; coefficient k lands on exponent k - pole
    need = z_max + pole + 1
    if need <= 0:
        return [0] * (pole_bound + z_max + 1)
    ser = QSeries(num.coeffs, need - 1) / QSeries(den.coeffs, need - 1)
    out = [0] * (pole_bound + z_max + 1)
    for k, c in enumerate(ser.coeffs):
        out[k - pole + pole_bound] = c
    return out


# -- differential operators --------------------------------------------------

class DiffOperator:
    """Sum of c * z^a * delta^p with delta a derivation of the coefficient ring.

    ``terms`` maps (a, p) to coefficients.  Composition applies the Leibniz
    rule delta^p . c = sum_j C(p, j) delta^j(c) delta^(p-j); z is central.
    """

    __slots__ = ("terms", "deriv")

    def __init__(self, terms: dict, deriv: Callable):
        self.terms = {k: v for k, v in terms.items() if _nonzero(v)}
        self.deriv = deriv

    @classmethod
    def scalar(cls, c, deriv: Callable) -> "DiffOperator":
        return cls({(0, 0): c}, deriv)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return DiffOperator(out, self.deriv)

    def __neg__(self):
        return DiffOperator({k: -v for k, v in self.terms.items()}, self.deriv)

    def __sub__(self, other):
        return self + (-other)

    def left_mul(self, c) -> "DiffOperator":
        """Operator c * self (c a coefficient-ring element)."""
        return DiffOperator({k: c * v for k, v in self.terms.items()}, self.deriv)

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """self o other."""
        out: dict = {}
        maxp = max((p for _, p in self.terms), default=0)
        derivs = {}
        for key, c in other.terms.items():
            ds = [c]
            for _ in range(maxp):
                ds.append(self.deriv(ds[-1]))
            derivs[key] = ds
        for (a1, p1), c1 in self.terms.items():
            for (a2, p2), _ in other.terms.items():
                ds = derivs[(a2, p2)]
                for j in range(p1 + 1):
                    dj = ds[j]
                    if not _nonzero(dj):
                        continue
                    k = (a1 + a2, p1 - j + p2)
                    t = c1 * dj * comb(p1, j) if j else c1 * dj
                    out[k] = out[k] + t if k in out else t
        return DiffOperator(out, self.deriv)

    __matmul__ = compose

    def layers(self) -> dict[int, dict[int, object]]:
        """{a: {p: coeff}} grouping by power of z."""
        out: dict[int, dict[int, object]] = {}
        for (a, p), c in self.terms.items():
            out.setdefault(a, {})[p] = c
        return out

    def apply(self, f):
        """Action on a z-independent element f; returns {a: coefficient of z^a}."""
        maxp = max((p for _, p in self.terms), default=0)
        ds = [f]
        for _ in range(maxp):
            ds.append(self.deriv(ds[-1]))
        out: dict = {}
        for (a, p), c in self.terms.items():
            t = c * ds[p]
            out[a] = out[a] + t if a in out else t
        return out


def _nonzero(v) -> bool:
    if isinstance(v, QSeries):
        return not v.is_zero()
    return bool(v)
