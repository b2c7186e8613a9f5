"""Local P^n data: weights, symmetric functions, L_i, f_n and the ring G_n.

Series here are in the variable t in which L_i is the root of
``p(L) - (-1)^(n+1) t L^(n+1)`` with ``p(L) = prod_j (L - lambda_j)``.
The I-function's own variable q is related by t = (n+1)^(n+1) q (see
:mod:`localpn.asymptotics`); quantities written as functions of L do not
depend on this choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .scalars import (
    Cyclo,
    Poly,
    RationalFunction,
    common_conductor,
    cyclo_make,
    inv,
    mpq,
    power_of,
    scalar_from_json,
    scalar_to_json,
    squarefree_part,
)
from .series import DEFAULT_ORDER, DegeneracyError, QSeries, newton_root, ps_exp, ps_sqrt


@dataclass(frozen=True)
class LambdaConfig:
    """Equivariant weights lambda_0..lambda_n, specialized to exact scalars."""

    n: int
    lambdas: tuple
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        lams = tuple(mpq(x) if isinstance(x, int) else x for x in self.lambdas)
        if len(lams) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} weights, got {len(lams)}")
        object.__setattr__(self, "lambdas", lams)
        common_conductor(lams)
        if any(not x for x in lams):
            raise DegeneracyError("weights must be nonzero")
        if any(a == b for a, b in combinations(lams, 2)):
            raise DegeneracyError("weights must be pairwise distinct")

    @classmethod
    def roots_of_unity(cls, n: int) -> "LambdaConfig":
        """lambda_i = zeta_{n+1}^i."""
        m = n + 1
        return cls(n, tuple(cyclo_make(m, [0] * i + [1]) for i in range(m)), label=f"zeta:{m}")

    @classmethod
    def spl2_canonical(cls) -> "LambdaConfig":
        """(1, -1, (2 zeta_3 + 1)/3): a point with s_2^2 = 3 s_1 s_3 and distinct weights."""
        w = Cyclo(3, [mpq(1, 3), mpq(2, 3)])
        return cls(2, (mpq(1), mpq(-1), w), label="spl2-canonical")

    @classmethod
    def parse(cls, n: int, spec: str) -> "LambdaConfig":
        """Parse "1,2", "zeta:3" or "spl2-canonical"."""
        spec = spec.strip()
        if spec == "spl2-canonical":
            if n != 2:
                raise ValueError("spl2-canonical requires n = 2")
            return cls.spl2_canonical()
        if spec.startswith("zeta:"):
            m = int(spec[5:])
            if m != n + 1:
                raise ValueError(f"zeta:{m} needs n = {m - 1}")
            return cls.roots_of_unity(n)
        return cls(n, tuple(mpq(x) for x in spec.split(",")), label=spec)

    def to_json(self):
        return [scalar_to_json(x) for x in self.lambdas]

    @classmethod
    def from_json(cls, n: int, obj) -> "LambdaConfig":
        return cls(n, tuple(scalar_from_json(x) for x in obj))

    @property
    def conductor(self) -> int:
        return common_conductor(self.lambdas)

    @cached_property
    def s(self) -> tuple:
        """Elementary symmetric functions s_0 = 1, s_1, ..., s_{n+1}."""
        out = [mpq(1)] + [mpq(0)] * (self.n + 1)
        for lam in self.lambdas:
            for k in range(self.n + 1, 0, -1):
                out[k] = out[k] + out[k - 1] * lam
        return tuple(out)

    @property
    def specialization_sp(self) -> bool:
        m = self.n + 1
        return all(lam == cyclo_make(m, [0] * i + [1]) for i, lam in enumerate(self.lambdas))

    @property
    def specialization_spl2(self) -> bool:
        if self.n != 2:
            return False
        s = self.s
        return s[2] * s[2] - 3 * s[1] * s[3] == 0

    def __str__(self):
        return self.label or ",".join(str(x) for x in self.lambdas)


def char_poly(cfg: LambdaConfig) -> Poly:
    """p(L) = prod_j (L - lambda_j)."""
    return Poly.from_roots(cfg.lambdas)


def f_poly(cfg: LambdaConfig) -> Poly:
    """f_n(L) = sum_k (-1)^k (k+1) s_{k+1} L^(n-k) = L p'(L) - (n+1) p(L)."""
    n, s = cfg.n, cfg.s
    coeffs = [0] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = (-1) ** k * (k + 1) * s[k + 1]
    return Poly(coeffs)


def defining_poly_coeffs(cfg: LambdaConfig, trunc: int) -> list[QSeries]:
    """Coefficients (in L) of p(L) - (-1)^(n+1) t L^(n+1), as series in t."""
    p = char_poly(cfg)
    out = [QSeries.const(c, trunc) for c in p.coeffs]
    out[-1] = out[-1] - QSeries.q(trunc) * (-1) ** (cfg.n + 1)
    return out


def L_series(cfg: LambdaConfig, i: int, trunc: int = DEFAULT_ORDER) -> QSeries:
    return newton_root(defining_poly_coeffs(cfg, trunc), cfg.lambdas[i], trunc)


def dL_series(cfg: LambdaConfig, i: int, trunc: int = DEFAULT_ORDER) -> QSeries:
    """D L_i from the closed form L p(L) / f_n(L)."""
    L = L_series(cfg, i, trunc)
    return dL_formula(cfg)(L)


def dL_formula(cfg: LambdaConfig) -> RationalFunction:
    """D L as a rational function of L."""
    p = char_poly(cfg)
    return RationalFunction(Poly.x() * p, f_poly(cfg))


def t_of_L(cfg: LambdaConfig) -> RationalFunction:
    """The variable t as a function of L, from the defining polynomial."""
    n = cfg.n
    return RationalFunction(char_poly(cfg) * (-1) ** (n + 1), Poly.x() ** (n + 1))


def localizing_factor(cfg: LambdaConfig) -> Poly:
    """Monic squarefree part of f_n: the polynomial whose inverse G_n needs."""
    return squarefree_part(f_poly(cfg))


def normalized_f(cfg: LambdaConfig, i: int) -> Poly:
    """f_n / f_n(lambda_i), the branch-normalized generator for the half power."""
    f = f_poly(cfg)
    c = f(cfg.lambdas[i])
    if not c:
        raise DegeneracyError(f"f_n(lambda_{i}) = 0")
    return f * inv(c)


# -- G_n ---------------------------------------------------------------------

class GnElement:
    """body(L) * fhat(L)^(-half/2) on the branch L = L_i.

    ``fhat`` is f_n normalized so that fhat(lambda_i) = 1; the constant
    f_n(lambda_i)^(-1/2) is folded into the branch choice, which keeps every
    coefficient inside the working field.  ``body`` must have denominator
    divisible only by L and the squarefree part of f_n.
    """

    __slots__ = ("body", "half", "fhat", "base")

    def __init__(self, body, half: int, fhat: Poly, base: Poly | None = None):
        if half not in (0, 1):
            raise ValueError("half must be 0 or 1")
        self.body = body if isinstance(body, RationalFunction) else RationalFunction(body)
        self.half = half
        self.fhat = fhat
        self.base = base if base is not None else squarefree_part(fhat)

    @classmethod
    def for_branch(cls, cfg: LambdaConfig, i: int, body, half: int = 0) -> "GnElement":
        return cls(body, half, normalized_f(cfg, i), localizing_factor(cfg))

    def _check(self, other: "GnElement"):
        if self.fhat != other.fhat:
            raise ValueError("G_n elements on different branches")

    def __add__(self, other: "GnElement") -> "GnElement":
        self._check(other)
        if self.half != other.half:
            raise ValueError("sum mixes integral and half-integral f-powers")
        return GnElement(self.body + other.body, self.half, self.fhat, self.base)

    def __mul__(self, other):
        if not isinstance(other, GnElement):
            return GnElement(self.body * other, self.half, self.fhat, self.base)
        self._check(other)
        h = self.half + other.half
        body = self.body * other.body
        if h == 2:
            body = body / self.fhat
            h = 0
        return GnElement(body, h, self.fhat, self.base)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GnElement):
            return NotImplemented
        return (self.half, self.fhat, self.body) == (other.half, other.fhat, other.body)

    __hash__ = None

    def in_ring(self) -> bool:
        """Denominator built from L and the localizing factor only."""
        den = self.body.den
        while den.degree() > 0 and den[0] == 0:
            den = Poly(den.coeffs[1:])
        if den.degree() == 0:
            return True
        return self.base.degree() > 0 and power_of(den, self.base) is not None

    def expansion(self):
        """Canonical decomposition of the body.

        Returns ``(lpart, bpart)``: ``lpart`` maps an exponent j to the
        coefficient of L^j (j < 0, or any j when f_n is constant), ``bpart`` maps
        e to the remainder polynomial (degree < deg base) multiplying base^e.
        Unique for a given body.
        """
        return canonical_expansion(self.body, self.base)

    def format(self, var: str = "L") -> str:
        lpart, bpart = self.expansion()
        terms = []
        for j in sorted(lpart):
            terms.append(f"({lpart[j]})*{var}^{j}")
        b = self.base.format(var)
        for e in sorted(bpart):
            r = bpart[e].format(var)
            terms.append(r if e == 0 else f"({r})*({b})^{e}")
        body = " + ".join(terms) or "0"
        if self.half:
            return f"({body}) * fhat({var})^(-1/2)"
        return body

    def to_json(self):
        lpart, bpart = self.expansion()
        return {
            "half_power": self.half,
            "fhat": self.fhat.to_json(),
            "base": self.base.to_json(),
            "L_terms": [{"j": j, "c": scalar_to_json(c)} for j, c in sorted(lpart.items())],
            "base_terms": [{"e": e, "r": r.to_json()} for e, r in sorted(bpart.items())],
            "text": self.format(),
        }

    def __repr__(self):
        return f"GnElement({self.format()})"


def canonical_expansion(body: RationalFunction, base: Poly):
    num, den = body.num, body.den
    if not num:
        return {}, {}
    a = den.valuation()
    rest = Poly(den.coeffs[a:])
    if base.degree() < 1:
        if rest.degree() > 0:
            raise ValueError("denominator has factors other than L")
        num = num * inv(rest.coeffs[0])
        return {k - a: c for k, c in enumerate(num.coeffs) if c}, {}
    if rest.degree() > 0:
        pw = power_of(rest, base)
        if pw is None:
            raise ValueError("denominator has factors outside L and the localizing factor")
        c_exp, c = pw
        num = num * inv(c)
    else:
        c_exp = 0
        num = num * inv(rest.coeffs[0])
    lpart: dict[int, object] = {}
    poly_total = Poly()
    bnum = num
    if a:
        La = Poly.x() ** a
        bc = base ** c_exp
        # 1 = s*L^a + t*base^c
        _, s, t = La.gcdex(bc)
        lnum = num * t
        qpoly, lrem = divmod(lnum, La)
        poly_total = poly_total + qpoly
        for k, ck in enumerate(lrem.coeffs):
            if ck:
                lpart[k - a] = ck
        bnum = num * s
    qpoly, brem = divmod(bnum, base ** c_exp) if c_exp else (bnum, Poly())
    poly_total = poly_total + qpoly
    bpart: dict[int, Poly] = {}
    # base-adic digits of the proper fraction brem / base^c_exp
    k = -c_exp
    while brem:
        brem, r = divmod(brem, base)
        if r:
            bpart[k] = r
        k += 1
    k = 0
    while poly_total:
        poly_total, r = divmod(poly_total, base)
        if r:
            bpart[k] = bpart[k] + r if k in bpart else r
        k += 1
    return lpart, bpart


def gn_eval(elem: GnElement, L: QSeries) -> QSeries:
    """Substitute the branch series L = L_i into ``elem``."""
    val = elem.body(L)
    if elem.half:
        fh = elem.fhat(L)
        if fh.coeffs[0] != 1:
            raise ValueError("fhat(L) must have constant term 1 on its branch")
        val = val / ps_sqrt(fh, 1)
    return val


def r0_closed_form(cfg: LambdaConfig, i: int) -> GnElement:
    """(lambda_i prod_{j!=i}(lambda_i - lambda_j) / f_n(L))^(1/2) on branch i."""
    return GnElement.for_branch(cfg, i, RationalFunction(1), half=1)


# -- mirror map --------------------------------------------------------------

def mirror_map(trunc: int) -> QSeries:
    """Q(q) = q * exp(2 sum_{d>=1} (2d-1)!/(d!)^2 q^d) for local P^1."""
    from math import factorial

    inner = QSeries([0] + [mpq(2 * factorial(2 * d - 1), factorial(d) ** 2)
                           for d in range(1, trunc)], trunc - 1)
    return QSeries([0] + list(ps_exp(inner).coeffs), trunc)
