"""Level-n differential operators over a localized ring R[x]_f.

An operator is given by coefficients A[l, p] in R[x][1/f].  Its solutions
are defined inductively by

    D X_{k+1} = sum_{l=0..n, p>=0} A[l, p] D^p X_{k-l},   X_0 = 1,  X_{<0} = 0,

with D = d/dx.  The operator is admissible when every X_k stays in R[x]_f.
This module checks the sufficient order conditions for deg f = 1 and
deg f = 2 and runs the recursion in closed form, reporting the first step
that would need a logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from numbers import Rational

from .scalars import Cyclo, Poly, RationalFunction, inv, power_of


class UndefinedOrderError(ValueError):
    """The order of the zero element."""


@dataclass(frozen=True)
class LocalizedElement:
    """num / f^e with f fixed by the ambient operator."""

    num: Poly
    e: int
    f: Poly

    def __post_init__(self):
        num, e = self.num, self.e
        if not num:
            e = 0
        while e > 0 and num and not (num % self.f):
            num, e = num.exact_div(self.f), e - 1
        while e < 0:
            num, e = num * self.f, e + 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "e", e)

    @classmethod
    def from_expansion(cls, coeffs: dict, f: Poly) -> "LocalizedElement":
        """sum_i coeffs[i] * f^i (coefficients scalars or polynomials)."""
        if not coeffs:
            return cls(Poly(), 0, f)
        lo = min(min(coeffs), 0)
        num = Poly()
        for i, c in coeffs.items():
            num = num + (f ** (i - lo)) * c
        return cls(num, -lo, f)

    @classmethod
    def from_rational(cls, rf: RationalFunction, f: Poly) -> "LocalizedElement":
        """Convert when the denominator is c * f^k."""
        if rf.den.degree() == 0:
            return cls(rf.num * inv(rf.den.coeffs[0]), 0, f)
        pw = power_of(rf.den, f)
        if pw is None:
            raise ValueError("denominator is not a power of f")
        k, c = pw
        return cls(rf.num * inv(c), k, f)

    def __bool__(self):
        return bool(self.num)

    def _same(self, other):
        if other.f != self.f:
            raise ValueError("elements localized at different polynomials")

    def __add__(self, other: "LocalizedElement") -> "LocalizedElement":
        self._same(other)
        e = max(self.e, other.e)
        num = self.num * self.f ** (e - self.e) + other.num * self.f ** (e - other.e)
        return LocalizedElement(num, e, self.f)

    def __neg__(self):
        return LocalizedElement(-self.num, self.e, self.f)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LocalizedElement):
            self._same(other)
            return LocalizedElement(self.num * other.num, self.e + other.e, self.f)
        return LocalizedElement(self.num * other, self.e, self.f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LocalizedElement):
            return NotImplemented
        return self.f == other.f and self.num == other.num and self.e == other.e

    def __hash__(self):
        return hash((self.num, self.e, self.f))

    def derivative(self) -> "LocalizedElement":
        f = self.f
        num = self.num.derivative() * f - self.num * f.derivative() * self.e
        return LocalizedElement(num, self.e + 1, f)

    def as_rational(self) -> RationalFunction:
        return RationalFunction(self.num, self.f ** self.e)

    def __call__(self, x):
        if not self.e:
            return self.num(x)
        fx = self.f(x)
        return self.num(x) * (inv(fx) ** self.e if isinstance(fx, (Rational, Cyclo)) else fx.inverse() ** self.e)

    def expansion(self) -> dict[int, Poly]:
        """f-adic digits: {i: r_i} with value sum r_i f^i, deg r_i < deg f."""
        out = {}
        num, i = self.num, -self.e
        while num:
            num, r = divmod(num, self.f)
            if r:
                out[i] = r
            i += 1
        return out

    def to_json(self):
        return {"num": self.num.to_json(), "fexp": self.e}

    def format(self, var: str = "x") -> str:
        if self.e == 0:
            return self.num.format(var)
        return f"({self.f.format(var)})^-{self.e}*({self.num.format(var)})"


def ord_wrt_f(a: LocalizedElement) -> int:
    """Smallest i with a nonzero scalar coefficient of f^i (deg f = 1, or a in R_f)."""
    if not a:
        raise UndefinedOrderError("order of zero is undefined")
    exp = a.expansion()
    if a.f.degree() > 1 and any(r.degree() > 0 for r in exp.values()):
        raise ValueError("element is not in the span of powers of f")
    return min(exp)


def rf_membership(a: LocalizedElement):
    """Classify a for deg f = 2: ("R_f", B), ("f'R_f", B) or ("neither", None).

    B is the element with a = B (first case) or a = f' B (second case).
    """
    f = a.f
    if f.degree() != 2:
        raise ValueError("rf_membership needs a quadratic f")
    if not a:
        return "R_f", a
    if all(r.degree() == 0 for r in a.expansion().values()):
        return "R_f", a
    df = f.derivative()
    q, r = divmod(a.num, df)
    if not r:
        b = LocalizedElement(q, a.e, f)
        if all(rr.degree() == 0 for rr in b.expansion().values()):
            return "f'R_f", b
    return "neither", None


@dataclass
class LevelOperator:
    level: int
    f: Poly
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.f.degree() < 1:
            raise ValueError("localizing polynomial must be non-constant")
        for (l, p), a in self.entries.items():
            if not (0 <= l <= self.level and p >= 0):
                raise ValueError(f"index ({l}, {p}) out of range for level {self.level}")
            if a.f != self.f:
                raise ValueError("entry localized at a different polynomial")
        self.entries = {k: v for k, v in self.entries.items() if v}

    @classmethod
    def from_table(cls, level: int, f: Poly, table: dict) -> "LevelOperator":
        return cls(level, f, {k: LocalizedElement.from_rational(v, f) for k, v in table.items()})

    def to_json(self):
        return {
            "level": self.level,
            "f": self.f.to_json(),
            "entries": [{"l": l, "p": p, **a.to_json()} for (l, p), a in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, obj) -> "LevelOperator":
        f = Poly.from_json(obj["f"])
        entries = {(e["l"], e["p"]): LocalizedElement(Poly.from_json(e["num"]), e["fexp"], f)
                   for e in obj["entries"]}
        return cls(obj["level"], f, entries)


def _deg1_bound(p: int) -> int:
    if p == 0:
        return -2
    if p == 1:
        return 0
    return p + 1


def check_deg1_conditions(op: LevelOperator) -> dict:
    if op.f.degree() != 1:
        raise ValueError("degree-1 conditions need a linear f")
    rows = []
    for (l, p), a in sorted(op.entries.items()):
        order, bound = ord_wrt_f(a), _deg1_bound(p)
        rows.append({"l": l, "p": p, "order": order, "bound": bound,
                     "status": "pass" if order <= bound else "fail"})
    ok = all(r["status"] == "pass" for r in rows)
    return {"check": "deg1-conditions", "status": "pass" if ok else "fail", "entries": rows}


def check_deg2_conditions(op: LevelOperator) -> dict:
    if op.f.degree() != 2:
        raise ValueError("degree-2 conditions need a quadratic f")
    rows = []
    for (l, p), a in sorted(op.entries.items()):
        kind, b = rf_membership(a)
        want = "R_f" if p % 2 else "f'R_f"
        bound = -2 if p == 0 else (p - 1) // 2
        row = {"l": l, "p": p, "class": kind, "required": want, "bound": bound, "order": None}
        if kind == want or (kind == "R_f" and not a):
            row["order"] = ord_wrt_f(b)
            row["status"] = "pass" if row["order"] <= bound else "fail"
        else:
            row["status"] = "fail"
        rows.append(row)
    ok = all(r["status"] == "pass" for r in rows)
    return {"check": "deg2-conditions", "status": "pass" if ok else "fail", "entries": rows}


@dataclass
class RecursionResult:
    values: list
    obstruction: dict | None = None

    @property
    def ok(self) -> bool:
        return self.obstruction is None


def _integrate(rhs: LocalizedElement, terms: dict, k: int):
    """Antiderivative inside R[x]_f, or an obstruction description."""
    f = rhs.f
    if f.degree() == 1:
        digits = {i: r.coeffs[0] for i, r in rhs.expansion().items()}
        scale = inv(f.lc())
        if -1 in digits:
            return None, _obstruction(k, terms, "f^-1 term needs a logarithm")
        return LocalizedElement.from_expansion(
            {i + 1: c * scale / (i + 1) for i, c in digits.items()}, f), None
    kind, b = rf_membership(rhs)
    if kind != "f'R_f":
        if not rhs:
            return rhs, None
        return None, _obstruction(k, terms, "right-hand side not in f' R_f")
    digits = {i: r.coeffs[0] for i, r in b.expansion().items()}
    if -1 in digits:
        return None, _obstruction(k, terms, "f' f^-1 term needs a logarithm")
    return LocalizedElement.from_expansion({i + 1: c / (i + 1) for i, c in digits.items()}, f), None


def _obstruction(k: int, terms: dict, reason: str) -> dict:
    bad = []
    for key, t in sorted(terms.items()):
        if not t:
            continue
        f = t.f
        if f.degree() == 1:
            if -1 in t.expansion():
                bad.append({"l": key[0], "p": key[1]})
        else:
            kind, b = rf_membership(t)
            if kind != "f'R_f" or -1 in b.expansion():
                bad.append({"l": key[0], "p": key[1]})
    return {"k": k, "reason": reason, "terms": bad}


def run_recursion(op: LevelOperator, depth: int, anchor=None, constants=None) -> RecursionResult:
    """X_1..X_depth in closed form.

    Integration constants are 0 unless ``anchor`` is given (then X_k(anchor)
    = 0 for k >= 1) or ``constants[k-1]`` supplies the constant for X_k.
    """
    f = op.f
    one = LocalizedElement(Poly([1]), 0, f)
    xs = [one]
    maxp = max((p for _, p in op.entries), default=0)
    derivs = [[one] + [LocalizedElement(Poly(), 0, f)] * maxp]
    for k in range(depth):
        terms = {}
        rhs = LocalizedElement(Poly(), 0, f)
        for (l, p), a in op.entries.items():
            src = k - l
            if src < 0:
                continue
            t = a * derivs[src][p]
            terms[(l, p)] = t
            rhs = rhs + t
        x, obs = _integrate(rhs, terms, k + 1)
        if obs is not None:
            return RecursionResult(xs, obs)
        if anchor is not None:
            x = x - LocalizedElement(Poly([x(anchor)]), 0, f)
        elif constants is not None:
            x = x + LocalizedElement(Poly([constants[k]]), 0, f)
        xs.append(x)
        ds = [x]
        for _ in range(maxp):
            ds.append(ds[-1].derivative())
        derivs.append(ds)
    return RecursionResult(xs)
