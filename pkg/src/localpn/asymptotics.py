"""Restricted I-functions, the Picard-Fuchs operator and the asymptotic expansion.

The restricted I-function is

    I|_{H=lambda_i} = sum_d  prod_{k=0}^{(n+1)d-1} (-(n+1) lambda_i - k z)
                            / prod_j prod_{k=1}^{d} (lambda_i - lambda_j + k z)  q^d

and is annihilated by

    prod_j (M - lambda_j) - q prod_{k=0}^{n} (-(n+1) M - k z),   M = H + z D.

Its asymptotic form e^{mu/z} (R_0 + R_1 z + ...) is computed in the rescaled
variable t = (n+1)^(n+1) q, where L = lambda_i + D mu solves
p(L) = (-1)^(n+1) t L^(n+1).  D = q d/dq = t d/dt, so nothing else changes.
Pass ``variable="t"`` to :func:`ifun_series` / :func:`pf_apply` to work in t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from .model import (
    LambdaConfig,
    L_series,
    char_poly,
    dL_formula,
    f_poly,
    normalized_f,
    t_of_L,
)
from .scalars import Poly, RationalFunction, mpq, scalar_to_json
from .series import (
    DEFAULT_ORDER,
    DegeneracyError,
    DiffOperator,
    NonIntegrableError,
    QSeries,
    QZSeries,
    euler_antiD,
    euler_D,
    ps_exp,
    ps_sqrt,
    zq_laurent_expand,
)


def _rescale(cfg: LambdaConfig, variable: str):
    if variable == "q":
        return mpq(1)
    if variable == "t":
        return mpq(1, (cfg.n + 1) ** (cfg.n + 1))
    raise ValueError(f"unknown variable {variable!r}")


def ifun_coeff(cfg: LambdaConfig, i: int, d: int) -> tuple[Poly, Poly]:
    """Reduced (numerator, denominator) in z of the q^d coefficient at H = lambda_i."""
    n, lam = cfg.n, cfg.lambdas
    num = Poly([1])
    for k in range(((n + 1) * d)):
        num = num * Poly([-(n + 1) * lam[i], -k])
    den = Poly([1])
    for j in range(n + 1):
        for k in range(1, d + 1):
            den = den * Poly([lam[i] - lam[j], k])
    rf = RationalFunction(num, den)
    return rf.num, rf.den


def ifun_series(cfg: LambdaConfig, i: int, trunc: int = DEFAULT_ORDER, z_max: int = 4,
                variable: str = "q") -> QZSeries:
    scale = _rescale(cfg, variable)
    n, lam = cfg.n, cfg.lambdas
    rows = []
    num, den = Poly([1]), Poly([1])
    for d in range(trunc + 1):
        if d:
            # grow the products incrementally instead of rebuilding them
            for k in range((n + 1) * (d - 1), (n + 1) * d):
                num = num * Poly([-(n + 1) * lam[i], -k])
            for j in range(n + 1):
                den = den * Poly([lam[i] - lam[j], d])
        row = zq_laurent_expand(num, den, d, z_max)
        rows.append([c * scale ** d for c in row] if scale != 1 else row)
    return QZSeries(rows, z_max)


def pf_apply(cfg: LambdaConfig, i: int, target: QZSeries, variable: str = "q") -> QZSeries:
    """Apply the Picard-Fuchs operator with H = lambda_i to a (q, z) series.

    Row d of the output is exact for z-exponents -d..target.zmax.
    """
    n, lam = cfg.n, cfg.lambdas
    scale = _rescale(cfg, variable)
    zmax = target.zmax
    rows = []
    for d in range(target.trunc + 1):
        # prod_j (M - lambda_j) acting on q^d: M -> lambda_i + d z
        op1 = Poly([1])
        for j in range(n + 1):
            op1 = op1 * Poly([lam[i] - lam[j], d])
        out = _mul_row(target, d, op1, zmax)
        if d:
            op2 = Poly([scale])
            for k in range(n + 1):
                op2 = op2 * Poly([-(n + 1) * lam[i], -(n + 1) * (d - 1) - k])
            prev = _mul_row(target, d - 1, op2, zmax)
            # row d-1 starts one exponent higher than row d
            out = [a - (prev[e - 1] if e >= 1 else 0) for e, a in enumerate(out)]
        rows.append(out)
    return QZSeries(rows, zmax)


def _mul_row(s: QZSeries, d: int, poly: Poly, zmax: int) -> list:
    """Row d of s times a z-polynomial, exponents -d..zmax."""
    row = s.rows[d]
    out = [0] * len(row)
    for e, c in enumerate(row):
        if c:
            for k, pk in enumerate(poly.coeffs):
                if e + k < len(out) and pk:
                    out[e + k] += c * pk
    return out


# -- conjugated operator -----------------------------------------------------

def conjugated_operator(cfg: LambdaConfig, L, t, one, deriv, dcoef) -> DiffOperator:
    """The Picard-Fuchs operator after e^{-mu/z} . M . e^{mu/z} = L + z D.

    ``L`` and ``t`` are elements of the coefficient ring, ``deriv`` its
    derivation and ``dcoef`` the coefficient in front of it representing D
    (1 for series in t with D = t d/dt; DL for functions of L with d/dL).
    Keys of the result are (power of z, power of ``deriv``).
    """
    n, lam = cfg.n, cfg.lambdas
    first = DiffOperator.scalar(one, deriv)
    for lj in lam:
        first = first.compose(DiffOperator({(0, 0): L - lj, (1, 1): dcoef}, deriv))
    second = DiffOperator.scalar(one, deriv)
    for k in range(n + 1):
        factor = DiffOperator({(0, 0): -L, (1, 0): one * mpq(-k, n + 1), (1, 1): -dcoef}, deriv)
        second = second.compose(factor)
    return first - second.left_mul(t)


@dataclass
class AsymptoticData:
    cfg: LambdaConfig
    i: int
    trunc: int
    depth: int
    mu: QSeries
    L: QSeries
    R: list = field(default_factory=list)

    def phi(self, k: int) -> QSeries:
        """R_k * fhat(L)^(1/2), the normalized Phi_k series."""
        fh = normalized_f(self.cfg, self.i)(self.L)
        return self.R[k] * ps_sqrt(fh, 1)

    def to_json(self):
        return {
            "n": self.cfg.n,
            "lambda": self.cfg.to_json(),
            "i": self.i,
            "variable": "t",
            "trunc": self.trunc,
            "depth": self.depth,
            "mu": self.mu.to_json(),
            "L": self.L.to_json(),
            "R": [r.to_json() for r in self.R],
        }


def solve_asymptotics(cfg: LambdaConfig, i: int, depth: int, trunc: int = DEFAULT_ORDER) -> AsymptoticData:
    """mu_i and R_0..R_depth from the z-layers of the conjugated operator."""
    L = L_series(cfg, i, trunc)
    one = QSeries.const(1, trunc)
    op = conjugated_operator(cfg, L, QSeries.q(trunc), one, euler_D, one)
    layers = op.layers()
    for p, c in layers.get(0, {}).items():
        if not c.is_zero():
            raise DegeneracyError("z^0 layer does not vanish on L_i")
    c11 = layers[1][1]
    a = layers[1].get(0, QSeries.const(0, trunc)) / c11
    if a.coeffs[0]:
        raise NonIntegrableError("first-order layer has a nonzero constant term")
    R0 = ps_exp(euler_antiD(-a, 0))
    R = [R0]
    inv_R0 = R0.inverse()
    for k in range(1, depth + 1):
        # z^(k+1) layer: c11 D R_k + c10 R_k + sum_{a>=2} c_{a,p} D^p R_{k+1-a} = 0
        rhs = QSeries.const(0, trunc)
        for lay in range(2, cfg.n + 2):
            if k + 1 - lay < 0:
                continue
            src = R[k + 1 - lay]
            dp = src
            for p in range(0, lay + 1):
                if p:
                    dp = euler_D(dp)
                c = layers.get(lay, {}).get(p)
                if c is not None:
                    rhs = rhs + c * dp
        b = -rhs / c11
        R.append(R0 * euler_antiD(b * inv_R0, 0))
    mu = euler_antiD(L - cfg.lambdas[i], 0)
    return AsymptoticData(cfg, i, trunc, depth, mu, L, R)


def asymptotic_side(data: AsymptoticData, rows: int) -> QZSeries:
    """e^{mu/z} sum_k R_k z^k as a (t, z) series, row d exact on [-d, depth-d]."""
    K = data.depth
    mu = data.mu.truncate(rows)
    powers = [QSeries.const(1, rows)]
    for m in range(1, rows + 1):
        powers.append(powers[-1] * mu * mpq(1, m))
    R = [r.truncate(rows) for r in data.R]
    zmax = K
    out = []
    for d in range(rows + 1):
        row = [0] * (zmax + d + 1)
        for m in range(0, d + 1):
            pm = powers[m]
            for k in range(K + 1):
                e = k - m
                acc = 0
                for j in range(m, d + 1):
                    if pm[j]:
                        acc = acc + pm[j] * R[k][d - j]
                if acc and e <= zmax:
                    row[e + d] += acc
        out.append(row)
    return QZSeries(out, zmax)


def verify_asymptotic(cfg: LambdaConfig, i: int, data: AsymptoticData, rows: int | None = None) -> dict:
    """Compare e^{mu/z} sum R_k z^k with the restricted I-function row by row.

    Row d is compared over z-exponents -d..depth-d, the window on which the
    truncated sum over k is complete.
    """
    rows = data.trunc if rows is None else min(rows, data.trunc)
    lhs = ifun_series(cfg, i, rows, data.depth, variable="t")
    rhs = asymptotic_side(data, rows)
    mismatch = None
    checked = 0
    for d in range(rows + 1):
        for e in range(-d, data.depth - d + 1):
            checked += 1
            a, b = lhs.get(d, e), rhs.get(d, e)
            if a != b:
                mismatch = {"d": d, "z": e, "lhs": scalar_to_json(a), "rhs": scalar_to_json(b)}
                break
        if mismatch:
            break
    return {
        "check": f"asymptotic-form[i={i}]",
        "status": "fail" if mismatch else "pass",
        "first_mismatch": mismatch,
        "rows": rows,
        "window": f"[-d, {data.depth}-d]",
        "entries_checked": checked,
    }


def verify_pf(cfg: LambdaConfig, i: int, trunc: int = DEFAULT_ORDER, z_max: int = 4,
              variable: str = "q") -> dict:
    res = pf_apply(cfg, i, ifun_series(cfg, i, trunc, z_max, variable), variable)
    mismatch = None
    for d in range(res.trunc + 1):
        nz = res.row_dict(d)
        if nz:
            e = min(nz)
            mismatch = {"d": d, "z": e, "lhs": scalar_to_json(nz[e]), "rhs": "0"}
            break
    return {"check": f"pf-annihilation[i={i}]", "status": "fail" if mismatch else "pass",
            "first_mismatch": mismatch, "trunc": trunc, "zmax": z_max, "variable": variable}


# -- L-coordinate ODE systems ------------------------------------------------

@dataclass
class LOdeSystem:
    """D_L Phi_k = sum_{l,p} A[l, p] D_L^p Phi_{k-1-l}, with D_L = d/dL.

    ``f`` is the polynomial whose powers make up the denominators (f_1 for
    n = 1, the linear factor s_1 L - s_2 of f_2 on the spl2 locus).
    """

    n: int
    level: int
    f: Poly
    table: dict

    def to_json(self, var: str = "L"):
        return {
            "n": self.n,
            "level": self.level,
            "f": self.f.format(var),
            "entries": [{"l": l, "p": p, "A": rf.format(var, self.f)}
                        for (l, p), rf in sorted(self.table.items())],
        }


def derive_L_ode(cfg: LambdaConfig, strict: bool = True) -> LOdeSystem:
    """The recursion for Phi_k = R_k fhat^(1/2) written in the L coordinate.

    Works for any weights; ``strict`` keeps to the cases where the
    denominators are powers of one linear polynomial (n = 1, or n = 2 on the
    spl2 locus).
    """
    n = cfg.n
    if strict and not (n == 1 or (n == 2 and cfg.specialization_spl2)):
        raise DegeneracyError("derive_L_ode needs n = 1 or n = 2 with s_2^2 = 3 s_1 s_3")
    f = f_poly(cfg)
    if f.degree() < 1:
        raise DegeneracyError("f_n is constant for these weights")
    dl = RationalFunction.derivative
    Lvar = RationalFunction.var()
    g = dL_formula(cfg)
    op = conjugated_operator(cfg, Lvar, t_of_L(cfg), RationalFunction(1), dl, g)
    # R = fhat^(-1/2) Phi: d/dL acts on Phi as d/dL + h
    h = -RationalFunction(f.derivative(), f) * mpq(1, 2)
    shift = DiffOperator({(0, 0): h, (0, 1): RationalFunction(1)}, dl)
    conj: dict = {}
    powers = [DiffOperator.scalar(RationalFunction(1), dl)]
    for (a, p), c in op.terms.items():
        while len(powers) <= p:
            powers.append(powers[-1].compose(shift))
        for (_, pp), cc in powers[p].terms.items():
            key = (a, pp)
            v = c * cc
            conj[key] = conj[key] + v if key in conj else v
    conj = {k: v for k, v in conj.items() if v}
    if any(a == 0 for a, _ in conj):
        raise DegeneracyError("z^0 layer does not vanish identically in L")
    if (1, 0) in conj:
        raise DegeneracyError("normalization failed to remove the Phi_k term")
    c11 = conj[(1, 1)]
    table = {(a - 2, p): -(c / c11) for (a, p), c in conj.items() if a >= 2}
    if n == 2 and cfg.specialization_spl2:
        s = cfg.s
        base = Poly([-s[2], s[1]])
    else:
        base = f
    return LOdeSystem(n, n - 1, base, table)


def check_system_on_series(system: LOdeSystem, data: AsymptoticData) -> dict:
    """Apply the L-space system to the Phi_k series; every residual must vanish."""
    dL = euler_D(data.L)
    phis = [data.phi(k) for k in range(data.depth + 1)]
    bad = None
    for k in range(1, data.depth + 1):
        rhs = QSeries.const(0, data.trunc)
        for (l, p), A in system.table.items():
            if k - 1 - l >= 0:
                rhs = rhs + _dL_power(phis[k - 1 - l], dL, p) * A(data.L)
        # each D_L costs one coefficient, so the comparison runs to trunc - max p
        if not (euler_D(phis[k]) - rhs * dL).is_zero():
            bad = k
            break
    return {"check": f"L-system-on-series[i={data.i}]", "status": "fail" if bad else "pass",
            "first_bad_k": bad}


def _dL_power(phi: QSeries, dL: QSeries, p: int) -> QSeries:
    """(DL^-1 D)^p phi; DL = c q + ..., so each step divides by q."""
    out = phi
    for _ in range(p):
        num = euler_D(out)
        # both numerator and DL vanish at q=0: cancel one power of q
        out = QSeries(num.coeffs[1:]) / QSeries(dL.coeffs[1:])
    return out
