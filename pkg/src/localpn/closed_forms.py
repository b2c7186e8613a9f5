"""Published closed forms, specialized to concrete weights.

Coefficient tables of the normalized L-coordinate systems for local P^1 and
local P^2 (the latter on the locus s_2^2 = 3 s_1 s_3), and the first
correction R_1 for local P^1.  Each function returns exact
:class:`~localpn.scalars.RationalFunction` values in L, so they can be
compared against :func:`localpn.asymptotics.derive_L_ode` by equality.
"""

from __future__ import annotations

from .model import GnElement, LambdaConfig
from .scalars import Poly, RationalFunction


def _rf(num_coeffs, den: Poly, power: int, scale=1) -> RationalFunction:
    return RationalFunction(Poly(num_coeffs) * scale, den ** power)


def a_table_p1(s1, s2) -> dict:
    """A_{00}, A_{01}, A_{02} for local P^1; denominators are powers of s1 L - 2 s2."""
    f = Poly([-2 * s2, s1])
    return {
        (0, 0): _rf([-s1**2 * s2**2,
                     -s1**3 * s2 + 8 * s1 * s2**2,
                     2 * s1**4 - 9 * s1**2 * s2], f, 4) / 4,
        (0, 1): _rf([2 * s1 * s2**2,
                     -s1**2 * s2 - 8 * s2**2,
                     -s1**3 + 10 * s1 * s2,
                     -s1**2], f, 3) / 2,
        (0, 2): _rf([s2**2,
                     -2 * s1 * s2,
                     s1**2 + s2,
                     -s1], f, 2),
    }


def a_table_p2(s1, s2) -> dict:
    """The seven A_{lp} for local P^2 on the spl2 locus; denominators are powers of s1 L - s2."""
    g = Poly([-s2, s1])
    shared = [
        8 * s1**2 * s2**5 - 21 * s2**6,
        -48 * s1**3 * s2**4 + 126 * s1 * s2**5,
        120 * s1**4 * s2**3 - 315 * s1**2 * s2**4,
        -124 * s1**5 * s2**2 + 264 * s1**3 * s2**3 + 144 * s1 * s2**4,
        12 * s1**6 * s2 + 153 * s1**4 * s2**2 - 432 * s1**2 * s2**3,
        60 * s1**7 - 342 * s1**5 * s2 + 432 * s1**3 * s2**2,
        -33 * s1**6 + 108 * s1**4 * s2,
    ]
    L = Poly([0, 1])
    a13_num = (Poly([s2**2, -3 * s1 * s2, 3 * s1**2])
               * Poly([s2**2, -3 * s1 * s2, 3 * s1**2, -3 * s1]) ** 2)
    return {
        (0, 0): _rf([s1 * s2**3,
                     -4 * s1**2 * s2**2 + 3 * s2**3,
                     -s1**3 * s2 + 12 * s1 * s2**2,
                     11 * s1**4 - 36 * s1**2 * s2], g, 5, s1) / 9,
        (0, 1): _rf([s2**3,
                     -4 * s1 * s2**2,
                     3 * s1**2 * s2 + 9 * s2**2,
                     3 * s1**3 - 21 * s1 * s2,
                     3 * s1**2], g, 4, -s1) / 3,
        (0, 2): _rf([s2**3,
                     -5 * s1 * s2**2,
                     9 * s1**2 * s2,
                     -6 * s1**3 - 3 * s1 * s2,
                     6 * s1**2], g, 3, -1) / 3,
        (1, 0): RationalFunction(Poly(shared) * L * s1**2, g ** 9) / 27,
        (1, 1): RationalFunction(Poly(shared) * L * (-s1), g ** 8) / 27,
        (1, 2): _rf([-s2**6,
                     9 * s1 * s2**5,
                     -32 * s1**2 * s2**4 - 9 * s2**5,
                     57 * s1**3 * s2**3 + 60 * s1 * s2**4,
                     -48 * s1**4 * s2**2 - 171 * s1**2 * s2**3,
                     9 * s1**5 * s2 + 237 * s1**3 * s2**2 + 27 * s1 * s2**3,
                     9 * s1**6 - 144 * s1**4 * s2 - 90 * s1**2 * s2**2,
                     9 * s1**5 + 108 * s1**3 * s2,
                     -18 * s1**4], g, 7, s1) / 9,
        (1, 3): RationalFunction(a13_num * -1, g ** 6) / 27,
    }


def published_a_table(cfg: LambdaConfig) -> dict:
    s = cfg.s
    if cfg.n == 1:
        return a_table_p1(s[1], s[2])
    if cfg.n == 2 and cfg.specialization_spl2:
        if not s[1]:
            raise ZeroDivisionError("s_1 = 0: the local P^2 table is singular here")
        return a_table_p2(s[1], s[2])
    raise ValueError("no published table for this configuration")


def r1_p1(cfg: LambdaConfig, i: int) -> GnElement:
    """R_{1,i} for local P^1, using lambda_2 = lambda_0."""
    if cfg.n != 1:
        raise ValueError("R_1 closed form is for n = 1")
    s1, s2 = cfg.s[1], cfg.s[2]
    li, lj = cfg.lambdas[i], cfg.lambdas[(i + 1) % 2]
    f = Poly([-2 * s2, s1])
    bracket = RationalFunction(
        Poly([-16 * s1**2 * s2**2 + 88 * s2**3,
              27 * s1**3 * s2 - 132 * s1 * s2**2,
              -12 * s1**4 + 54 * s1**2 * s2]),
        f ** 3 * (24 * s1),
    )
    const = (12 * li**2 - 9 * li * lj + lj**2) / (24 * (li**3 - li * lj**2))
    return GnElement.for_branch(cfg, i, bracket + const, half=1)
