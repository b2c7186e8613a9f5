import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from localpn.scalars import Cyclo, Poly
from localpn.series import (
    DegeneracyError,
    DiffOperator,
    NonIntegrableError,
    QSeries,
    QZSeries,
    euler_antiD,
    euler_D,
    newton_root,
    ps_exp,
    ps_invert,
    ps_log,
    ps_mul,
    ps_sqrt,
    zq_laurent_expand,
)

from conftest import cyclo3, rationals

N = 12
q = QSeries.q(N)
one = QSeries.const(1, N)


def series_st(coeff=rationals, n=8, const=None):
    def build(cs):
        if const is not None:
            cs = [const] + cs[1:]
        return QSeries(cs, n)
    return st.lists(coeff, min_size=n + 1, max_size=n + 1).map(build)


def sympy_coeffs(expr, n):
    x = sp.Symbol("q")
    ser = sp.series(expr(x), x, 0, n + 1).removeO()
    return [mpq(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for c in (ser.coeff(x, k) for k in range(n + 1))]


class TestArithmetic:
    def test_products(self):
        assert (1 + q) * (1 - q) == 1 - q * q
        geo = QSeries([1] * (N + 1))
        assert geo * (1 - q) == one

    def test_truncation_alignment(self):
        a = QSeries([1, 2, 3], 2)
        b = QSeries([1, 1, 1, 1, 1], 4)
        assert (a * b).trunc == 2 and (a + b).trunc == 2

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            QSeries([1.0, 2])

    def test_invert(self):
        assert ps_invert(1 - q) == QSeries([1] * (N + 1))
        assert ps_invert(one) == one
        inv = ps_invert(QSeries([1, 3, -9], N))
        assert inv.coeffs[:3] == (1, -3, 18)
        assert inv.coeffs == tuple(sympy_coeffs(lambda x: 1 / (1 + 3 * x - 9 * x ** 2), N))
        with pytest.raises(ZeroDivisionError):
            ps_invert(q)

    def test_sqrt_examples(self):
        r = ps_sqrt(QSeries([1, 8], N))
        assert r.coeffs[:4] == (1, 4, -8, 32)
        assert r.coeffs == tuple(sympy_coeffs(lambda x: sp.sqrt(1 + 8 * x), N))
        assert ps_sqrt(one) == one
        r4 = ps_sqrt(QSeries([4, 4], N))
        assert r4.coeffs[:3] == (2, 1, mpq(-1, 4))
        with pytest.raises(ValueError):
            ps_sqrt(QSeries([2, 1], N))

    def test_sqrt_cyclotomic_needs_root(self):
        a = QSeries([Cyclo(3, [0, 1]), 1], N)
        with pytest.raises(ValueError):
            ps_sqrt(a)
        z3 = Cyclo.zeta(3)
        r = ps_sqrt(a, z3 * z3)  # (zeta^2)^2 = zeta
        assert r * r == a

    @given(series_st(const=mpq(1)))
    def test_sqrt_squares_back(self, a):
        r = ps_sqrt(a)
        assert r * r == a

    @given(series_st(coeff=cyclo3, const=Cyclo(3, [1, 0])))
    def test_sqrt_squares_back_cyclotomic(self, a):
        r = ps_sqrt(a, 1)
        assert r * r == a

    @given(series_st(coeff=cyclo3), series_st(coeff=rationals))
    def test_mixed_product_matches_naive(self, a, b):
        naive = [sum((a[i] * b[k - i] for i in range(k + 1)), mpq(0)) for k in range(a.trunc + 1)]
        assert ps_mul(a, b) == QSeries(naive)


class TestCalculus:
    L0 = QSeries([1, -1, 3, -13], 3)

    def test_euler_D(self):
        assert euler_D(one).is_zero()
        assert euler_D(QSeries([0, 0, 0, 1], 3)) == QSeries([0, 0, 0, 3], 3)
        assert euler_D(self.L0) == QSeries([0, -1, 6, -39], 3)

    def test_antiD(self):
        assert euler_antiD(QSeries.const(0, 3), 1) == QSeries.const(1, 3)
        assert euler_antiD(QSeries([0, -1, 6, -39], 3), 1) == self.L0
        mu = euler_antiD(self.L0 - 1, 0)
        assert mu == QSeries([0, -1, mpq(3, 2), mpq(-13, 3)], 3)
        with pytest.raises(NonIntegrableError):
            euler_antiD(one, 0)

    @given(series_st(), rationals)
    def test_antiD_inverts_D(self, a, c):
        a = QSeries([c] + list(a.coeffs[1:]))
        assert euler_antiD(euler_D(a), c) == a

    def test_exp(self):
        assert ps_exp(QSeries.const(0, 5)) == QSeries.const(1, 5)
        e = ps_exp(QSeries([0, 2, 3, mpq(20, 3)], 3))
        assert e.coeffs == (1, 2, 5, 14)
        with pytest.raises(NonIntegrableError):
            ps_exp(one)

    @given(series_st(const=mpq(0)))
    def test_log_exp_roundtrip(self, a):
        assert ps_log(ps_exp(a)) == a


class TestNewton:
    def quad(self):
        # (1 - q) L^2 - 3 L + 2
        return [QSeries.const(2, N), QSeries.const(-3, N), 1 - q]

    def test_roots(self):
        L0 = newton_root(self.quad(), mpq(1), N)
        L1 = newton_root(self.quad(), mpq(2), N)
        assert L0.coeffs[:4] == (1, -1, 3, -13)
        assert L1.coeffs[:4] == (2, 4, 0, 16)
        assert L0.coeffs == tuple(sympy_coeffs(lambda x: (3 - sp.sqrt(1 + 8 * x)) / (2 * (1 - x)), N))
        assert L0 + L1 == 3 * ps_invert(1 - q)
        assert L0 * L1 == 2 * ps_invert(1 - q)
        assert (L0 * L1).coeffs[:3] == (2, 2, 2)

    def test_residual_vanishes(self):
        cs = self.quad()
        for x0 in (1, 2):
            X = newton_root(cs, mpq(x0), N)
            assert (cs[0] + cs[1] * X + cs[2] * X * X).is_zero()

    def test_other_quadratic(self):
        # X^2 - (3 - q) X + 2 at x0 = 1 against the quadratic formula
        cs = [QSeries.const(2, N), -3 + q, one]
        X = newton_root(cs, mpq(1), N)
        oracle = sympy_coeffs(lambda x: ((3 - x) - sp.sqrt((3 - x) ** 2 - 8)) / 2, N)
        assert X.coeffs == tuple(oracle)

    def test_double_root(self):
        cs = [QSeries.const(1, N), QSeries.const(-2, N), one]  # (X - 1)^2
        with pytest.raises(DegeneracyError):
            newton_root(cs, mpq(1), N)


class TestLaurent:
    def test_examples(self):
        row = zq_laurent_expand(Poly([4, 2]), Poly([0, -1, 1]), 1, 3)
        assert row[:3] == [-4, -6, -6]
        assert zq_laurent_expand(Poly([1]), Poly([1]), 0, 2) == [1, 0, 0]
        row = zq_laurent_expand(Poly([0, 0, 0, 1]), Poly([0, 1]), 0, 3)
        assert row == [0, 0, 1, 0]

    def test_pole_bound(self):
        with pytest.raises(ValueError):
            zq_laurent_expand(Poly([1]), Poly([0, 0, 1]), 1, 2)

    def test_qz_json(self):
        s = QZSeries([[1], [-4, -6, -6]], 1)
        obj = s.to_json()
        assert obj["rows"][1] == {"d": 1, "zmin": -1, "coeffs": ["-4", "-6", "-6"]}
        assert QZSeries.from_json(obj) == s
        assert s.get(1, -1) == -4 and s.get(1, -5) == 0


def _series_op(terms):
    return DiffOperator(terms, euler_D)


class TestDiffOperator:
    def test_leibniz(self):
        D = _series_op({(0, 1): one})
        Q = _series_op({(0, 0): q})
        DQ = D @ Q
        assert DQ.terms[(0, 0)] == q and DQ.terms[(0, 1)] == q
        assert DQ.apply(one)[0] == q

    def test_q_zero_action(self):
        # (M - l0)(M - l1) on 1 with H = l0, M = H + z D
        l0, l1 = mpq(1), mpq(2)
        M0 = _series_op({(0, 0): one * (l0 - l0), (1, 1): one})
        M1 = _series_op({(0, 0): one * (l0 - l1), (1, 1): one})
        out = (M0 @ M1).apply(one)
        assert all(v.is_zero() for v in out.values())

    @given(series_st(), series_st(), series_st(), series_st())
    def test_composition_matches_action(self, a, b, c, f):
        A = _series_op({(0, 0): a, (0, 1): b, (1, 2): c})
        B = _series_op({(0, 1): c, (2, 0): a})
        C = _series_op({(0, 2): b, (0, 0): c})
        lhs = (A @ B).apply(f)
        rhs = {}
        for zb, v in B.apply(f).items():
            for za, w in A.apply(v).items():
                rhs[za + zb] = rhs[za + zb] + w if za + zb in rhs else w
        zero = QSeries.const(0, f.trunc)
        for k in set(lhs) | set(rhs):
            assert lhs.get(k, zero) == rhs.get(k, zero)
        assoc_l = ((A @ B) @ C).apply(f)
        assoc_r = (A @ (B @ C)).apply(f)
        assert set(assoc_l) == set(assoc_r)
        for k in assoc_l:
            assert assoc_l[k] == assoc_r[k]
