import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from localpn.admissibility import (
    LevelOperator,
    LocalizedElement,
    UndefinedOrderError,
    check_deg1_conditions,
    check_deg2_conditions,
    ord_wrt_f,
    rf_membership,
    run_recursion,
)
from localpn.asymptotics import derive_L_ode, solve_asymptotics
from localpn.closed_forms import a_table_p1
from localpn.model import LambdaConfig
from localpn.scalars import Poly, RationalFunction

from conftest import rationals

F1 = Poly([-4, 3])          # 3L - 4
F2 = Poly([1, 0, 1])        # x^2 + 1


def el(coeffs: dict, f=F1):
    return LocalizedElement.from_expansion(coeffs, f)


def derived_operator(cfg):
    system = derive_L_ode(cfg)
    return LevelOperator.from_table(system.level, system.f, system.table)


class TestLocalized:
    def test_order_examples(self):
        assert ord_wrt_f(el({-3: 1, -1: 1})) == -3
        x = LocalizedElement(Poly([0, 1]), 0, F1)
        assert ord_wrt_f(x) == 0
        a02 = LocalizedElement.from_rational(a_table_p1(mpq(3), mpq(2))[(0, 2)], F1)
        assert ord_wrt_f(a02) == -2
        assert a02.expansion()[-2] == Poly([mpq(4, 9)])

    def test_zero_order(self):
        with pytest.raises(UndefinedOrderError):
            ord_wrt_f(LocalizedElement(Poly(), 0, F1))

    @given(st.dictionaries(st.integers(-5, 5), rationals.filter(bool), max_size=5))
    def test_expansion_roundtrip(self, digits):
        a = el(digits)
        assert {i: r.coeffs[0] for i, r in a.expansion().items()} == digits
        assert LocalizedElement.from_expansion({i: r for i, r in a.expansion().items()}, F1) == a

    @given(st.dictionaries(st.integers(-4, 4), rationals.filter(bool), max_size=4))
    def test_derivative_matches_rational(self, digits):
        a = el(digits)
        assert a.derivative().as_rational() == a.as_rational().derivative()

    def test_membership_examples(self):
        df = F2.derivative()
        kind, b = rf_membership(el({3: 1}, F2))
        assert kind == "R_f" and ord_wrt_f(b) == 3
        kind, b = rf_membership(el({-2: 1}, F2) * df)
        assert kind == "f'R_f" and ord_wrt_f(b) == -2
        kind, b = rf_membership(LocalizedElement(Poly([0, 1]), 0, F2))
        assert kind == "f'R_f" and b == LocalizedElement(Poly([mpq(1, 2)]), 0, F2)
        kind, _ = rf_membership(LocalizedElement(Poly([1, 1]), 0, F2))
        assert kind == "neither"

    @given(st.dictionaries(st.integers(-3, 3), rationals.filter(bool), min_size=1, max_size=4))
    def test_membership_consistent(self, digits):
        g = Poly([2, -3, 1])
        a = el(digits, g)
        kind, b = rf_membership(a)
        assert kind == "R_f" and b == a
        kind, b = rf_membership(a * g.derivative())
        assert kind == "f'R_f" and b * g.derivative() == a * g.derivative()


class TestConditions:
    def test_paper_system(self):
        op = derived_operator(LambdaConfig.parse(1, "1,2"))
        rep = check_deg1_conditions(op)
        assert rep["status"] == "pass"
        orders = {(r["l"], r["p"]): r["order"] for r in rep["entries"]}
        assert orders[(0, 0)] == -4 and orders[(0, 2)] == -2 and orders[(0, 1)] <= 0

    def test_empty_and_threshold(self):
        assert check_deg1_conditions(LevelOperator(0, F1, {}))["status"] == "pass"
        bad = LevelOperator(0, F1, {(0, 0): el({-1: 1})})
        assert check_deg1_conditions(bad)["status"] == "fail"
        edge = LevelOperator(0, F1, {(0, 0): el({-2: 1}), (0, 1): el({0: 1}), (0, 3): el({4: 1})})
        assert check_deg1_conditions(edge)["status"] == "pass"
        over = LevelOperator(0, F1, {(0, 3): el({5: 1})})
        assert check_deg1_conditions(over)["status"] == "fail"

    def test_deg2_examples(self):
        df = F2.derivative()
        ok1 = LevelOperator(0, F2, {(0, 1): el({-2: 1}, F2)})
        assert check_deg2_conditions(ok1)["status"] == "pass"
        ok0 = LevelOperator(0, F2, {(0, 0): el({-2: 1}, F2) * df})
        assert check_deg2_conditions(ok0)["status"] == "pass"
        bad = LevelOperator(0, F2, {(0, 0): el({-1: 1}, F2) * df})
        assert check_deg2_conditions(bad)["status"] == "fail"
        wrong_parity = LevelOperator(0, F2, {(0, 0): el({-3: 1}, F2)})
        assert check_deg2_conditions(wrong_parity)["status"] == "fail"

    @pytest.mark.parametrize("spec", ["1,2", "-2,3/5", "7/3,-1/4"])
    def test_random_n1(self, spec):
        assert check_deg1_conditions(derived_operator(LambdaConfig.parse(1, spec)))["status"] == "pass"

    def test_spl2(self):
        op = derived_operator(LambdaConfig.spl2_canonical())
        assert op.f.degree() == 1
        assert check_deg1_conditions(op)["status"] == "pass"

    def test_index_range(self):
        with pytest.raises(ValueError):
            LevelOperator(0, F1, {(1, 0): el({0: 1})})

    def test_json_roundtrip(self):
        op = derived_operator(LambdaConfig.spl2_canonical())
        back = LevelOperator.from_json(op.to_json())
        assert back.entries == op.entries and back.f == op.f and back.level == op.level


class TestRecursion:
    def test_zero_operator(self):
        res = run_recursion(LevelOperator(1, F1, {}), 4)
        assert res.ok and all(not x for x in res.values[1:])

    def test_forced_log(self):
        res = run_recursion(LevelOperator(0, F1, {(0, 0): el({-1: 1})}), 3)
        assert not res.ok
        assert res.obstruction["k"] == 1 and res.obstruction["terms"] == [{"l": 0, "p": 0}]

    def test_deg2_log(self):
        df = F2.derivative()
        res = run_recursion(LevelOperator(0, F2, {(0, 0): el({-1: 1}, F2) * df}), 2)
        assert not res.ok and res.obstruction["k"] == 1

    def test_deg2_success(self):
        df = F2.derivative()
        op = LevelOperator(0, F2, {(0, 0): el({-2: 1}, F2) * df, (0, 1): el({-2: 1}, F2)})
        res = run_recursion(op, 4)
        assert res.ok
        _check_recursion(op, res.values)

    @pytest.mark.parametrize("spec,n", [("1,2", 1), ("spl2-canonical", 2)])
    def test_matches_series(self, spec, n):
        cfg = LambdaConfig.parse(n, spec)
        op = derived_operator(cfg)
        K = 8 if n == 1 else 5
        for i in range(n + 1):
            res = run_recursion(op, K, anchor=cfg.lambdas[i])
            assert res.ok
            _check_recursion(op, res.values)
            data = solve_asymptotics(cfg, i, K, 20)
            for k in range(K + 1):
                assert res.values[k](data.L) == data.phi(k)

    def test_constants_hook(self):
        op = derived_operator(LambdaConfig.parse(1, "1,2"))
        a = run_recursion(op, 3)
        b = run_recursion(op, 3, constants=[mpq(1), mpq(0), mpq(0)])
        assert (b.values[1] - a.values[1]) == LocalizedElement(Poly([1]), 0, F1)
        assert b.ok


def _check_recursion(op, xs):
    """D X_{k+1} equals the prescribed right-hand side."""
    for k in range(len(xs) - 1):
        rhs = LocalizedElement(Poly(), 0, op.f)
        for (l, p), a in op.entries.items():
            if k - l >= 0:
                d = xs[k - l]
                for _ in range(p):
                    d = d.derivative()
                rhs = rhs + a * d
        assert xs[k + 1].derivative() == rhs
