"""Acceptance suite: one test per criterion, all with exact arithmetic.

Run ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to get one PASS/FAIL line per criterion.
"""

import random
from math import factorial
from pathlib import Path

from gmpy2 import mpq

from localpn.admissibility import (
    LevelOperator,
    LocalizedElement,
    check_deg1_conditions,
    check_deg2_conditions,
    run_recursion,
)
from localpn.asymptotics import (
    derive_L_ode,
    solve_asymptotics,
    verify_asymptotic,
    verify_pf,
)
from localpn.closed_forms import a_table_p1, a_table_p2, r1_p1
from localpn.fitting import conjecture_report
from localpn.model import (
    LambdaConfig,
    char_poly,
    dL_series,
    f_poly,
    gn_eval,
    mirror_map,
    r0_closed_form,
)
from localpn.scalars import Cyclo, Poly
from localpn.series import QSeries, euler_D

SEED = 20261018
PF_CONFIGS = [(1, "1,2"), (2, "1,2,4"), (3, "1,2,4,5")]


def random_pairs(count, seed=SEED):
    """Distinct nonzero rational pairs with s_1 != 0, drawn from a fixed seed."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = mpq(rng.randint(-12, 12), rng.randint(1, 6))
        b = mpq(rng.randint(-12, 12), rng.randint(1, 6))
        if a and b and a != b and a + b and (a, b) != (1, 2):
            out.append(LambdaConfig(1, (a, b)))
    return out


def test_c01_pf_annihilation():
    for n, spec in PF_CONFIGS:
        cfg = LambdaConfig.parse(n, spec)
        for i in range(n + 1):
            rep = verify_pf(cfg, i, 30, 4)
            assert rep["status"] == "pass", (spec, i, rep)


def test_c02_r0_closed_form():
    for n, spec in PF_CONFIGS:
        cfg = LambdaConfig.parse(n, spec)
        for i in range(n + 1):
            data = solve_asymptotics(cfg, i, 0, 30)
            assert data.R[0] == gn_eval(r0_closed_form(cfg, i), data.L), (spec, i)


def test_c03_r1_closed_form():
    for cfg in [LambdaConfig.parse(1, "1,2")] + random_pairs(2, SEED + 3):
        for i in range(2):
            data = solve_asymptotics(cfg, i, 1, 30)
            assert data.R[1] == gn_eval(r1_p1(cfg, i), data.L), (str(cfg), i)


def test_c04_a_table_p1():
    for cfg in random_pairs(3, SEED + 4):
        system = derive_L_ode(cfg)
        expected = a_table_p1(cfg.s[1], cfg.s[2])
        assert set(system.table) == {(0, 0), (0, 1), (0, 2)}
        for key in expected:
            assert system.table[key] == expected[key], (str(cfg), key)


def test_c05_a_table_p2_spl2():
    cfg = LambdaConfig.spl2_canonical()
    assert cfg.lambdas[2] == (2 * Cyclo.zeta(3) + 1) / 3
    system = derive_L_ode(cfg)
    expected = a_table_p2(cfg.s[1], cfg.s[2])
    assert set(system.table) == set(expected) and len(expected) == 7
    for key in expected:
        assert system.table[key] == expected[key], key
    for key in [(1, 3), (0, 0)]:
        got, want = system.table[key], expected[key]
        assert len(got.num.coeffs) == len(want.num.coeffs)
        assert all(a == b for a, b in zip(got.num.coeffs, want.num.coeffs)), key
        assert all(a == b for a, b in zip(got.den.coeffs, want.den.coeffs)), key


def test_c06_asymptotic_form():
    for cfg in [LambdaConfig.parse(1, "1,2"), LambdaConfig.spl2_canonical()]:
        for i in range(cfg.n + 1):
            data = solve_asymptotics(cfg, i, 15, 15)
            rep = verify_asymptotic(cfg, i, data, 15)
            assert rep["status"] == "pass", (str(cfg), i, rep)
            assert rep["entries_checked"] == 16 * 16


def test_c07_conjecture_evidence():
    runs = [(LambdaConfig.parse(1, "1,2"), 5), (LambdaConfig.parse(1, "-3/2,5"), 5),
            (LambdaConfig.spl2_canonical(), 4)]
    for cfg, K in runs:
        rep = conjecture_report(cfg, K, extra=10)
        assert len(rep["results"]) == (cfg.n + 1) * (K + 1)
        for r in rep["results"]:
            assert r["status"] == "pass", (str(cfg), r["i"], r["k"], r["attempts"])
            assert r["verify"]["surplus"] >= 10


def _operator(cfg):
    system = derive_L_ode(cfg)
    return LevelOperator.from_table(system.level, system.f, system.table)


def test_c08_admissibility():
    for cfg in [LambdaConfig.parse(1, "1,2"), LambdaConfig.spl2_canonical()]:
        op = _operator(cfg)
        assert op.f.degree() == 1
        if cfg.n == 2:
            s = cfg.s
            assert op.f == Poly([-s[2], s[1]])
        assert check_deg1_conditions(op)["status"] == "pass"
        for i in range(cfg.n + 1):
            res = run_recursion(op, 8, anchor=cfg.lambdas[i])
            assert res.ok, res.obstruction
            data = solve_asymptotics(cfg, i, 8, 30)
            for k in range(9):
                assert res.values[k](data.L) == data.phi(k), (str(cfg), i, k)
    # threshold probes
    f1 = Poly([-4, 3])
    f2 = Poly([1, 0, 1])

    def el(d, f):
        return LocalizedElement.from_expansion(d, f)

    assert check_deg1_conditions(LevelOperator(0, f1, {(0, 0): el({-1: 1}, f1)}))["status"] == "fail"
    assert check_deg1_conditions(LevelOperator(0, f1, {(0, 1): el({1: 1}, f1)}))["status"] == "fail"
    assert check_deg1_conditions(LevelOperator(0, f1, {(0, 2): el({4: 1}, f1)}))["status"] == "fail"
    bad2 = LevelOperator(0, f2, {(0, 0): el({-1: 1}, f2) * f2.derivative()})
    assert check_deg2_conditions(bad2)["status"] == "fail"
    res = run_recursion(LevelOperator(0, f1, {(0, 0): el({-1: 1}, f1)}), 3)
    assert not res.ok and res.obstruction["k"] == 1


def test_c09_structural_identities():
    configs = [LambdaConfig.parse(n, spec) for n, spec in PF_CONFIGS] + [
        LambdaConfig.parse(2, "zeta:3"),
        LambdaConfig.spl2_canonical(),
        LambdaConfig(2, (mpq(1), Cyclo.zeta(3) + 2, mpq(-1, 2))),
    ]
    for cfg in configs:
        p, f = char_poly(cfg), f_poly(cfg)
        for i in range(cfg.n + 1):
            lam = cfg.lambdas[i]
            rhs = lam
            for j, mu in enumerate(cfg.lambdas):
                if j != i:
                    rhs = rhs * (lam - mu)
            assert f(lam) == rhs
            data = solve_asymptotics(cfg, i, 0, 20)
            DL = dL_series(cfg, i, 20)
            assert DL * f(data.L) == data.L * p(data.L)
            assert lam + euler_D(data.mu) == data.L


def test_c10_mirror_map():
    N = 10
    a = QSeries([0] + [mpq(2 * factorial(2 * d - 1), factorial(d) ** 2) for d in range(1, N + 1)])
    total = QSeries.const(0, N)
    power = QSeries.const(1, N)
    for k in range(N + 1):
        total = total + power * mpq(1, factorial(k))
        power = power * a
    oracle = QSeries([0] + list(total.coeffs[:N]))
    Q = mirror_map(N)
    assert Q == oracle
    assert Q.coeffs[1:5] == (1, 2, 5, 14)


def test_c11_out_of_scope_documented():
    readme = Path(__file__).resolve().parents[1] / "README.md"
    text = readme.read_text(encoding="utf-8")
    assert "out of scope" in text.lower() and "N_{g,d}" in text


CRITERIA = [
    ("1 PF annihilation", test_c01_pf_annihilation),
    ("2 closed form R_0", test_c02_r0_closed_form),
    ("3 closed form R_1 (n=1)", test_c03_r1_closed_form),
    ("4 A-table n=1", test_c04_a_table_p1),
    ("5 A-table n=2 spl2", test_c05_a_table_p2_spl2),
    ("6 asymptotic-form identity", test_c06_asymptotic_form),
    ("7 conjecture evidence", test_c07_conjecture_evidence),
    ("8 admissibility", test_c08_admissibility),
    ("9 structural identities", test_c09_structural_identities),
    ("10 mirror map", test_c10_mirror_map),
    ("11 genus-g invariants out of scope", test_c11_out_of_scope_documented),
]


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA:
        try:
            fn()
            print(f"criterion {name}: PASS")
        except AssertionError as exc:
            failed += 1
            print(f"criterion {name}: FAIL {exc}")
    raise SystemExit(1 if failed else 0)
