"""Toy level-0 operators on either side of the admissibility thresholds.

    python demos/admissibility_probes.py
"""

from localpn.admissibility import (
    LevelOperator,
    LocalizedElement,
    check_deg1_conditions,
    check_deg2_conditions,
    run_recursion,
)
from localpn.scalars import Poly

f = Poly([-4, 3])    # 3x - 4
g = Poly([1, 0, 1])  # x^2 + 1


def el(digits, base):
    return LocalizedElement.from_expansion(digits, base)


cases = {
    "A00 = f^-2": LevelOperator(0, f, {(0, 0): el({-2: 1}, f)}),
    "A00 = f^-1": LevelOperator(0, f, {(0, 0): el({-1: 1}, f)}),
    "A01 = f^-3, A02 = f^3": LevelOperator(0, f, {(0, 1): el({-3: 1}, f), (0, 2): el({3: 1}, f)}),
}
for name, op in cases.items():
    cond = check_deg1_conditions(op)["status"]
    rec = run_recursion(op, 4)
    where = "" if rec.ok else f" (obstruction at k={rec.obstruction['k']})"
    print(f"{name:26s} conditions {cond:4s}  recursion {'ok' if rec.ok else 'stuck'}{where}")

quad = {
    "A00 = g' g^-2, A01 = g^-2": LevelOperator(0, g, {(0, 0): el({-2: 1}, g) * g.derivative(),
                                                     (0, 1): el({-2: 1}, g)}),
    "A00 = g' g^-1": LevelOperator(0, g, {(0, 0): el({-1: 1}, g) * g.derivative()}),
}
for name, op in quad.items():
    cond = check_deg2_conditions(op)["status"]
    rec = run_recursion(op, 4)
    print(f"{name:26s} conditions {cond:4s}  recursion {'ok' if rec.ok else 'stuck'}")
