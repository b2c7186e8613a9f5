"""Local P^2 on the locus s_2^2 = 3 s_1 s_3, computed over Q(zeta_3).

There is no rational point on this locus with distinct weights, so the
weights are (1, -1, (2 zeta_3 + 1)/3).  The localizing polynomial is then
the square of a linear factor and the seven-term system closes over it.

    python demos/local_p2_cyclotomic.py
"""

from localpn.admissibility import LevelOperator, check_deg1_conditions, run_recursion
from localpn.asymptotics import derive_L_ode, solve_asymptotics, verify_asymptotic
from localpn.closed_forms import published_a_table
from localpn.model import LambdaConfig, f_poly, localizing_factor

cfg = LambdaConfig.spl2_canonical()
s = cfg.s
print("weights:", [str(x) for x in cfg.lambdas])
print("s_2^2 - 3 s_1 s_3 =", s[2] ** 2 - 3 * s[1] * s[3])
print("f_2 =", f_poly(cfg).format("L"), " localizing factor:", localizing_factor(cfg).format("L"))

system = derive_L_ode(cfg)
print("derived table equals the published one:", system.table == published_a_table(cfg))

op = LevelOperator.from_table(system.level, system.f, system.table)
print("degree-1 conditions:", check_deg1_conditions(op)["status"])
rec = run_recursion(op, 4, anchor=cfg.lambdas[0])
for k, x in enumerate(rec.values):
    print(f"Phi_{k} has pole order {x.e} in {system.f.format('L')}")

data = solve_asymptotics(cfg, 2, 10, 10)
print("asymptotic form on branch 2:", verify_asymptotic(cfg, 2, data)["status"])
