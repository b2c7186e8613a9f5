"""Local P^1 from the I-function to closed forms.

Walks through one set of weights: build the restricted I-function, check
the Picard-Fuchs equation, read off mu, L and R_k, and recover the R_k as
elements of G_1 by exact fitting.

    python demos/local_p1_walkthrough.py
"""

from localpn.asymptotics import derive_L_ode, ifun_series, solve_asymptotics, verify_pf
from localpn.fitting import conjecture_report
from localpn.model import LambdaConfig, f_poly, gn_eval, r0_closed_form

cfg = LambdaConfig.parse(1, "1,2")
print("weights:", cfg, " f_1 =", f_poly(cfg).format("L"))

# The q^1 row of the I-function restricted to H = lambda_0.
I0 = ifun_series(cfg, 0, 4, 2)
print("I|_{H=1}, q^1 row:", I0.row_dict(1))

for i in range(2):
    print(f"PF annihilation on branch {i}:", verify_pf(cfg, i, 30)["status"])

# Asymptotic data on branch 0, in the rescaled variable t = 4q.
data = solve_asymptotics(cfg, 0, 3, 12)
print("L_0  =", data.L)
print("mu_0 =", data.mu)
print("R_0  =", data.R[0])
print("R_0 closed form agrees:", gn_eval(r0_closed_form(cfg, 0), data.L) == data.R[0])

system = derive_L_ode(cfg)
for (l, p), A in sorted(system.table.items()):
    print(f"A_{l}{p} =", A.format("L", system.f))

report = conjecture_report(cfg, 3)
for r in report["results"]:
    print(f"i={r['i']} k={r['k']} {r['status']:>5}  pole order {r.get('pole_order')}")
print("R_{1,0} =", report["results"][1]["element"]["text"])
