"""Recovering closed G_n forms from truncated series.

A target series T on branch i is matched against the ansatz

    T = fhat(L)^(-m/2) * ( sum_{j_min <= j < 0} c_j L^j
                           + sum_{e, 0 <= r < deg b} c_{e,r} L^r b(L)^e )

where b is the localizing factor (squarefree part of f_n).  Every body in
the ring has exactly one such expansion, so a feasible fit is unique once
enough coefficients are used.  The linear system is solved exactly; a
block of trailing coefficients is held back and checked afterwards.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .asymptotics import solve_asymptotics
from .model import GnElement, LambdaConfig, localizing_factor, normalized_f
from .scalars import Poly, RationalFunction, inv
from .series import QSeries, ps_sqrt

SURPLUS = 10
# rows beyond the unknown count used inside the solve, so that a window
# that is too small shows up as an inconsistent system
SLACK = 5


@dataclass(frozen=True)
class Windows:
    """L-powers j in [j_min, j_max], localizing-factor powers e in [e_min, e_max]."""

    j_min: int
    j_max: int
    e_min: int
    e_max: int

    def __post_init__(self):
        if self.j_min > self.j_max or self.e_min > self.e_max:
            raise ValueError("empty window")

    @classmethod
    def default(cls, k: int) -> "Windows":
        w = 3 * k + 3
        return cls(0, w, -w, 0)

    def doubled(self) -> "Windows":
        return Windows(2 * self.j_min, 2 * self.j_max, 2 * self.e_min, 2 * self.e_max)

    def to_json(self):
        return {"j": [self.j_min, self.j_max], "e": [self.e_min, self.e_max]}


def _basis_keys(w: Windows, base: Poly):
    """("L", j) and ("b", e, r) labels of the ansatz monomials."""
    keys = [("L", j) for j in range(w.j_min, min(w.j_max + 1, 0))]
    db = base.degree()
    if db < 1:
        keys += [("L", j) for j in range(max(w.j_min, 0), w.j_max + 1)]
        return keys
    top = max(w.e_max, w.j_max // db)
    for e in range(w.e_min, top + 1):
        keys += [("b", e, r) for r in range(db)]
    return keys


def unknown_count(w: Windows, base: Poly) -> int:
    return len(_basis_keys(w, base))


def required_trunc(w: Windows, base: Poly, extra: int = SURPLUS) -> int:
    return unknown_count(w, base) + SLACK + extra


@dataclass
class FitProblem:
    target: QSeries
    L: QSeries
    fhat: Poly
    base: Poly
    windows: Windows
    half: int = 1
    extra: int = SURPLUS

    def __post_init__(self):
        if self.half not in (0, 1):
            raise ValueError("half must be 0 or 1")
        if self.extra < 0:
            raise ValueError("extra must be non-negative")

    @classmethod
    def for_branch(cls, cfg: LambdaConfig, i: int, target: QSeries, L: QSeries,
                   windows: Windows, half: int = 1, extra: int = SURPLUS) -> "FitProblem":
        return cls(target, L, normalized_f(cfg, i), localizing_factor(cfg), windows, half, extra)

    @property
    def rows(self) -> int:
        """Coefficients consumed by the solve."""
        return min(self.target.trunc, self.L.trunc) - self.extra


@dataclass
class FitResult:
    status: str  # "pass", "infeasible" or "underdetermined"
    element: GnElement | None
    unknowns: int
    rows: int
    rank: int

    def to_json(self):
        return {
            "status": self.status,
            "unknowns": self.unknowns,
            "rows": self.rows,
            "rank": self.rank,
            "element": self.element.to_json() if self.element is not None else None,
        }


class BasisCache:
    """Series of the ansatz monomials on one branch, built by repeated multiplication."""

    def __init__(self, L: QSeries, base: Poly):
        self.L = L
        self.base = base
        self.N = L.trunc
        self._pos = {}
        self._neg = {}
        self._store = {}

    def _power(self, table, gen_fn, e: int) -> QSeries:
        if not table:
            table[0] = QSeries.const(1, self.N)
        top = max(table)
        if e > top:
            g = gen_fn()
            for k in range(top + 1, e + 1):
                table[k] = table[k - 1] * g
        return table[e]

    def _gen(self, name):
        if name not in self._store:
            L = self.L
            self._store[name] = {
                "L": lambda: L,
                "Linv": lambda: L.inverse(),
                "b": lambda: self.base(L),
                "binv": lambda: self.base(L).inverse(),
            }[name]()
        return self._store[name]

    def series(self, key) -> QSeries:
        if key in self._store:
            return self._store[key]
        if key[0] == "L":
            j = key[1]
            tab = self._pos.setdefault("L", {}) if j >= 0 else self._neg.setdefault("L", {})
            val = self._power(tab, lambda: self._gen("L" if j >= 0 else "Linv"), abs(j))
        else:
            _, e, r = key
            tab = self._pos.setdefault("b", {}) if e >= 0 else self._neg.setdefault("b", {})
            val = self._power(tab, lambda: self._gen("b" if e >= 0 else "binv"), abs(e))
            if r:
                val = val * self.series(("L", r))
        self._store[key] = val
        return val


def solve_exact(rows: list[list], rhs: list):
    """Gaussian elimination over a field.

    Returns ``(solution, rank, consistent)``; free variables are set to 0.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, m) if a[k][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pinv = inv(a[r][c])
        a[r] = [x * pinv for x in a[r]]
        for k in range(m):
            if k != r and a[k][c]:
                fac = a[k][c]
                rowr = a[r]
                a[k] = [x - fac * y if y else x for x, y in zip(a[k], rowr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    consistent = all(not a[k][ncols] for k in range(r, m))
    sol = [0] * ncols
    for k, c in enumerate(pivots):
        sol[c] = a[k][ncols]
    return sol, r, consistent


def _element(keys, sol, problem: FitProblem) -> GnElement:
    base = problem.base
    x = Poly.x()
    terms = [(k, c) for k, c in zip(keys, sol) if c]
    a = max([0] + [-k[1] for k, _ in terms if k[0] == "L"])
    E = max([0] + [-k[1] for k, _ in terms if k[0] == "b"])
    num = Poly()
    for key, c in terms:
        if key[0] == "L":
            num = num + x ** (key[1] + a) * base ** E * c
        else:
            _, e, r = key
            num = num + x ** (r + a) * base ** (e + E) * c
    body = RationalFunction(num, x ** a * base ** E)
    return GnElement(body, problem.half, problem.fhat, base)


def fit_gn(problem: FitProblem, cache: BasisCache | None = None) -> FitResult:
    keys = _basis_keys(problem.windows, problem.base)
    N = problem.rows
    if N < 1:
        raise ValueError("target too short for the reserved surplus")
    phi = problem.target.truncate(N)
    if problem.half:
        phi = phi * ps_sqrt(problem.fhat(problem.L.truncate(N)), 1)
    if cache is None or cache.base != problem.base or cache.N < N:
        cache = BasisCache(problem.L.truncate(N), problem.base)
    cols = [cache.series(k).coeffs for k in keys]
    mat = [[col[d] for col in cols] for d in range(N)]
    sol, rank, consistent = solve_exact(mat, list(phi.coeffs))
    if not consistent:
        return FitResult("infeasible", None, len(keys), N, rank)
    if rank < len(keys):
        return FitResult("underdetermined", None, len(keys), N, rank)
    return FitResult("pass", _element(keys, sol, problem), len(keys), N, rank)


def verify_fit(elem: GnElement, target: QSeries, L: QSeries, extra: int = SURPLUS,
               consumed: int | None = None) -> dict:
    """Compare gn_eval(elem) with the full target, surplus included."""
    from .model import gn_eval

    N = min(target.trunc, L.trunc)
    if consumed is not None and N - consumed < extra:
        raise ValueError(f"need {extra} surplus coefficients, have {N - consumed}")
    got = gn_eval(elem, L.truncate(N))
    mismatch = None
    for d in range(N):
        if got[d] != target[d]:
            mismatch = d
            break
    return {
        "check": "fit-verify",
        "status": "pass" if mismatch is None else "fail",
        "coefficients": N,
        "surplus": N - consumed if consumed is not None else extra,
        "first_mismatch": mismatch,
    }


def _pole_order(elem: GnElement) -> int:
    lpart, bpart = elem.expansion()
    return max([0] + [-e for e in bpart if e < 0])


def fit_and_verify(cfg: LambdaConfig, i: int, k: int, target: QSeries, L: QSeries,
                   windows: Windows | None = None, extra: int = SURPLUS,
                   cache: BasisCache | None = None) -> dict:
    """Fit R_k with the given (or default) windows, doubling once if infeasible."""
    tried = []
    w = windows if windows is not None else Windows.default(k)
    attempts = [w, w.doubled()]
    res = None
    for w in attempts:
        prob = FitProblem.for_branch(cfg, i, target, L, w, 1, extra)
        if prob.rows < unknown_count(w, prob.base) + SLACK:
            tried.append({"windows": w.to_json(), "status": "underdetermined"})
            res = None
            continue
        res = fit_gn(prob, cache)
        tried.append({"windows": w.to_json(), "status": res.status})
        if res.status == "pass":
            break
    out = {"i": i, "k": k, "attempts": tried, "element": None, "status": tried[-1]["status"]}
    if res is not None and res.status == "pass":
        report = verify_fit(res.element, target, L, extra, res.rows)
        out["status"] = report["status"]
        out["verify"] = report
        out["element"] = res.element.to_json()
        out["pole_order"] = _pole_order(res.element)
    return out


def _branch_job(args):
    cfg, i, K, windows, extra = args
    need = 0
    base = localizing_factor(cfg)
    for k in range(K + 1):
        w = windows if windows is not None else Windows.default(k)
        need = max(need, required_trunc(w.doubled(), base, extra))
    data = solve_asymptotics(cfg, i, K, need)
    cache = BasisCache(data.L, base)
    return [fit_and_verify(cfg, i, k, data.R[k], data.L, windows, extra, cache) for k in range(K + 1)]


def conjecture_report(cfg: LambdaConfig, K: int, windows: Windows | None = None,
                      extra: int = SURPLUS, jobs: int = 1) -> dict:
    """Fit and verify R_{k,i} for every branch i and 0 <= k <= K."""
    tasks = [(cfg, i, K, windows, extra) for i in range(cfg.n + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_branch_job, tasks))
    else:
        chunks = [_branch_job(t) for t in tasks]
    results = sorted((r for c in chunks for r in c), key=lambda r: (r["i"], r["k"]))
    ok = all(r["status"] == "pass" for r in results)
    return {
        "check": "conjecture",
        "status": "pass" if ok else "fail",
        "n": cfg.n,
        "lambda": cfg.to_json(),
        "K": K,
        "surplus": extra,
        "results": results,
    }
