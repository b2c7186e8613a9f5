"""Command-line entry point: ``localpn <subcommand> [options]``.

Exit codes: 0 pass (or data emitted), 1 a mathematical check failed,
2 usage error, 3 degenerate weights.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .admissibility import (
    LevelOperator,
    check_deg1_conditions,
    check_deg2_conditions,
    run_recursion,
)
from .asymptotics import derive_L_ode, ifun_series, solve_asymptotics, verify_asymptotic, verify_pf
from .cache import Cache
from .closed_forms import published_a_table
from .fitting import SURPLUS, conjecture_report
from .model import LambdaConfig, mirror_map
from .scalars import scalar_from_json, scalar_to_json
from .series import DEFAULT_ORDER, DegeneracyError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3

COMMANDS = ("ifun", "asymp", "verify-pf", "verify-asymp", "derive-ode", "fit", "admissible", "mirror-map")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 1
    lam: str = "1,2"
    order: int = DEFAULT_ORDER
    k: int = 3
    zmax: int = 4
    fmt: str = "json"
    out: str | None = None
    cache_dir: str | None = None
    jobs: int = 1
    operator: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown subcommand {self.command!r}")
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.order < 1:
            raise UsageError("--order must be >= 1")
        if self.k < 0:
            raise UsageError("--k must be >= 0")
        if self.zmax < 0:
            raise UsageError("--zmax must be >= 0")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.fmt not in ("json", "text"):
            raise UsageError("--format must be json or text")
        spec = self.lam.strip()
        if not (spec.startswith("zeta:") or spec == "spl2-canonical"):
            if len(spec.split(",")) != self.n + 1:
                raise UsageError(f"--lambda needs {self.n + 1} comma-separated weights")

    def lambda_config(self) -> LambdaConfig:
        try:
            return LambdaConfig.parse(self.n, self.lam)
        except DegeneracyError:
            raise
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad --lambda: {exc}") from exc

    def cache_fields(self) -> dict:
        """The fields that determine the payload (format, output and width do not)."""
        fields = {"command": self.command, "n": self.n, "lambda": self.lam.strip(),
                  "order": self.order, "k": self.k, "zmax": self.zmax}
        if self.operator is not None:
            with open(self.operator, encoding="utf-8") as fh:
                fields["operator"] = json.load(fh)
        return fields


def _pmap(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def _overall(reports) -> str:
    return "pass" if all(r["status"] == "pass" for r in reports) else "fail"


# -- per-branch workers (module level so they pickle) --------------------------

def _ifun_job(args):
    cfg, i, order, zmax = args
    return {"i": i, "series": ifun_series(cfg, i, order, zmax).to_json()}


def _asymp_job(args):
    cfg, i, order, k = args
    return solve_asymptotics(cfg, i, k, order).to_json()


def _pf_job(args):
    cfg, i, order, zmax = args
    return verify_pf(cfg, i, order, zmax)


def _verify_asymp_job(args):
    cfg, i, order, k = args
    return verify_asymptotic(cfg, i, solve_asymptotics(cfg, i, k, order))


# -- subcommands ---------------------------------------------------------------

def compare_a_table(cfg: LambdaConfig) -> dict:
    """Derived L-system against the published table, where one exists."""
    if not (cfg.n == 1 or cfg.specialization_spl2):
        return {"status": "skipped", "reason": "no published table for this configuration"}
    if not cfg.s[1]:
        return {"status": "skipped", "reason": "singular: s_1 = 0 makes the table denominators vanish"}
    system = derive_L_ode(cfg)
    table = published_a_table(cfg)
    bad = sorted(set(system.table) ^ set(table)) + sorted(
        key for key in set(system.table) & set(table) if system.table[key] != table[key])
    return {"status": "fail" if bad else "pass",
            "mismatched": [{"l": l, "p": p} for l, p in bad]}


def cmd_ifun(rc: RunConfig, cfg: LambdaConfig) -> dict:
    tasks = [(cfg, i, rc.order, rc.zmax) for i in range(cfg.n + 1)]
    return {"n": cfg.n, "lambda": cfg.to_json(), "variable": "q", "order": rc.order,
            "zmax": rc.zmax, "branches": _pmap(_ifun_job, tasks, rc.jobs)}


def cmd_asymp(rc: RunConfig, cfg: LambdaConfig) -> dict:
    tasks = [(cfg, i, rc.order, rc.k) for i in range(cfg.n + 1)]
    return {"n": cfg.n, "lambda": cfg.to_json(), "order": rc.order, "k": rc.k,
            "branches": _pmap(_asymp_job, tasks, rc.jobs), "a_table": compare_a_table(cfg)}


def cmd_verify_pf(rc: RunConfig, cfg: LambdaConfig) -> dict:
    tasks = [(cfg, i, rc.order, rc.zmax) for i in range(cfg.n + 1)]
    reports = _pmap(_pf_job, tasks, rc.jobs)
    return {"check": "pf-annihilation", "status": _overall(reports), "n": cfg.n,
            "lambda": cfg.to_json(), "reports": reports}


def cmd_verify_asymp(rc: RunConfig, cfg: LambdaConfig) -> dict:
    tasks = [(cfg, i, rc.order, rc.k) for i in range(cfg.n + 1)]
    reports = _pmap(_verify_asymp_job, tasks, rc.jobs)
    return {"check": "asymptotic-form", "status": _overall(reports), "n": cfg.n,
            "lambda": cfg.to_json(), "reports": reports}


def cmd_derive_ode(rc: RunConfig, cfg: LambdaConfig) -> dict:
    system = derive_L_ode(cfg)
    comparison = compare_a_table(cfg)
    return {"check": "derive-ode", "status": "fail" if comparison["status"] == "fail" else "pass",
            "n": cfg.n, "lambda": cfg.to_json(), "system": system.to_json(),
            "comparison": comparison}


def cmd_fit(rc: RunConfig, cfg: LambdaConfig) -> dict:
    return conjecture_report(cfg, rc.k, None, SURPLUS, rc.jobs)


def cmd_admissible(rc: RunConfig, cfg: LambdaConfig | None) -> dict:
    if rc.operator is not None:
        with open(rc.operator, encoding="utf-8") as fh:
            op = LevelOperator.from_json(json.load(fh))
        source = rc.operator
    else:
        system = derive_L_ode(cfg)
        op = LevelOperator.from_table(system.level, system.f, system.table)
        source = "derived"
    if op.f.degree() == 1:
        cond = check_deg1_conditions(op)
    elif op.f.degree() == 2:
        cond = check_deg2_conditions(op)
    else:
        cond = {"check": "conditions", "status": "skipped", "reason": "deg f > 2"}
    rec = run_recursion(op, rc.k)
    recursion = {"depth": rc.k, "status": "pass" if rec.ok else "fail",
                 "obstruction": rec.obstruction,
                 "values": [{"k": k, "X": x.format("x"), "fexp": x.e} for k, x in enumerate(rec.values)]}
    status = "pass" if cond["status"] in ("pass", "skipped") and rec.ok else "fail"
    return {"check": "admissibility", "status": status, "source": source,
            "operator": op.to_json(), "conditions": cond, "recursion": recursion}


def cmd_mirror_map(rc: RunConfig, cfg) -> dict:
    Q = mirror_map(rc.order)
    return {"order": rc.order, "coefficients": [scalar_to_json(Q[d]) for d in range(1, rc.order + 1)]}


HANDLERS = {
    "ifun": cmd_ifun,
    "asymp": cmd_asymp,
    "verify-pf": cmd_verify_pf,
    "verify-asymp": cmd_verify_asymp,
    "derive-ode": cmd_derive_ode,
    "fit": cmd_fit,
    "admissible": cmd_admissible,
    "mirror-map": cmd_mirror_map,
}

NEEDS_WEIGHTS = set(COMMANDS) - {"mirror-map"}


def compute(rc: RunConfig) -> dict:
    cfg = None
    if rc.command in NEEDS_WEIGHTS and not (rc.command == "admissible" and rc.operator):
        cfg = rc.lambda_config()
    report = HANDLERS[rc.command](rc, cfg)
    return {"command": rc.command, **report}


# -- rendering -----------------------------------------------------------------

def _mismatch_lines(report: dict, indent: str = "  "):
    out = []
    for sub in report.get("reports", []):
        if sub.get("status") != "pass":
            mm = sub.get("first_mismatch")
            where = f" first mismatch at (d={mm['d']}, z={mm['z']}): {mm['lhs']} != {mm['rhs']}" if mm else ""
            out.append(f"{indent}{sub['check']}: {sub['status'].upper()}{where}")
    for r in report.get("results", []):
        if r.get("status") != "pass":
            out.append(f"{indent}i={r['i']} k={r['k']}: {r['status']}")
    if report.get("comparison", {}).get("status") == "fail":
        keys = ", ".join(f"({m['l']},{m['p']})" for m in report["comparison"]["mismatched"])
        out.append(f"{indent}A-table mismatch at {keys}")
    if "conditions" in report:
        for row in report["conditions"].get("entries", []):
            if row["status"] != "pass":
                out.append(f"{indent}A[{row['l']},{row['p']}] violates its bound ({row})")
        obs = report["recursion"]["obstruction"]
        if obs:
            out.append(f"{indent}obstruction at k={obs['k']}: {obs['reason']}")
    return out


def _show(coeffs, count: int = 6) -> str:
    return ", ".join(str(scalar_from_json(c)) for c in coeffs[:count])


def _data_lines(report: dict):
    cmd = report["command"]
    if cmd == "mirror-map":
        return [f"q^{d}: {c}" for d, c in enumerate(report["coefficients"], start=1)]
    if cmd == "ifun":
        lines = []
        for br in report["branches"]:
            for row in br["series"]["rows"]:
                terms = [f"{scalar_from_json(c)}*z^{row['zmin'] + j}"
                         for j, c in enumerate(row["coeffs"]) if c != "0"]
                lines.append(f"i={br['i']} q^{row['d']}: {' + '.join(terms) or '0'}")
        return lines
    if cmd == "asymp":
        lines = []
        for br in report["branches"]:
            lines.append(f"i={br['i']} mu: {_show(br['mu']['coeffs'])}")
            for k, r in enumerate(br["R"]):
                lines.append(f"i={br['i']} R_{k}: {_show(r['coeffs'])}")
        tab = report["a_table"]
        lines.append(f"A-table comparison: {tab['status']}" + (f" ({tab['reason']})" if "reason" in tab else ""))
        return lines
    return [json.dumps(report, sort_keys=True)]


def render_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    if "status" in report:
        if report["status"] == "pass":
            lines = ["PASS"]
            if report["command"] == "derive-ode":
                lines = ["PASS"] + [f"A[{e['l']},{e['p']}] = {e['A']}" for e in report["system"]["entries"]]
            return "\n".join(lines)
        return "\n".join(["FAIL"] + _mismatch_lines(report))
    return "\n".join(_data_lines(report))


def exit_code(report: dict) -> int:
    return EXIT_FAIL if report.get("status") == "fail" else EXIT_PASS


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="dimension n of local P^n")
    common.add_argument("--lambda", dest="lam", default=None,
                        help='weights: "1,2", "zeta:m" or "spl2-canonical"')
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series truncation N")
    common.add_argument("--k", type=int, default=3, help="depth K")
    common.add_argument("--zmax", type=int, default=4, help="largest z power kept")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $LOCALPN_CACHE_DIR, none if unset)")
    common.add_argument("--jobs", type=int, default=1, help="parallel branch workers")
    common.add_argument("--format", dest="fmt", default="json", choices=("json", "text"))
    parser = argparse.ArgumentParser(prog="localpn", description="Exact checks for local P^n asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "admissible":
            p.add_argument("--operator", default=None, help="operator JSON (default: derived from --n/--lambda)")
    return parser


def run(rc: RunConfig) -> tuple[dict, bool]:
    """(report, cache_hit)."""
    rc.validate()
    cache = Cache.from_env(rc.cache_dir)
    if cache is None:
        return compute(rc), False
    return cache.get_or_compute(rc.cache_fields(), lambda: compute(rc))


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    fields = vars(ns)
    if fields["lam"] is None:
        fields["lam"] = ",".join(str(j) for j in range(1, fields["n"] + 2))
    rc = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
    try:
        report, _ = run(rc)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegeneracyError, ZeroDivisionError) as exc:
        print(f"degenerate configuration: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    text = render_report(report, rc.fmt)
    if rc.out:
        with open(rc.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
