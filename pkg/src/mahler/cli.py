"""Command-line front end: ``mahler measure|transform|verify|closed-form|suite|catalog``.

Exit codes: 0 success, 2 usage or parse error, 3 numeric failure,
4 invalid transform data, 5 verification failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import time
from importlib import resources
from typing import Sequence

from . import __version__
from .expr import ExprSyntaxError, parse
from .measure import MeasureError, QuadConfig, measure, verify_identity
from .poly import PoleError, PolyError, to_text
from .roots import RootFindingError
from .special import CATALOG_KEYS, closed_form, named_constant
from .suites import SUITES, run_suite
from .transform import (
    InvalidSpecError,
    TransformSpec,
    apply_transform,
    build_family,
    catalog_entry,
    identity_catalog,
    validate_spec,
    verify_invariance,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_SPEC, EXIT_VERIFY = 0, 2, 3, 4, 5
SEED_ENV = "MAHLER_SEED"
_CONFIG_KEYS = {"method": str, "nodes": int, "shifts": int, "seed": int, "threads": int,
                "reduce_var": str, "tolerance": float}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def report_schema() -> dict:
    text = resources.files("mahler").joinpath("run_report.schema.json").read_text()
    return json.loads(text)


# ---------------------------------------------------------------------------
# argument handling


def _quad_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    q = p.add_argument_group("quadrature")
    q.add_argument("--method", choices=("jensen", "direct", "qmc"), default=None)
    q.add_argument("--nodes", type=int, default=None, help="node budget per pass")
    q.add_argument("--shifts", type=int, default=None, help="random lattice shifts")
    q.add_argument("--seed", type=int, default=None, help=f"u64 seed (fallback: ${SEED_ENV})")
    q.add_argument("--reduce-var", default=None, metavar="NAME")
    q.add_argument("--threads", type=int, default=None)
    q.add_argument("--tolerance", type=float, default=None)
    q.add_argument("--config", default=None, metavar="FILE", help="key = value defaults")
    q.add_argument("--json", action="store_true", help="print a JSON run report")
    return p


def build_parser() -> argparse.ArgumentParser:
    parent = _quad_parent()
    ap = argparse.ArgumentParser(prog="mahler", description="Mahler measures of Laurent polynomials "
                                 "and rational functions, and measure-preserving substitutions.")
    ap.add_argument("--version", action="version", version=f"mahler {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", parents=[parent], help="Mahler measure of an expression")
    m.add_argument("expr")

    t = sub.add_parser("transform", parents=[parent], help="apply x -> f(x)/g(x)")
    t.add_argument("expr")
    _spec_args(t)
    t.add_argument("--check", action="store_true", help="also measure both sides")

    v = sub.add_parser("verify", parents=[parent], help="check an identity numerically")
    v.add_argument("key", nargs="?", help="catalog key")
    v.add_argument("--lhs", help="expression to measure")
    v.add_argument("--rhs-value", type=float, help="value of the right-hand side")
    v.add_argument("--l-value", type=float,
                   help="L-value for the conjectural family (right-hand side is 5/4 of it)")
    v.add_argument("--spec", help="VAR,G,K[,LAMBDA]: check invariance under this substitution")

    c = sub.add_parser("closed-form", parents=[parent], help="closed-form measure of R_m, S_m, T_m")
    c.add_argument("family", choices=("R", "S", "T", "r", "s", "t"))
    c.add_argument("m", type=int)
    c.add_argument("--check", action="store_true", help="compare with quadrature")

    s = sub.add_parser("suite", parents=[parent], help="randomized property suite")
    s.add_argument("name", choices=SUITES)
    s.add_argument("--count", type=int, default=None)
    s.add_argument("--l-value", type=float, default=None)

    sub.add_parser("catalog", parents=[parent], help="list the identity catalog")
    return ap


def _spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--var", default="x")
    p.add_argument("--g", required=True, help="polynomial with no roots in the open unit disc")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="1", help="exact unit, e.g. 1, -i, 3/5+4/5*i")


def _read_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", EXIT_USAGE)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string("[mahler]\n" + text)
    except configparser.Error as exc:
        raise CliError(f"bad config file: {exc}", EXIT_USAGE)
    out = {}
    for key, raw in cp["mahler"].items():
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise CliError(f"unknown config key {key!r}", EXIT_USAGE)
        try:
            out[key] = _CONFIG_KEYS[key](raw.strip().strip('"'))
        except ValueError:
            raise CliError(f"bad value for {key}: {raw!r}", EXIT_USAGE)
    return out


def _resolve(args) -> tuple[QuadConfig, float | None]:
    conf = _read_config(args.config)

    def pick(name):
        val = getattr(args, name, None)
        return conf.get(name) if val is None else val

    seed = pick("seed")
    if seed is None and os.environ.get(SEED_ENV):
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise CliError(f"{SEED_ENV} must be an integer", EXIT_USAGE)
    kw = {"seed": 0 if seed is None else seed}
    for name, field in (("method", "method"), ("nodes", "nodes"), ("shifts", "shifts"),
                        ("threads", "threads"), ("reduce_var", "reduction_variable")):
        val = pick(name)
        if val is not None:
            kw[field] = val
    try:
        cfg = QuadConfig(**kw)
    except (TypeError, ValueError) as exc:
        raise CliError(str(exc), EXIT_USAGE)
    return cfg, pick("tolerance")


def _parse_expr(src: str):
    try:
        return parse(src)
    except ExprSyntaxError as exc:
        caret = " " * exc.position + "^"
        raise CliError(f"parse error: {exc}\n  {src}\n  {caret}", EXIT_USAGE)
    except PolyError as exc:
        raise CliError(f"parse error: {exc}", EXIT_USAGE)


def _make_spec(var: str, g: str, k: int, lam: str) -> TransformSpec:
    try:
        spec = TransformSpec.make(var, _parse_expr(g), k, lam)
    except CliError:
        raise
    except (PolyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid transform: {exc}", EXIT_SPEC)
    rep = validate_spec(spec)
    if not rep.valid:
        lines = "\n".join(f"  [{code}] {msg}" for code, msg in rep.errors)
        raise CliError(f"invalid transform:\n{lines}", EXIT_SPEC)
    return spec


def _parse_spec_arg(text: str) -> TransformSpec:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (3, 4):
        raise CliError("--spec expects VAR,G,K[,LAMBDA]", EXIT_USAGE)
    try:
        k = int(parts[2])
    except ValueError:
        raise CliError(f"--spec: k must be an integer, got {parts[2]!r}", EXIT_USAGE)
    return _make_spec(parts[0], parts[1], k, parts[3] if len(parts) == 4 else "1")


# ---------------------------------------------------------------------------
# commands; each returns (report body, human lines, exit code)


def _cmp(label, lhs, rhs, stderr, tol, status="checked") -> dict:
    diff = abs(lhs - rhs)
    return {"label": label, "lhs": lhs, "rhs": rhs, "stderr": stderr, "difference": diff,
            "tolerance": tol, "passed": diff <= tol, "status": status}


def _row(label: str, value: float, stderr: float | None = None, extra: str = "") -> str:
    err = "" if stderr is None else f"+/- {stderr:.2e}"
    return f"{label:<28} {value:>20.12f}  {err:<12} {extra}".rstrip()


def cmd_measure(args, cfg, tol):
    P = _parse_expr(args.expr)
    res = measure(P, cfg)
    if not math.isfinite(res.value):
        raise CliError(f"non-finite measure {res.value}", EXIT_NUMERIC)
    lines = [f"m({to_text(P)})", _row("value", res.value, res.stderr,
                                       f"{res.method} {res.grid} nodes={res.nodes_used}")]
    lines += [f"warning: {w}" for w in res.warnings]
    body = {"inputs": {"expr": args.expr, "canonical": to_text(P)}, "results": [res.to_dict()]}
    return body, lines, EXIT_OK


def cmd_transform(args, cfg, tol):
    P = _parse_expr(args.expr)
    spec = _make_spec(args.var, args.g, args.k, args.lam)
    try:
        tr = apply_transform(P, spec)
    except InvalidSpecError as exc:
        raise CliError(str(exc), EXIT_SPEC)
    except PolyError as exc:
        raise CliError(f"invalid transform: {exc}", EXIT_SPEC)
    warn = validate_spec(spec).warnings
    lines = [
        f"f                  {tr.f}",
        f"P~                 {tr.P_tilde}",
        f"cleared numerator  {tr.cleared_numerator}",
        f"power of g         {tr.denominator_power}",
        f"correction l*m(g)  {tr.correction:.12f}",
    ]
    if not tr.cleared_denominator.is_constant() or tr.cleared_denominator != 1:
        lines.insert(3, f"cleared denominator {tr.cleared_denominator}")
    lines += [f"warning: {w}" for w in warn]
    body = {"inputs": {"expr": args.expr, "spec": spec.describe()}, "transform": tr.to_dict(),
            "results": [], "comparisons": []}
    code = EXIT_OK
    if args.check:
        rep = verify_invariance(P, spec, cfg if tol is None else cfg.with_(abs_tol=tol))
        body["results"] = [rep.m_P.to_dict(), rep.m_cleared_numerator.to_dict()]
        body["comparisons"] = [_cmp("m(P) vs m(P~)", rep.m_P.value, rep.m_P_tilde,
                                    rep.m_P.stderr + rep.stderr_tilde, rep.tolerance)]
        lines += [_row("m(P)", rep.m_P.value, rep.m_P.stderr),
                  _row("m(P~)", rep.m_P_tilde, rep.stderr_tilde),
                  f"{'PASS' if rep.passed else 'FAIL'} |diff| = {rep.difference:.3e} (tol {rep.tolerance:.3e})"]
        code = EXIT_OK if rep.passed else EXIT_VERIFY
    return body, lines, code


def cmd_verify(args, cfg, tol):
    if tol is not None:
        cfg = cfg.with_(abs_tol=tol)
    if args.key:
        try:
            rec = catalog_entry(args.key)
        except KeyError as exc:
            raise CliError(str(exc.args[0]), EXIT_USAGE)
        lhs = rec.lhs
        res = measure(lhs, cfg)
        body = {"inputs": {"key": rec.key, "expr": rec.expression, "status": rec.status},
                "results": [res.to_dict()], "comparisons": []}
        lines = [f"{rec.key} [{rec.status}]  m({rec.expression})",
                 _row("m(lhs)", res.value, res.stderr)]
        rhs = None
        if rec.status == "proven":
            rhs = named_constant(rec.rhs).value
        elif args.rhs_value is not None:
            rhs = args.rhs_value
        elif args.l_value is not None:
            rhs = named_constant(rec.rhs, args.l_value).value
        if rhs is None:
            lines.append("conjectural: no right-hand side given (use --rhs-value or --l-value)")
            return body, lines, EXIT_OK
        c = _cmp(f"m({rec.key}) vs {rec.rhs}", res.value, rhs, res.stderr,
                 max(3.0 * res.stderr, cfg.abs_tol), rec.status)
        body["inputs"]["rhs_value"] = rhs
        body["comparisons"].append(c)
        lines += [_row("rhs", rhs), f"|diff| = {c['difference']:.3e}  tol = {c['tolerance']:.3e}"]
        if rec.status == "conjectural":
            lines.append(f"conjectural: {'agrees' if c['passed'] else 'does not agree'} (report only)")
            return body, lines, EXIT_OK
        lines.append("PASS" if c["passed"] else "FAIL")
        return body, lines, EXIT_OK if c["passed"] else EXIT_VERIFY

    if not args.lhs:
        raise CliError("verify needs a catalog key or --lhs", EXIT_USAGE)
    P = _parse_expr(args.lhs)
    if args.spec:
        spec = _parse_spec_arg(args.spec)
        rep = verify_invariance(P, spec, cfg)
        c = _cmp("m(P) vs m(P~)", rep.m_P.value, rep.m_P_tilde, rep.m_P.stderr + rep.stderr_tilde,
                 rep.tolerance)
        body = {"inputs": {"lhs": args.lhs, "spec": spec.describe()},
                "results": [rep.m_P.to_dict(), rep.m_cleared_numerator.to_dict()], "comparisons": [c]}
        lines = [_row("m(P)", rep.m_P.value, rep.m_P.stderr), _row("m(P~)", rep.m_P_tilde, rep.stderr_tilde),
                 f"{'PASS' if c['passed'] else 'FAIL'} |diff| = {c['difference']:.3e} (tol {c['tolerance']:.3e})"]
        return body, lines, EXIT_OK if c["passed"] else EXIT_VERIFY
    if args.rhs_value is None:
        raise CliError("--lhs needs --rhs-value or --spec", EXIT_USAGE)
    rep = verify_identity(P, args.rhs_value, cfg)
    c = _cmp("m(lhs) vs rhs", rep.value, rep.rhs_value, rep.stderr, rep.tolerance)
    body = {"inputs": {"lhs": args.lhs, "rhs_value": args.rhs_value},
            "results": [rep.result.to_dict()], "comparisons": [c]}
    lines = [_row("m(lhs)", rep.value, rep.stderr), _row("rhs", rep.rhs_value),
             f"{'PASS' if rep.passed else 'FAIL'} |diff| = {rep.difference:.3e} (tol {rep.tolerance:.3e})"]
    return body, lines, EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_closed_form(args, cfg, tol):
    fam = args.family.upper()
    try:
        value = closed_form(fam, args.m)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE)
    body = {"inputs": {"family": fam, "m": args.m}, "closed_form": value, "results": [],
            "comparisons": []}
    lines = [_row(f"m({fam}_{args.m}) closed form", value)]
    code = EXIT_OK
    if args.check:
        res = measure(build_family(fam, args.m), cfg)
        c = _cmp("closed form vs quadrature", value, res.value, res.stderr,
                 max(3.0 * res.stderr, 1e-3 if tol is None else tol))
        body["results"].append(res.to_dict())
        body["comparisons"].append(c)
        lines += [_row("quadrature", res.value, res.stderr),
                  f"{'PASS' if c['passed'] else 'FAIL'} |diff| = {c['difference']:.3e} (tol {c['tolerance']:.3e})"]
        code = EXIT_OK if c["passed"] else EXIT_VERIFY
    return body, lines, code


def cmd_suite(args, cfg, tol):
    if tol is not None:
        cfg = cfg.with_(abs_tol=tol)
    if args.count is not None and args.count < 1:
        raise CliError("--count must be positive", EXIT_USAGE)
    reports = run_suite(args.name, args.count, int(cfg.seed), cfg, args.l_value)
    lines = []
    for r in reports:
        lines.append(f"{r.name:<14} count={r.count:<6} violations={r.violations:<4} "
                     f"{'PASS' if r.passed else 'FAIL'}")
        for key, val in r.stats.items():
            if key == "rows":
                for row in val:
                    diff = row.get("difference")
                    tail = "" if diff is None else f"|diff| = {diff:.2e}"
                    lines.append(f"  {row['key']:<11} {row['status']:<12} {row['value']:.12f} "
                                 f"+/- {row['stderr']:.1e} {tail}".rstrip())
            else:
                lines.append(f"  {key} = {val}")
    body = {"inputs": {"suite": args.name, "count": args.count}, "suites": [r.to_dict() for r in reports],
            "results": []}
    ok = all(r.passed for r in reports)
    return body, lines, EXIT_OK if ok else EXIT_VERIFY


def cmd_catalog(args, cfg, tol):
    rows = []
    lines = [f"{'key':<11} {'status':<12} {'rhs':<20} expression"]
    for rec in identity_catalog():
        d = rec.to_dict()
        if rec.status == "proven":
            d["rhs_value"] = named_constant(rec.rhs).value
        rows.append(d)
        rhs = f"{d['rhs_value']:.12f}" if "rhs_value" in d else rec.rhs
        lines.append(f"{rec.key:<11} {rec.status:<12} {rhs:<20} {rec.expression}")
    return {"inputs": {}, "catalog": rows, "constants": list(CATALOG_KEYS), "results": []}, lines, EXIT_OK


COMMANDS = {"measure": cmd_measure, "transform": cmd_transform, "verify": cmd_verify,
            "closed-form": cmd_closed_form, "suite": cmd_suite, "catalog": cmd_catalog}


def run(argv: Sequence[str] | None = None) -> tuple[int, dict, list[str]]:
    """Run one command; returns (exit code, JSON report, human lines)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    report = {"command": args.command, "argv": argv, "version": __version__}
    try:
        cfg, tol = _resolve(args)
        report["seed"] = int(cfg.seed)
        report["config"] = {"method": cfg.method, "nodes": cfg.nodes, "shifts": cfg.shifts,
                            "reduction_variable": cfg.reduction_variable, "threads": cfg.threads,
                            "tolerance": tol}
        body, lines, code = COMMANDS[args.command](args, cfg, tol)
        report.update(body)
    except CliError as exc:
        code, lines = exc.code, [f"error: {exc}"]
        report["error"] = str(exc)
    except (MeasureError, RootFindingError, PoleError, FloatingPointError, OverflowError) as exc:
        code, lines = EXIT_NUMERIC, [f"numeric failure: {exc}"]
        report["error"] = str(exc)
    report.setdefault("seed", None)
    report.setdefault("results", [])
    report["exit_code"] = code
    report["passed"] = code == EXIT_OK
    report["wall_time"] = time.perf_counter() - t0
    return code, report, lines


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False, default=str)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, report, lines = run(argv)
    if build_parser().parse_args(argv).json:
        print(dumps(report))
    else:
        stream = sys.stderr if code in (EXIT_USAGE, EXIT_NUMERIC, EXIT_SPEC) and "error" in report else sys.stdout
        print("\n".join(lines), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
