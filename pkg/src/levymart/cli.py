"""Command-line entry point: one subcommand per capability, JSON on stdout.

Exit codes: 0 success, 2 invalid input, 3 identity/check failure or a
confirmed formula discrepancy, 4 inconclusive statistical check.  Standard
output always carries exactly one JSON document; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .cumulants import (
    CumulantSpec,
    HankelVerdict,
    KolmogorovMeasure,
    as_spec,
    load_config,
    validate_cumulants,
)
from .discrepancies import build_report
from .errors import LevyMartError, RejectedSpecError
from .martingales import (
    check_martingale_identity,
    check_mean_zero,
    cross_moment,
    cross_moment_oracle,
    martingale_family,
)
from .moments import check_convolution, check_time_derivative, moments, table_json, yablonski_check
from .orthogonal import connection_coeffs, orthogonality_witness
from .ratpoly import format_rational, parse_rational
from .reversed import (
    classify_combination,
    cumulant_closure,
    ode_series,
    reversed_feasibility,
    tangent_numbers,
    validate_closed_form,
)
from .simulator import (
    DEFAULT_THRESHOLD,
    empirical_moment_check,
    harness_mc_check,
    martingale_mc_check,
    reversed_mc_check,
    simulate_paths,
)

EXIT_OK, EXIT_INVALID, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 2, 3, 4
MEASURE_ORDER = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep stdout JSON-only
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(doc, code: int) -> int:
    sys.stdout.write(json.dumps(doc, indent=2, default=str) + "\n")
    return code


def _spec(args, order: Optional[int] = None) -> CumulantSpec:
    obj = load_config(args.config)
    if isinstance(obj, KolmogorovMeasure):
        return as_spec(obj, order or MEASURE_ORDER)
    return obj if order is None else obj.truncated(min(order, obj.order))


def _order(args, spec: CumulantSpec) -> int:
    return spec.order if args.order is None else args.order


def cmd_moments(args) -> int:
    spec = _spec(args)
    return _emit(table_json(moments(spec, _order(args, spec))), EXIT_OK)


def cmd_martingale(args) -> int:
    spec = _spec(args)
    return _emit(martingale_family(spec, _order(args, spec)).to_json(), EXIT_OK)


def cmd_cross(args) -> int:
    spec = _spec(args)
    if args.n is not None and args.k is not None:
        pairs = [(args.n, args.k)]
    else:
        top = args.max_degree or spec.order // 2
        pairs = [(n, k) for n in range(1, top + 1) for k in range(1, top + 1) if n + k <= spec.order]
    records, ok = [], True
    for n, k in pairs:
        cm = cross_moment(spec, n, k)
        rec = cm.to_json()
        rec["matches_oracle"] = cm.poly == cross_moment_oracle(spec, n, k)
        ok = ok and rec["matches_oracle"]
        records.append(rec)
    doc = records[0] if len(records) == 1 else records
    return _emit(doc, EXIT_OK if ok else EXIT_FAIL)


def cmd_orthogonal(args) -> int:
    spec = _spec(args)
    nmax = args.max_degree if args.max_degree is not None else spec.order // 2
    cc = connection_coeffs(spec, args.t, nmax)
    doc = cc.to_json()
    if spec.order >= nmax + 1:
        doc["witness"] = orthogonality_witness(spec, min(nmax, spec.order - 1)).to_json()
    return _emit(doc, EXIT_OK if cc.passed else EXIT_FAIL)


def cmd_analyze_reversed(args) -> int:
    spec = _spec(args)
    return _emit(reversed_feasibility(spec, args.degree).to_json(), EXIT_OK)


def _c234(spec: CumulantSpec):
    if spec.order < 4:
        raise RejectedSpecError("needs c_1..c_4")
    return spec.c(2), spec.c(3), spec.c(4)


def cmd_classify(args) -> int:
    spec = _spec(args)
    c2, c3, c4 = _c234(spec)
    case = classify_combination(c2, c3, c4, spec.c(1))
    doc = case.to_json()
    code = EXIT_OK
    if args.validate:
        val = validate_closed_form(case)
        doc["closed_form_validation"] = val.to_json()
        if val.discrepancy:
            code = EXIT_FAIL
    return _emit(doc, code)


def cmd_closure(args) -> int:
    spec = _spec(args)
    c2, c3, c4 = _c234(spec)
    N = args.order or 12
    a = cumulant_closure(c2, c3, c4, N, c1=spec.c(1))
    b = ode_series(c2, c3, c4, N, c1=spec.c(1))
    agree = a.values == b.values
    doc = {"cumulants": [format_rational(v) for v in a.values], "ode_series_agrees": agree}
    return _emit(doc, EXIT_OK if agree else EXIT_FAIL)


def cmd_tangent(args) -> int:
    return _emit(tangent_numbers(args.count).to_json(), EXIT_OK)


def _measure(args) -> KolmogorovMeasure:
    obj = load_config(args.config)
    if isinstance(obj, KolmogorovMeasure):
        return obj
    diag = validate_cumulants(obj)
    if diag.hankel_verdict is HankelVerdict.INVALID:
        raise RejectedSpecError("cumulants do not come from any measure: " + "; ".join(diag.notes))
    raise RejectedSpecError("simulation needs the measure form of the config (c1, sigma2, atoms)")


def cmd_simulate(args) -> int:
    m = _measure(args)
    times = [float(parse_rational(x.strip())) for x in args.times.split(",") if x.strip()]
    needed = {"moments": 1, "martingale": 2, "reversed": 2, "harness": 3}[args.check]
    if len(times) < needed:
        raise UsageError(f"--check {args.check} needs at least {needed} times")
    e = simulate_paths(m, times, args.paths, args.seed, workers=args.workers)
    kw = dict(threshold=args.z_threshold, inject_fault=args.inject_fault)
    n = args.n or 2
    if args.check == "moments":
        rep = empirical_moment_check(e, e.spec(max(n, 4)), n, times[0], **kw)
    elif args.check == "martingale":
        rep = martingale_mc_check(e, e.spec(max(n, 4)), n, times[0], times[1], bins=args.bins, **kw)
    elif args.check == "reversed":
        rep = reversed_mc_check(e, times[0], times[1], bins=args.bins, **kw)
    else:
        rep = harness_mc_check(e, times[0], times[1], times[2], bins=args.bins, **kw)
    doc = rep.to_json()
    doc.update(paths=args.paths, seed=args.seed, times=times)
    code = {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[rep.status]
    return _emit(doc, code)


def cmd_check_identities(args) -> int:
    spec = _spec(args)
    N = _order(args, spec)
    table = moments(spec, N)
    reports = [
        check_convolution(spec, N, table),
        check_time_derivative(table),
        check_mean_zero(spec, N),
        check_martingale_identity(spec, N),
        yablonski_check(spec, N, partners=[spec]),
    ]
    ok = all(r.passed for r in reports)
    return _emit({"pass": ok, "order": N, "identities": [r.to_json() for r in reports]}, EXIT_OK if ok else EXIT_FAIL)


def cmd_discrepancies(args) -> int:
    report = build_report()
    if args.output:
        Path(args.output).write_text(json.dumps(report, indent=2, default=str) + "\n")
    return _emit(report, EXIT_FAIL if any(report["summary"].values()) else EXIT_OK)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="levymart", description="Exact polynomial-martingale toolkit for Levy processes.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def with_config(name: str, help_: str, required: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=required, help="JSON config: cumulants or measure form")
        return sp

    sp = with_config("moments", "moment polynomials m_n(t)")
    sp.add_argument("--order", type=int)
    sp.set_defaults(func=cmd_moments)

    sp = with_config("martingale", "martingale polynomials M_n(x, t)")
    sp.add_argument("--order", type=int)
    sp.set_defaults(func=cmd_martingale)

    sp = with_config("cross", "cross moments E[M_n M_k](t)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--max-degree", type=int)
    sp.set_defaults(func=cmd_cross)

    sp = with_config("orthogonal", "orthogonal basis and connection coefficients at a fixed time")
    sp.add_argument("--t", required=True, help="rational time p/q")
    sp.add_argument("--max-degree", type=int)
    sp.set_defaults(func=cmd_orthogonal)

    sp = with_config("analyze-reversed", "can mu(t) M_k be a reversed martingale")
    sp.add_argument("--degree", type=int, required=True)
    sp.set_defaults(func=cmd_analyze_reversed)

    sp = with_config("classify", "classify (c2, c3, c4) and validate the closed form")
    sp.add_argument("--no-validate", dest="validate", action="store_false")
    sp.set_defaults(func=cmd_classify)

    sp = with_config("closure", "cumulants forced by (c2, c3, c4)")
    sp.add_argument("--order", type=int)
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("tangent", help="tangent numbers")
    sp.add_argument("--count", type=int, required=True)
    sp.set_defaults(func=cmd_tangent)

    sp = with_config("simulate", "Monte Carlo check on simulated paths")
    sp.add_argument("--paths", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=20240601)
    sp.add_argument("--times", required=True, help="comma-separated increasing times")
    sp.add_argument("--check", required=True, choices=["moments", "martingale", "reversed", "harness"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--bins", type=int, default=20)
    sp.add_argument("--z-threshold", type=float, default=DEFAULT_THRESHOLD)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--inject-fault", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = with_config("check-identities", "exact identity suite")
    sp.add_argument("--order", type=int)
    sp.set_defaults(func=cmd_check_identities)

    sp = sub.add_parser("discrepancies", help="arbitration report for displayed formulas")
    sp.add_argument("--output", help="also write the report to this path")
    sp.set_defaults(func=cmd_discrepancies)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _emit({"error": str(exc), "kind": "usage"}, EXIT_INVALID)
    except (LevyMartError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _emit({"error": str(exc), "kind": type(exc).__name__}, EXIT_INVALID)


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
