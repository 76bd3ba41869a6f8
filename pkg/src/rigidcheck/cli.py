"""Command-line entry point.

Subcommands: check, classify, xi, codim-table, cross-check, verify-strata,
sample, groebner.  Text output by default, --json for machine-readable
output (the schema ships with the package under schemas/).

Exit codes: 0 pass/success, 1 any fail verdict, 2 indeterminate
(budget exhausted or inconclusive randomized check), 3 usage or input
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .fields import FieldError
from .ffsample import (
    SampleError,
    count_rank_leq,
    estimate_bad_fraction,
)
from .ideals import Budget, BudgetExceeded, GroebnerBasis, Ideal, IdealError, groebner
from .linalg import LinalgError, rank_stratum_codim
from .poly import PolyError, PolyFormatError, poly_from_json, poly_to_json
from .regularity import (
    CheckOptions,
    FamilyParams,
    RegularityError,
    WeightedPoint,
    check_point,
    classify_point,
    local_model,
)
from .rng import DEFAULT_SEED
from .strata import StrataError, condition_codims, cross_check, xi

BUDGET_ENV = "RIGIDCHECK_BUDGET"

_INPUT_ERRORS = (
    PolyError,
    PolyFormatError,
    FieldError,
    RegularityError,
    IdealError,
    LinalgError,
    SampleError,
    StrataError,
    OSError,
    json.JSONDecodeError,
)


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    mode: str = "strict"
    budget: int | None = None
    output: str = "text"
    jobs: int = 1

    def make_budget(self) -> Budget:
        steps = self.budget
        if steps is None:
            env = os.environ.get(BUDGET_ENV)
            steps = int(env) if env else None
        return Budget(max_steps=steps) if steps else Budget()


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 3, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _config(args) -> RunConfig:
    return RunConfig(
        seed=getattr(args, "seed", DEFAULT_SEED),
        mode=getattr(args, "mode", "strict"),
        budget=getattr(args, "budget", None),
        output="json" if args.json else "text",
        jobs=getattr(args, "jobs", 1),
    )


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_point(path: str, field) -> WeightedPoint:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "coords" not in obj or "u" not in obj:
        raise PolyFormatError('point file must be {"coords": [...], "u": "..."}')
    if not isinstance(obj["coords"], list):
        raise PolyFormatError('point file field "coords" must be a list')
    return WeightedPoint.make(field, obj["coords"], obj["u"])


def _parse_params(text: str) -> FamilyParams:
    parts = text.split(",")
    if len(parts) != 3:
        raise RegularityError('--params expects "M,m,l"')
    try:
        M, m, l = (int(p) for p in parts)
    except ValueError as exc:
        raise RegularityError('--params expects three integers "M,m,l"') from exc
    return FamilyParams(M=M, m=m, l=l)


def _build_model(args):
    params = _parse_params(args.params)
    g = poly_from_json(_load_json(args.g))
    h = poly_from_json(_load_json(args.h))
    point = _load_point(args.point, g.field)
    return params, local_model(params, g, h, point)


# -- subcommand handlers ------------------------------------------------


def cmd_xi(args) -> int:
    value = xi(args.M)
    _emit(args, {"M": args.M, "xi": value}, str(value))
    return 0


def cmd_codim_table(args) -> int:
    table = condition_codims(args.M)
    if args.json:
        print(json.dumps(table.to_json(), indent=2, sort_keys=True))
        return 0
    lines = [f"codimension bounds at M = {table.M}"]
    lines.append("  off the ramification divisor (subtract M):")
    for name, v in table.off_ram.items():
        lines.append(f"    {name:<24} {v}")
    lines.append("  on the ramification divisor (subtract M-1):")
    for name, v in table.on_ram.items():
        lines.append(f"    {name:<24} {v}")
    lines.append(f"  bound A (off-ram min - M)      = {table.bound_a}")
    lines.append(f"  bound B (on-ram min - (M-1))   = {table.bound_b}")
    lines.append(f"  aggregated bound               = {table.theorem2}")
    lines.append(f"  xi(M)                          = {table.xi}")
    lines.append(f"  agreement: {'yes' if table.matches_xi else 'NO (known M=10 edge case)'}")
    print("\n".join(lines))
    return 0


def cmd_cross_check(args) -> int:
    rows = cross_check(args.m_lo, args.m_hi)
    mismatches = [r.M for r in rows if not r.equal]
    payload = {
        "lo": args.m_lo,
        "hi": args.m_hi,
        "rows": [
            {"M": r.M, "theorem2": r.theorem2, "xi": r.xi, "equal": r.equal} for r in rows
        ],
        "mismatches": mismatches,
    }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"{'M':>5} {'bound':>8} {'xi':>8}  status")
        for r in rows:
            status = "ok" if r.equal else "MISMATCH"
            print(f"{r.M:>5} {r.theorem2:>8} {r.xi:>8}  {status}")
        if mismatches:
            print(f"mismatching M: {mismatches}")
    expected = set(args.expect_mismatch or [])
    return 0 if set(mismatches) == expected else 1


def cmd_verify_strata(args) -> int:
    census = count_rank_leq(args.n, args.r, args.q, jobs=args.jobs)
    formula = rank_stratum_codim(args.n, args.r)
    match = census.count > 0 and round(census.implied_codim) == formula
    payload = census.to_json()
    payload.update({"formula_codim": formula, "match": match})
    text = (
        f"{census.description}: count={census.count} "
        f"implied_codim={census.implied_codim:.3f} formula={formula} "
        f"{'ok' if match else 'MISMATCH'}"
    )
    _emit(args, payload, text)
    return 0 if match else 1


def cmd_sample(args) -> int:
    params = {}
    for key in ("n", "r", "M", "d"):
        val = getattr(args, key if key != "M" else "big_m", None)
        if val is not None:
            params[key] = val
    cfg = _config(args)
    result = estimate_bad_fraction(
        args.condition, params, args.q, args.samples, seed=cfg.seed, jobs=cfg.jobs
    )
    text = (
        f"{result.condition} over F_{result.q}: {result.failures}/{result.samples} "
        f"failures (fraction {result.fraction:.3g}, expected ~{result.expected_fraction:.3g} "
        f"= q^-{result.expected_codim})"
    )
    _emit(args, result.to_json(), text)
    return 0


def _ideal_from_json(obj) -> Ideal:
    if not isinstance(obj, dict):
        raise PolyFormatError("ideal must be a JSON object")
    for key in ("nvars", "field", "gens"):
        if key not in obj:
            raise PolyFormatError(f"ideal object missing field {key!r}")
    if not isinstance(obj["gens"], list):
        raise PolyFormatError('"gens" must be a list of term lists')
    gens = []
    for i, terms in enumerate(obj["gens"]):
        if not isinstance(terms, list):
            raise PolyFormatError(f"gens[{i}] must be a list of terms")
        gens.append(
            poly_from_json({"nvars": obj["nvars"], "field": obj["field"], "terms": terms})
        )
    if not gens:
        field = poly_from_json({"nvars": obj["nvars"], "field": obj["field"], "terms": []}).field
        return Ideal(field, obj["nvars"], [])
    return Ideal(gens[0].field, obj["nvars"], gens)


def _groebner_to_json(gb: GroebnerBasis) -> dict:
    return {
        "nvars": gb.nvars,
        "field": gb.field.to_json(),
        "order": gb.order,
        "basis": [poly_to_json(p)["terms"] for p in gb.basis],
    }


def cmd_groebner(args) -> int:
    ideal = _ideal_from_json(_load_json(args.ideal))
    cfg = _config(args)
    gb = groebner(ideal, cfg.make_budget())
    payload = _groebner_to_json(gb)
    text = "\n".join(repr(p) for p in gb.basis) or "0"
    _emit(args, payload, text)
    return 0


def cmd_classify(args) -> int:
    _, lm = _build_model(args)
    cls = classify_point(lm)
    _emit(args, {"class": cls.value}, cls.value)
    return 0


def cmd_check(args) -> int:
    _, lm = _build_model(args)
    cfg = _config(args)
    opts = CheckOptions(
        mode=cfg.mode,
        subspace_dim=args.subspace_dim,
        trials=args.trials,
        seed=cfg.seed,
        budget=cfg.make_budget(),
        jobs=cfg.jobs,
    )
    report = check_point(lm, opts)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print(f"class: {report.point_class.value}")
        for name, verdict in report.checks.items():
            if verdict.status == "not-applicable":
                continue
            extra = f"  {verdict.witness}" if verdict.witness else ""
            print(f"  {name:<6} {verdict.status}{extra}")
        print(f"overall: {report.overall} (mode={report.mode}, seed={report.seed})")
    return report.exit_code


# -- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rigidcheck", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False, budget=False, jobs=False):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if budget:
            p.add_argument("--budget", type=int, default=None,
                           help=f"reduction-step cap (or ${BUDGET_ENV})")
        if jobs:
            p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("xi", help="evaluate the lower-bound function")
    p.add_argument("M", type=int)
    common(p)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("codim-table", help="per-condition codimension bounds")
    p.add_argument("M", type=int)
    common(p)
    p.set_defaults(func=cmd_codim_table)

    p = sub.add_parser("cross-check", help="re-derive the bound and compare with xi")
    p.add_argument("m_lo", type=int)
    p.add_argument("m_hi", type=int)
    p.add_argument("--expect-mismatch", type=int, action="append", default=None,
                   help="M values allowed (and required) to mismatch")
    common(p)
    p.set_defaults(func=cmd_cross_check)

    p = sub.add_parser("verify-strata", help="census a rank stratum and compare codimension")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    common(p, jobs=True)
    p.set_defaults(func=cmd_verify_strata)

    p = sub.add_parser("sample", help="Monte Carlo failure-fraction estimate")
    p.add_argument("--condition", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--M", dest="big_m", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    common(p, seed=True, jobs=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal (debug)")
    p.add_argument("ideal", help="JSON file with nvars, field, gens")
    common(p, budget=True)
    p.set_defaults(func=cmd_groebner)

    for name, func, r22 in (("check", cmd_check, True), ("classify", cmd_classify, False)):
        p = sub.add_parser(name, help=f"{name} a point of a double hypersurface")
        p.add_argument("--params", required=True, help='family parameters "M,m,l"')
        p.add_argument("--g", required=True, help="polynomial JSON file for g")
        p.add_argument("--h", required=True, help="polynomial JSON file for h")
        p.add_argument("--point", required=True, help='point JSON file {"coords": [...], "u": ...}')
        p.add_argument("--mode", choices=("strict", "toy"), default="strict")
        if r22:
            p.add_argument("--subspace-dim", type=int, default=None)
            p.add_argument("--trials", type=int, default=3)
            common(p, seed=True, budget=True, jobs=True)
        else:
            common(p)
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
