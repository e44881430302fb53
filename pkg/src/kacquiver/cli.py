"""Command-line driver.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import engine, oracle, peterson
from .errors import BudgetExceeded, InputError, KacError
from .quiver import Quiver, dim_vectors_up_to, load_quiver
from .series import format_alpha

log = logging.getLogger("kacquiver")

COMMANDS = ("criterion", "series", "mult", "verify", "oracle")
SERIES = ("r", "m", "a", "i", "r0")
FORMATS = ("json", "csv", "text")


@dataclass
class RunConfig:
    quiver_path: str
    bound: tuple[int, ...]
    command: str
    what: str = "r"
    output: str = "text"
    q_list: tuple[int, ...] = (2, 3)
    budget: int = oracle.DEFAULT_BUDGET
    sweep: bool = False
    nonzero: bool = False


@dataclass
class Report:
    data: dict
    ok: bool
    header: tuple[str, ...] = ()
    rows: tuple[tuple, ...] = ()
    text: str = ""


def parse_int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers, got {text!r}") from None
    if not values:
        raise InputError(f"{what} is empty")
    return values


def _check_bound(quiver: Quiver, bound: Sequence[int]) -> None:
    if len(bound) != quiver.n:
        raise InputError(f"bound {tuple(bound)} has {len(bound)} entries but the quiver has {quiver.n} vertices")
    if any(b < 0 for b in bound):
        raise InputError(f"bound entries must be nonnegative, got {tuple(bound)}")


def _fraction(x: Fraction) -> str:
    return str(x)


# -- commands ----------------------------------------------------------------


def cmd_criterion(quiver: Quiver, cfg: RunConfig) -> Report:
    records = engine.check_criterion(quiver, cfg.bound)
    verdict = engine.criterion_verdict(records)
    rows = tuple(
        (format_alpha(r.alpha), r.r_at_zero.numerator, r.r_at_zero.denominator, r.tits, r.ht, r.passes)
        for r in records
    )
    data = {
        "command": "criterion",
        "quiver": quiver.to_document(),
        "bound": list(cfg.bound),
        "verdict": "PASS" if verdict else "FAIL",
        "records": [
            {
                "alpha": list(r.alpha),
                "r0": _fraction(r.r_at_zero),
                "tits": r.tits,
                "ht": r.ht,
                "pass": r.passes,
            }
            for r in records
        ],
    }
    lines = [
        f"{format_alpha(r.alpha)}\tr0={r.r_at_zero}\tT={r.tits}\tht={r.ht}\t{'ok' if r.passes else 'FAIL'}"
        for r in records
        if r.r_at_zero != 0 or not r.passes
    ]
    nonzero = sum(1 for r in records if r.r_at_zero != 0)
    lines.append(f"checked {len(records)} dimension vectors, {nonzero} with r_alpha(0) != 0")
    lines.append(f"verdict: {data['verdict']}")
    return Report(
        data, verdict, ("alpha", "r0_num", "r0_den", "tits", "ht", "pass"), rows, "\n".join(lines) + "\n"
    )


def cmd_series(quiver: Quiver, cfg: RunConfig) -> Report:
    if cfg.what == "r0":
        series = engine.r_series(quiver, cfg.bound).evaluate_at_zero()
    elif cfg.what == "r":
        series = engine.r_series(quiver, cfg.bound)
    else:
        series = engine.compute_series(quiver, cfg.bound).get(cfg.what)
    terms = [(a, c) for a, c in series.items() if not (cfg.nonzero and c == 0)]
    data = {
        "command": "series",
        "what": cfg.what,
        "quiver": quiver.to_document(),
        "bound": list(cfg.bound),
        "terms": [{"alpha": list(a), "coeff": str(c)} for a, c in terms],
    }
    rows = tuple((format_alpha(a), str(c)) for a, c in terms)
    text = "".join(f"{a}\t{c}\n" for a, c in rows)
    return Report(data, True, ("alpha", "coeff"), rows, text)


def cmd_mult(quiver: Quiver, cfg: RunConfig) -> Report:
    table = peterson.peterson_multiplicities(quiver, cfg.bound)
    data = {
        "command": "mult",
        "quiver": quiver.to_document(),
        "bound": list(cfg.bound),
        "multiplicities": [{"alpha": list(a), "mult": int(m)} for a, m in table.mult.items()],
    }
    rows = tuple((format_alpha(a), int(m)) for a, m in table.mult.items())
    return Report(data, True, ("alpha", "mult"), rows, table.dump())


def cmd_verify(quiver: Quiver, cfg: RunConfig) -> Report:
    series = engine.compute_series(quiver, cfg.bound)
    table = peterson.peterson_multiplicities(quiver, cfg.bound)
    comparison = peterson.compare_with_hua(quiver, cfg.bound, a=series.a, table=table)
    denominator = peterson.denominator_check(quiver, table)
    negative = [
        a for a, c in series.a.items() if any(x < 0 for x in c.as_polynomial())
    ]
    ok = comparison.verdict and denominator.ok and all(series.checks.values())
    data = {
        "command": "verify",
        "quiver": quiver.to_document(),
        "bound": list(cfg.bound),
        "verdict": "PASS" if ok else "FAIL",
        "triple_agreement": series.checks.get("triple_agreement", False),
        "polynomiality": series.checks.get("polynomiality", False),
        "indecomposable_product": series.checks.get("indecomposable_product", False),
        "denominator_check": {
            "ok": denominator.ok,
            "alpha": list(denominator.alpha) if denominator.alpha else None,
            "detail": denominator.detail,
        },
        "a_coefficients_nonnegative": not negative,
        "comparison": [
            {
                "alpha": list(r.alpha),
                "a_at_zero": _fraction(r.a_at_zero),
                "mult": _fraction(r.multiplicity),
                "equal": r.equal,
            }
            for r in comparison.records
        ],
    }
    rows = tuple(
        (format_alpha(r.alpha), str(r.a_at_zero), str(r.multiplicity), r.equal) for r in comparison.records
    )
    lines = [f"{a}\ta(0)={x}\tmult={y}\t{'ok' if e else 'MISMATCH'}" for a, x, y, e in rows]
    lines += [
        f"triple agreement m = Pow(r, q-1) = Exp(a): {'ok' if data['triple_agreement'] else 'FAIL'}",
        f"m, a integer polynomials, i integer-valued: {'ok' if data['polynomiality'] else 'FAIL'}",
        f"denominator identity: {'ok' if denominator.ok else 'FAIL at ' + str(denominator.alpha)}",
        f"a coefficients nonnegative (observed): {'yes' if not negative else 'no'}",
        f"verdict: {data['verdict']}",
    ]
    return Report(data, ok, ("alpha", "a_at_zero", "mult", "equal"), rows, "\n".join(lines) + "\n")


def cmd_oracle(quiver: Quiver, cfg: RunConfig) -> Report:
    fields = [oracle.FiniteField(q) for q in cfg.q_list]
    m = engine.m_series(quiver, cfg.bound)
    verdicts = []
    for alpha in dim_vectors_up_to(cfg.bound):
        if not any(alpha):
            continue
        verdicts.append(
            oracle.verify_m(quiver, alpha, fields, m[alpha].as_polynomial(), cfg.budget, cfg.sweep)
        )
    ok = all(v.ok for v in verdicts)
    data = {
        "command": "oracle",
        "quiver": quiver.to_document(),
        "bound": list(cfg.bound),
        "verdict": "PASS" if ok else "FAIL",
        "records": [
            {
                "alpha": list(v.alpha),
                "q": r.q,
                "engine": r.engine,
                "burnside": r.counts,
                "match": r.match,
            }
            for v in verdicts
            for r in v.records
        ],
    }
    rows = tuple(
        (format_alpha(v.alpha), r.q, r.engine, ";".join(str(c) for c in sorted(set(r.counts.values()))), r.match)
        for v in verdicts
        for r in v.records
    )
    lines = [f"{a}\tq={q}\tm={e}\tburnside={c}\t{'ok' if ok_ else 'MISMATCH'}" for a, q, e, c, ok_ in rows]
    lines.append(f"verdict: {data['verdict']}")
    return Report(data, ok, ("alpha", "q", "engine", "burnside", "match"), rows, "\n".join(lines) + "\n")


HANDLERS = {
    "criterion": cmd_criterion,
    "series": cmd_series,
    "mult": cmd_mult,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.header)
        writer.writerows(report.rows)
        return buf.getvalue()
    return report.text


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        quiver = load_quiver(cfg.quiver_path)
        _check_bound(quiver, cfg.bound)
        report = HANDLERS[cfg.command](quiver, cfg)
    except (InputError, BudgetExceeded) as exc:
        _emit_error(exc, cfg.output, out)
        return 2
    except KacError as exc:
        _emit_error(exc, cfg.output, out)
        return 1
    out.write(render(report, cfg.output))
    return 0 if report.ok else 1


def _emit_error(exc: Exception, fmt: str, out) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    alpha = getattr(exc, "alpha", None)
    if alpha is not None:
        payload["alpha"] = list(alpha)
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        print(f"error: {payload['error']}: {payload['message']}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", required=True, metavar="PATH", help="quiver JSON document")
    common.add_argument("--bound", required=True, help='componentwise bound, e.g. "2,2,2,2"')
    common.add_argument("--format", choices=FORMATS, default="text", dest="output")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="kacquiver",
        description="Kac/Hua generating functions, Peterson multiplicities and the r(0) criterion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("criterion", parents=[common], help="check r_alpha(0) = 0 or T(alpha) = ht(alpha)")
    p = sub.add_parser("series", parents=[common], help="dump r, m, a, i or r(0)")
    p.add_argument("--what", choices=SERIES, default="r")
    p.add_argument("--nonzero", action="store_true", help="omit zero coefficients")
    sub.add_parser("mult", parents=[common], help="Peterson root multiplicities")
    sub.add_parser("verify", parents=[common], help="compare a(0) with multiplicities and run identity checks")
    p = sub.add_parser("oracle", parents=[common], help="Burnside counts over F_q against m_alpha(q)")
    p.add_argument("--q", default="2,3", help='field sizes, e.g. "2,3"')
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    p.add_argument("--sweep", action="store_true", help="try every orientation")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        bound = parse_int_list(args.bound, "--bound")
        q_list = parse_int_list(getattr(args, "q", "2,3"), "--q")
    except InputError as exc:
        _emit_error(exc, args.output, sys.stdout)
        return 2
    cfg = RunConfig(
        quiver_path=args.quiver,
        bound=bound,
        command=args.command,
        what=getattr(args, "what", "r"),
        output=args.output,
        q_list=q_list,
        budget=getattr(args, "budget", oracle.DEFAULT_BUDGET),
        sweep=getattr(args, "sweep", False),
        nonzero=getattr(args, "nonzero", False),
    )
    log.info("running %s on %s with bound %s", cfg.command, cfg.quiver_path, cfg.bound)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
