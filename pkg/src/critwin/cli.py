"""Command-line front end.

Every command prints one report, JSON by default or CSV with ``--format
csv``.  Exit status is 0 on success, 2 on invalid input (including window
violations, whose message names the violated condition) and 1 on internal
errors or failed ``validate`` checks.

CSV headers per command::

    eval      quantity,n,lambda,k,l,value,log_value
    counts    k,m,l,mode,value,log_value
    moments   quantity,mode,n,lambda,k,l,value,log_value,method,budget_kind,budget,additive
    tails     event,mode,n,lambda,k,l,value,log_value,statement,budget_rel,budget_abs,out_of_calibration
    simulate  target,n,lambda,k,replicas,seed,successes,estimate,ci_low,ci_high
              (with --pmf: mode,n,lambda,replicas,seed,size,count)
    compare   event,n,lambda,k,a,exact,enumeration,asymptotic,mc,ci_low,ci_high,
              ratio_mc_asymptotic,ratio_exact_asymptotic,ratio_exact_enumeration,budget_rel,budget_abs
    validate  check,passed,detail

The exact-count cache named by ``CRITWIN_CACHE`` is loaded at start-up if
the file exists; ``counts --write-cache`` saves the store back to it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import CritwinError, DomainError, WindowError
from .moments import (
    EXACT_N_MAX,
    mean_X_asymptotic,
    mean_X_exact,
    mean_X_upper,
    mean_Y,
    mean_Z,
    second_moment_Y_Z,
)
from .tails import (
    l1_tail_upper_explore,
    prob_Cv_point,
    prob_Cv_point_edges,
    prob_Cv_tail,
    prob_L1_point,
    prob_L1_tail,
)
from .window import BudgetKind, ComponentQuery, CriticalWindow, error_term, rate_F, rate_G
from .wright import (
    count_connected_asymptotic,
    count_connected_exact,
    count_connected_upper,
    default_store,
    wright_d,
    wright_log_gamma,
)
from . import sim

CACHE_ENV = "CRITWIN_CACHE"


class ValidationError(CritwinError, ValueError):
    """Bad or missing command-line input."""


# ---------------------------------------------------------------------------
# serialisation


# report fields that hold computed values; exact integers there become strings
EXACT_FIELDS = frozenset({"value", "exact", "enumeration", "ratio_exact_enumeration"})


def fmt(x, exact_as_text: bool = True):
    """Exact numbers as decimal strings, floats as shortest round-trip text."""
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x) if exact_as_text else x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    return x


def _csv_cell(x) -> str:
    x = fmt(x)
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(x) if isinstance(x, float) else str(x)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _fraction_log(x: Fraction) -> float:
    if x <= 0:
        return -math.inf
    return math.log(x.numerator) - math.log(x.denominator)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    p.add_argument("--output", dest="output_path", type=Path, help="write the report here instead of stdout")


def _add_window(p: argparse.ArgumentParser, need_k: bool = True) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    if need_k:
        p.add_argument("--k", type=int, required=True)


def _add_sim(p: argparse.ArgumentParser) -> None:
    p.add_argument("--replicas", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores); never changes results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critwin",
        description="Component sizes of G(n, p) with p = 1/n + lambda n^(-4/3).",
        epilog="CSV headers" + __doc__.split("CSV headers", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a rate function, error scale or Wright coefficient")
    p.add_argument(
        "--quantity",
        required=True,
        choices=("p", "N", "a", "G", "Gprime", "F", "M1", "A1", "EX", "PM", "gamma", "d"),
    )
    p.add_argument("--n", type=int)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--x", type=float, help="argument of G, Gprime, F (default k/n^(2/3))")
    _add_common(p)

    p = sub.add_parser("counts", help="number of connected labelled graphs C(k, m)")
    p.add_argument("--k", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--l", type=int, help="excess, m = k + l")
    p.add_argument("--mode", choices=("exact", "asymptotic", "upper"), default="exact")
    p.add_argument("--c", type=float, default=1.0, help="constant of the upper envelope")
    p.add_argument("--write-cache", action="store_true", help=f"save the exact-count store to ${CACHE_ENV}")
    _add_common(p)

    p = sub.add_parser("moments", help="first and second moments of component counts")
    _add_window(p)
    p.add_argument("--quantity", choices=("X", "Y", "Z", "Y2", "Z2"), required=True)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--mode", choices=("exact", "asymptotic", "upper"), default="asymptotic")
    p.add_argument("--c", type=float, default=1.0)
    _add_common(p)

    p = sub.add_parser("tails", help="probability estimates for L1 and |C(v)|")
    _add_window(p)
    p.add_argument(
        "--event",
        choices=("L1_EQ", "L1_GE", "L1_GT_BOUND", "CV_EQ", "CV_GE", "CV_EDGES"),
        required=True,
    )
    p.add_argument("--l", type=int, default=0, help="excess, for CV_EDGES")
    p.add_argument("--mode", choices=("exact", "asymptotic"), default="exact", help="for CV_EDGES")
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimates")
    _add_window(p, need_k=False)
    p.add_argument("--k", type=int)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--target", choices=[t.value for t in sim.Target])
    g.add_argument("--pmf", choices=("L1", "CV"))
    _add_sim(p)
    _add_common(p)

    p = sub.add_parser("compare", help="exact, asymptotic and Monte Carlo values over a grid")
    _add_window(p, need_k=False)
    p.add_argument("--event", choices=("L1_GE", "L1_EQ", "CV_GE", "CV_EQ"), required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--a", type=_float_list, help="comma-separated scaled sizes; k = round(a n^(2/3))")
    g.add_argument("--ks", type=_int_list, help="comma-separated sizes")
    _add_sim(p)
    _add_common(p)

    p = sub.add_parser("validate", help="run the built-in exact self-checks")
    _add_common(p)
    return parser


def _float_list(s: str) -> list[float]:
    return [float(t) for t in s.split(",") if t.strip()]


def _int_list(s: str) -> list[int]:
    return [int(t) for t in s.split(",") if t.strip()]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + ("lambda" if m == "lam" else m) for m in missing)
        raise ValidationError(f"{args.command} requires {flags}")


def _window(args) -> CriticalWindow:
    return CriticalWindow(args.n, args.lam)


# ---------------------------------------------------------------------------
# commands; each returns (json_body, csv_header, csv_rows)


def cmd_eval(args):
    q = args.quantity
    inputs = {"quantity": q, "n": args.n, "lambda": args.lam, "k": args.k, "l": args.l}
    exact = None
    if q in ("gamma", "d"):
        if q == "gamma":
            log_v = wright_log_gamma(args.l)
            value = math.exp(log_v)
        else:
            if args.l < 1:
                raise DomainError("d_l is defined for l >= 1")
            exact = wright_d(args.l)[-1]
            value, log_v = float(exact), _fraction_log(exact)
    elif q in ("M1", "A1", "EX", "PM"):
        _require(args, "n")
        if q != "A1":
            _require(args, "k")
        value = error_term(BudgetKind(q), args.k, args.n, args.l, args.lam).value
        log_v = _log(value)
    else:
        _require(args, "n")
        w = _window(args)
        if q == "p":
            value = w.p
            exact = w.p_exact if (w.lam == 0 or w.p_exact == Fraction(w.p)) else None
        elif q == "N":
            exact = w.N
            value = float(exact)
        else:
            if args.x is not None:
                x = args.x
            else:
                _require(args, "k")
                x = w.scaled(args.k)
            inputs["x"] = x
            if q == "a":
                value = x
            elif q == "F":
                value = rate_F(float(w.lam), x)
            else:
                g, gp = rate_G(float(w.lam), x)
                value = g if q == "G" else gp
        log_v = _log(value)
    body = {"inputs": inputs, "value": exact if exact is not None else value, "log_value": log_v}
    row = [q, args.n, args.lam, args.k, args.l, body["value"], log_v]
    return body, "quantity,n,lambda,k,l,value,log_value", [row]


def cmd_counts(args):
    k = args.k
    m = args.m if args.m is not None else k + args.l
    l = m - k  # noqa: E741
    inputs = {"k": k, "m": m, "l": l, "mode": args.mode}
    if args.mode == "exact":
        c = count_connected_exact(k, m)
        value, log_v, method = c, _log(c), "EXACT"
        if args.write_cache:
            path = os.environ.get(CACHE_ENV)
            if not path:
                raise ValidationError(f"--write-cache needs ${CACHE_ENV} to be set")
            default_store().save(path)
    elif args.mode == "asymptotic":
        if l < -1:
            raise DomainError(f"excess must be >= -1, got {l}")
        log_v = count_connected_asymptotic(k, l)
        value, method = math.exp(log_v) if log_v < 709 else math.inf, "ASYMPTOTIC"
    else:
        log_v = count_connected_upper(k, l, args.c)
        value, method = math.exp(log_v) if log_v < 709 else math.inf, "UPPER_BOUND"
        inputs["c"] = args.c
    body = {"inputs": inputs, "value": value, "log_value": log_v, "method": method}
    return body, "k,m,l,mode,value,log_value", [[k, m, l, args.mode, value, log_v]]


def cmd_moments(args):
    w = _window(args)
    k, l, q, mode = args.k, args.l, args.quantity, args.mode  # noqa: E741
    if q == "X":
        cq = ComponentQuery(k, l)
        if mode == "exact":
            est = mean_X_exact(w, cq)
        elif mode == "asymptotic":
            est = mean_X_asymptotic(w, cq)
        else:
            est = mean_X_upper(w, cq, args.c)
    else:
        if mode == "upper":
            raise ValidationError(f"--mode upper applies to X only, not {q}")
        m = "EXACT_SMALL" if mode == "exact" else "ASYMPTOTIC"
        if q == "Y":
            est = mean_Y(w, k, m)
        elif q == "Z":
            est = mean_Z(w, k, m)
        else:
            est = second_moment_Y_Z(w, k, q[0], m)
    value = est.exact if est.exact is not None else est.value
    budget = est.budget.value if est.budget else None
    kind = est.budget.kind.value if est.budget else None
    inputs = {"quantity": q, "mode": mode, "n": w.n, "lambda": args.lam, "k": k, "l": l if q == "X" else None}
    body = {
        "inputs": inputs,
        "value": value,
        "log_value": est.log_value,
        "method": est.method.value,
        "budgets": {"kind": kind, "relative": budget, "additive": est.additive},
    }
    row = [q, mode, w.n, args.lam, k, inputs["l"], value, est.log_value, est.method.value, kind, budget, est.additive]
    return body, "quantity,mode,n,lambda,k,l,value,log_value,method,budget_kind,budget,additive", [row]


def _tail_estimate(w: CriticalWindow, event: str, k: int, l: int = 0, mode: str = "exact"):  # noqa: E741
    if event == "L1_EQ":
        return prob_L1_point(w, k)
    if event == "L1_GE":
        return prob_L1_tail(w, k)
    if event == "CV_EQ":
        return prob_Cv_point(w, k)
    if event == "CV_GE":
        return prob_Cv_tail(w, k)
    if event == "CV_EDGES":
        return prob_Cv_point_edges(w, ComponentQuery(k, l), mode.upper())
    raise ValidationError(f"unknown event {event}")


def cmd_tails(args):
    w = _window(args)
    inputs = {"event": args.event, "n": w.n, "lambda": args.lam, "k": args.k}
    if args.event == "CV_EDGES":
        inputs.update(l=args.l, mode=args.mode)
    if args.event == "L1_GT_BOUND":
        value = l1_tail_upper_explore(w, args.k)
        body = {
            "inputs": inputs,
            "value": value,
            "estimate": value,
            "log_value": _log(value),
            "statement": "EXPLORATION_BOUND",
            "budgets": {"relative": 0.0, "absolute": 0.0},
            "out_of_calibration": False,
        }
    else:
        est = _tail_estimate(w, args.event, args.k, args.l, args.mode)
        value = est.exact if est.exact is not None else est.prob
        body = {
            "inputs": inputs,
            "value": value,
            "estimate": est.prob,
            "log_value": est.log_prob,
            "statement": est.statement.value,
            "budgets": {"relative": est.budget_rel, "absolute": est.budget_abs},
            "out_of_calibration": est.out_of_calibration,
        }
    row = [
        args.event,
        inputs.get("mode"),
        w.n,
        args.lam,
        args.k,
        inputs.get("l"),
        body["value"],
        body["log_value"],
        body["statement"],
        body["budgets"]["relative"],
        body["budgets"]["absolute"],
        body["out_of_calibration"],
    ]
    header = "event,mode,n,lambda,k,l,value,log_value,statement,budget_rel,budget_abs,out_of_calibration"
    return body, header, [row]


def _summary_json(s: sim.SimulationSummary) -> dict:
    out = {
        "replicas": s.replicas,
        "seed": s.seed,
        "successes": s.successes,
        "estimate": s.estimate,
        "ci_low": s.ci_low,
        "ci_high": s.ci_high,
    }
    if s.histogram is not None:
        out["histogram"] = {str(k): v for k, v in s.histogram.items()}
    return out


def cmd_simulate(args):
    w = _window(args)
    inputs = {
        "n": w.n,
        "lambda": args.lam,
        "replicas": args.replicas,
        "seed": args.seed,
        "backend": sim.BACKEND,
    }
    if args.pmf:
        s = sim.empirical_pmf(w, args.pmf, args.replicas, args.seed, args.threads)
        inputs["mode"] = args.pmf
        rows = [[args.pmf, w.n, args.lam, args.replicas, args.seed, size, c] for size, c in s.histogram.items()]
        header = "mode,n,lambda,replicas,seed,size,count"
    else:
        _require(args, "k")
        s = sim.estimate_tail(w, args.k, args.target, args.replicas, args.seed, args.threads)
        inputs.update(target=args.target, k=args.k)
        rows = [[args.target, w.n, args.lam, args.k, args.replicas, args.seed, s.successes, s.estimate, s.ci_low, s.ci_high]]
        header = "target,n,lambda,k,replicas,seed,successes,estimate,ci_low,ci_high"
    body = {"inputs": inputs, "value": s.estimate, "log_value": _log(s.estimate), "method": "MONTE_CARLO"}
    body.update(_summary_json(s))
    return body, header, rows


def _exact_identity(w: CriticalWindow, event: str, k: int) -> Fraction | None:
    """Exact-identity value of a ``CV`` event for small ``n``; None otherwise."""
    if w.n > EXACT_N_MAX or not event.startswith("CV") or k > w.n:
        return None
    sizes = [k] if event == "CV_EQ" else range(k, w.n + 1)
    return sum((Fraction(j, w.n) * mean_Y(w, j, "EXACT_SMALL").exact for j in sizes), Fraction(0))


def _enumerated(w: CriticalWindow, event: str, k: int) -> Fraction | None:
    from .oracle import MAX_N, oracle

    if w.n > MAX_N:
        return None
    o = oracle(w.n)
    p = w.p_exact
    sizes = [k] if event.endswith("EQ") else range(k, w.n + 1)
    if event.startswith("L1"):
        return sum((o.prob_L1(j, p) for j in sizes), Fraction(0))
    return sum((o.prob_cv_size(j, p) for j in sizes), Fraction(0))


def _ratio(x, y):
    if x is None or y is None:
        return None
    x, y = float(x), float(y)
    return x / y if y != 0 else None


def cmd_compare(args):
    w = _window(args)
    n23 = w.n ** (2.0 / 3.0)
    ks = args.ks if args.ks is not None else [round(a * n23) for a in (args.a or [])]
    if not ks:
        raise ValidationError("compare requires a non-empty grid (--a or --ks)")
    if any(k < 1 for k in ks):
        raise ValidationError("grid sizes must be >= 1")
    target = sim.Target(args.event)
    rows, body_rows = [], []
    for k in ks:
        exact = _exact_identity(w, args.event, k)
        enum = _enumerated(w, args.event, k)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                est = _tail_estimate(w, args.event, k)
            asym, rel, add = est.prob, est.budget_rel, est.budget_abs
        except WindowError:
            asym = rel = add = None
        s = sim.estimate_tail(w, k, target, args.replicas, args.seed, args.threads)
        row = {
            "event": args.event,
            "n": w.n,
            "lambda": args.lam,
            "k": k,
            "a": w.scaled(k),
            "exact": exact,
            "enumeration": enum,
            "asymptotic": asym,
            "mc": s.estimate,
            "ci_low": s.ci_low,
            "ci_high": s.ci_high,
            "ratio_mc_asymptotic": _ratio(s.estimate, asym),
            "ratio_exact_asymptotic": _ratio(exact, asym),
            "ratio_exact_enumeration": exact / enum if exact is not None and enum else None,
            "budget_rel": rel,
            "budget_abs": add,
        }
        body_rows.append(row)
        rows.append(list(row.values()))
    header = ",".join(body_rows[0].keys())
    inputs = {
        "event": args.event,
        "n": w.n,
        "lambda": args.lam,
        "ks": ks,
        "replicas": args.replicas,
        "seed": args.seed,
        "backend": sim.BACKEND,
    }
    body = {"inputs": inputs, "rows": body_rows, "method": "COMPARE"}
    return body, header, rows


def _validation_checks():
    """Quick exact checks; each yields (name, passed, detail)."""
    from .oracle import oracle

    yield "cayley_row", all(count_connected_exact(k, k - 1) == k ** (k - 2) for k in range(1, 31)), "k <= 30"
    d = wright_d(3)
    yield "wright_d_1_3", d == [Fraction(5, 36), Fraction(5, 36), Fraction(1105, 7776)], "d_1, d_2, d_3"
    yield "gamma_1", abs(math.exp(wright_log_gamma(1)) - 5 / 24) <= 1e-12, "gamma_1 = 5/24"
    for n in range(2, 7):
        o = oracle(n)
        ok_counts = all(count_connected_exact(n, m) == o.connected_count(m) for m in range(o.M + 1))
        yield f"counts_enumeration_n{n}", ok_counts, f"C({n}, m) for all m"
        for lam in (-1, 0, 1):
            try:
                w = CriticalWindow(n, lam)
            except DomainError:
                continue
            p = w.p_exact
            total = Fraction(0)
            ok = True
            for (_, kk, ll) in o.keys("CV"):
                v = prob_Cv_point_edges(w, ComponentQuery(kk, ll)).exact
                ok &= v == o.prob_cv(kk, ll, p)
                total += v
            yield f"vertex_component_n{n}_lambda{lam}", ok and total == 1, "joint pmf equals enumeration, sums to 1"
    w = CriticalWindow(3, 0)
    yield "spot_X_2_1", mean_X_exact(w, ComponentQuery(2, -1)).exact == Fraction(4, 9), "E[X(2,1)] = 4/9 at n=3"


def cmd_validate(args):
    results = list(_validation_checks())
    body = {
        "inputs": {},
        "rows": [{"check": c, "passed": ok, "detail": d} for c, ok, d in results],
        "value": sum(ok for _, ok, _ in results),
        "method": "VALIDATE",
    }
    body["passed"] = all(ok for _, ok, _ in results)
    return body, "check,passed,detail", [list(r) for r in results]


COMMANDS = {
    "eval": cmd_eval,
    "counts": cmd_counts,
    "moments": cmd_moments,
    "tails": cmd_tails,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "validate": cmd_validate,
}


def _jsonable(x, key: str | None = None):
    if isinstance(x, dict):
        return {k: _jsonable(v, k) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v, key) for v in x]
    return fmt(x, exact_as_text=key in EXACT_FIELDS)


def render(body: dict, header: str, rows: list, output_format: str) -> str:
    if output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header.split(","))
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buf.getvalue()
    return json.dumps(_jsonable(body), allow_nan=False) + "\n"


def _load_cache() -> None:
    path = os.environ.get(CACHE_ENV)
    if path and Path(path).is_file():
        try:
            default_store().load(path)
        except (OSError, ValueError) as exc:
            raise ValidationError(f"cannot read ${CACHE_ENV} file {path}: {exc}") from exc


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        _load_cache()
        body, header, rows = COMMANDS[args.command](args)
    except (WindowError, DomainError, ValidationError) as exc:
        print(f"critwin {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"critwin {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1
    body = {"command": args.command, **body, "runtime_ms": (time.perf_counter() - start) * 1e3}
    text = render(body, header, rows, args.output_format)
    if args.output_path:
        with open(args.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "validate" and not body["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
