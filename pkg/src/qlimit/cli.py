"""Command-line interface.

Every JSON report has the shape ``{"header": {...}, "body": {...}}``.  The
header records the full configuration, so ``qlimit replay REPORT`` re-runs
the command and reproduces the body exactly (only ``header.timestamp``
differs).

Exit codes: 0 success, 2 cap / budget exhaustion or bad input, 1 invariant
violation.
"""

import argparse
import datetime
import json
import sys
from fractions import Fraction

from . import __version__, boolfn, lasvegas, limits, measures, reductions
from .errors import BUDGET_ERRORS, ParseError, QLimitError, UnknownName

EXIT_OK, EXIT_INVARIANT, EXIT_BUDGET = 0, 1, 2


class InvariantViolation(Exception):
    pass


class BudgetExhausted(Exception):
    pass


# --- inputs -----------------------------------------------------------------


def load_function(spec):
    """``catalog:NAME[:SIZE]`` or a path to a function file (JSON or text)."""
    if spec.startswith("catalog:"):
        parts = spec.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad catalog reference {spec!r}")
        size = int(parts[2]) if len(parts) == 3 else None
        return boolfn.catalog(parts[1], size)
    return boolfn.load(spec)


def parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational 'p/q', got {text!r}") from None


def _compose_all(specs, k=1, cap=None):
    fs = [load_function(s) for s in specs]
    h = fs[-1]
    for g in reversed(fs[:-1]):
        h = boolfn.compose(g, h, cap)
    if k > 1:
        h = boolfn.power(h, k, cap)
    return h


# --- commands ---------------------------------------------------------------
# each returns (body, text, csv); csv may be None


def cmd_measure(cfg):
    f = _compose_all(cfg["fn"], cap=cfg["cap"])
    names = list(cfg["measure"] or [])
    if cfg["all"]:
        names = [m for m in measures.STANDARD if m != "R0" or f.n <= 3] + \
            [m for m in names if m not in measures.STANDARD]
    if not names:
        raise ValueError("give --measure or --all")
    eps = Fraction(cfg["epsilon"])
    reps = [measures.report(m, f, eps) for m in names]
    body = {"function": cfg["fn"], "reports": [r.to_json() for r in reps]}
    text = ", ".join(f"{r.measure}={_fmt(r.value)}" for r in reps)
    csv_text = "measure,value\n" + "".join(f"{r.measure},{measures.rational_str(r.value)}\n"
                                           for r in reps)
    return body, text, csv_text


def cmd_compose(cfg):
    h = _compose_all(cfg["fn"], cfg["k"] or 1, cfg["cap"])
    return boolfn.to_json(h), boolfn.to_text(h).rstrip("\n"), None


def cmd_reduce(cfg):
    if cfg["witness"]:
        with open(cfg["witness"]) as fh:
            doc = json.load(fh)
        w = reductions.ReductionWitness.from_json(doc.get("body", {}).get("witness", doc))
        try:
            ok = reductions.verify(w)
            reason = None
        except QLimitError as exc:
            ok, reason = False, str(exc)
        body = {"verified": ok, "reason": reason}
        if not ok:
            raise InvariantViolation(json.dumps(body))
        return body, "verified", None
    f, g = load_function(cfg["from"]), load_function(cfg["to"])
    d = reductions.decide(f, g, cfg["mode"], cfg["budget"])
    body = {"from": cfg["from"], "to": cfg["to"], "mode": cfg["mode"], "status": d.status,
            "nodes": d.nodes, "witness": d.witness.to_json() if d.witness else None}
    if d.witness is not None and not reductions.verify(d.witness):
        raise InvariantViolation("search produced a witness that does not replay")
    if d.status == "Inconclusive":
        raise BudgetExhausted(json.dumps(body, sort_keys=True))
    text = d.status
    if d.witness:
        text += "\n" + "\n".join(json.dumps(s.to_json()) for s in d.witness.steps)
    return body, text, None


def cmd_limit(cfg):
    f = load_function(cfg["fn"][0])
    m = cfg["measure"][0] if cfg["measure"] else "D"
    seq = limits.sequence(m, f, cfg["kmax"], cfg["fn"][0], cfg["cap"])
    bounds = limits.sandwich(m, f, cfg["kmax"], seq) if m in limits.LAWS else None
    body = json.loads(limits.to_json(seq, bounds))
    text = ",".join(measures.rational_str(v).removesuffix("/1") for v in seq.values())
    if bounds:
        text += f"\n{m}* in [{bounds.lower}, {bounds.upper}]"
    return body, text, limits.to_csv(seq, bounds)


def cmd_simulate(cfg):
    f = load_function(cfg["fn"][0])
    ev = (lasvegas.default_evaluator(f) if cfg["evaluator"] == "auto"
          else lasvegas.make_evaluator(cfg["evaluator"], f))
    if cfg["transcript"]:
        t = lasvegas.transcript_for(f, cfg["k"] or 1, ev, cfg["seed"], cfg["trial"],
                                    cfg["generator"])
        return {"transcript": t.events}, t.dumps().rstrip("\n"), None
    ks = range(cfg["k"], cfg["k"] + 1) if cfg["k"] else range(1, cfg["kmax"] + 1)
    rep = lasvegas.growth_report(f, ev, ks, cfg["trials"], cfg["seed"], cfg["generator"],
                                 cfg["threads"], cfg["fn"][0])
    body = rep.to_json()
    bad = [r.k for r in rep.rows if r.verified != r.trials]
    if bad:
        raise InvariantViolation(f"unverified certificates at k={bad}")
    return body, rep.to_csv().rstrip("\n"), rep.to_csv()


def selftest_checks(quick=False):
    """(name, passed, detail) for the invariant corpus."""
    from .measures.randomized import leaves_are_certificates, randomized_complexity

    out = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a violation too
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))

    corpus = ["I", "S", "NAND2", "MAJ3", "PrOR2", "PrOR3", "AND2", "OR3", "PARITY2", "PARITY3"]
    fs = {name: boolfn.catalog(name) for name in corpus}
    fs["S∘NAND2"] = boolfn.compose(fs["S"], fs["NAND2"])

    for name, f in fs.items():
        def chain(f=f):
            v = {m: measures.compute(m, f) for m in ("s", "bs", "fbs", "C", "D", "deg")}
            ok = v["s"] <= v["bs"] <= v["fbs"] <= v["C"] <= v["D"] and v["deg"] <= v["D"]
            return ok, {k: measures.rational_str(x) for k, x in v.items()}
        check(f"s<=bs<=fbs<=C<=D, deg<=D: {name}", chain)

        def roundtrip(f=f):
            return (boolfn.loads(boolfn.dumps(f)) == f and
                    boolfn.loads(boolfn.dumps(f, "text")) == f), ""
        check(f"serialization round trip: {name}", roundtrip)

        def witnesses(f=f):
            for m in ("D", "C", "bs", "deg"):
                measures.report(m, f)
            return True, ""
        check(f"measure witnesses re-verify: {name}", witnesses)

        if f.n <= 3:
            def zero_error(f=f):
                res = randomized_complexity(f, 0, "zero")
                c = measures.compute("C", f)
                return (leaves_are_certificates(f, res.algorithm) and
                        c <= res.value <= measures.compute("D", f)), measures.rational_str(res.value)
            check(f"R0 leaves are certificates, C<=R0<=D: {name}", zero_error)

    def identity_to_pror():
        d = reductions.decide(fs["I"], fs["PrOR3"])
        return bool(d) and reductions.verify(d.witness), d.status
    check("I reduces to PrOR3", identity_to_pror)

    def switch():
        a = reductions.is_switchable(fs["MAJ3"])
        b = reductions.is_switchable(fs["AND2"])
        c = reductions.verify(reductions.switch_compose_witness(fs["NAND2"]))
        return a.status == "Switchable" and b.status == "No" and c, (a.status, b.status)
    check("switchability (MAJ3 yes, AND2 no, S∘f ≲ f)", switch)

    def bs_red():
        w = reductions.bs_reduction_witness(fs["NAND2"])
        return reductions.verify(w) and w.target == reductions.pror_switch(2), ""
    check("bs reduction witness for NAND2", bs_red)

    def limit_d():
        seq = limits.sequence("D", fs["NAND2"], 3 if quick else 4)
        return seq.values() == [2 ** k for k in range(1, len(seq.entries) + 1)], seq.values()
    check("D(NAND2^k) = 2^k", limit_d)

    def dp():
        t = lasvegas.exact_expected_cost("DirectionalNAND", fs["NAND2"], 30)
        target = (1 + 33 ** 0.5) / 4
        return abs(float(t.ratio(30)) - target) < 1e-3, float(t.ratio(30))
    check("DirectionalNAND cost ratio", dp)

    def las_vegas():
        for name in ("NAND2", "MAJ3"):
            f = fs[name]
            rep = lasvegas.growth_report(f, lasvegas.default_evaluator(f), range(1, 4),
                                         50 if quick else 200, 0)
            if any(r.verified != r.trials or r.bot_rate > Fraction(1, 2) for r in rep.rows):
                return False, name
        return True, ""
    check("A_k outputs verify, bot rate <= 1/2", las_vegas)
    return out


def cmd_selftest(cfg):
    results = selftest_checks(cfg["quick"])
    body = {"checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}
    text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {n}" for n, ok, _ in results)
    failed = [n for n, ok, _ in results if not ok]
    if failed:
        raise InvariantViolation(text)
    return json.loads(json.dumps(body, default=str)), text, None


COMMANDS = {"measure": cmd_measure, "compose": cmd_compose, "reduce": cmd_reduce,
            "limit": cmd_limit, "simulate": cmd_simulate, "selftest": cmd_selftest}


# --- output -----------------------------------------------------------------


def _fmt(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def header(cfg):
    return {"tool": "qlimit", "version": __version__, "config": cfg,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()}


def render(cfg, body, text, csv_text):
    fmt = cfg["format"]
    if fmt == "json":
        return json.dumps({"header": header(cfg), "body": body}, sort_keys=True) + "\n"
    if fmt == "csv":
        if csv_text is None:
            raise ValueError(f"{cfg['command']} has no csv output")
        return csv_text
    return text + "\n"


def run_config(cfg):
    """Execute a configuration; returns (body, text, csv)."""
    return COMMANDS[cfg["command"]](cfg)


# --- argument parsing -----------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="qlimit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qlimit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--cap", type=int, default=None,
                        help="materialization cap on |Dom| (default $QLIMIT_CAP or 2^26)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", type=parse_rational, default=Fraction(1, 3))

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("measure", "compute measures with witnesses")
    s.add_argument("--fn", action="append", required=True,
                   help="function source; repeat to compose left to right")
    s.add_argument("--measure", action="append", choices=sorted(measures.MEASURES))
    s.add_argument("--all", action="store_true", help="the standard measure set")

    s = add("compose", "compose functions and print the result")
    s.add_argument("--fn", action="append", required=True)
    s.add_argument("--k", type=int, default=1, help="then take the k-th power")

    s = add("reduce", "search for or verify a reduction")
    s.add_argument("--from", dest="from", help="the function being reduced (f in f ≲ g)")
    s.add_argument("--to", help="the function reduced to (g)")
    s.add_argument("--mode", choices=(reductions.WEAK, reductions.STRONG), default="weak")
    s.add_argument("--budget", type=int, default=10 ** 6, help="search node budget")
    s.add_argument("--witness", help="verify a witness file instead of searching")

    s = add("limit", "M(f^k) sequence and bounds on the composition limit")
    s.add_argument("--fn", action="append", required=True)
    s.add_argument("--measure", action="append", choices=sorted(measures.MEASURES))
    s.add_argument("--kmax", type=int, default=3)

    s = add("simulate", "Monte-Carlo runs of the Las Vegas certificate finder")
    s.add_argument("--fn", action="append", required=True)
    s.add_argument("--k", type=int, default=None, help="a single depth")
    s.add_argument("--kmax", type=int, default=4, help="depths 1..kmax when --k is absent")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--evaluator", default="auto",
                   choices=("auto", *sorted(lasvegas.EVALUATORS)))
    s.add_argument("--generator", choices=("uniform", "adversarial"), default="uniform")
    s.add_argument("--transcript", action="store_true",
                   help="emit the JSON-lines transcript of one trial")
    s.add_argument("--trial", type=int, default=0)

    s = add("selftest", "run the invariant corpus")
    s.add_argument("--quick", action="store_true")

    s = sub.add_parser("replay", help="re-run a command from a JSON report header")
    s.add_argument("report")
    s.add_argument("--check", action="store_true",
                   help="exit 1 unless the new body equals the recorded one")
    s.add_argument("--out")
    return p


def config_from_args(args):
    cfg = {k: v for k, v in vars(args).items() if k != "out"}
    if cfg.get("cap") is None:
        cfg["cap"] = boolfn.default_cap()
    cfg["epsilon"] = measures.rational_str(cfg["epsilon"])
    return cfg


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _replay(args):
    with open(args.report) as fh:
        doc = json.load(fh)
    cfg = doc["header"]["config"]
    body, _, _ = run_config(cfg)
    body = json.loads(json.dumps(body, sort_keys=True))
    _emit(json.dumps({"header": header(cfg), "body": body}, sort_keys=True) + "\n", args.out)
    if args.check and body != doc["body"]:
        print("replay: body differs from the recorded report", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            return _replay(args)
        cfg = config_from_args(args)
        body, text, csv_text = run_config(cfg)
        _emit(render(cfg, body, text, csv_text), args.out)
        return EXIT_OK
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (BudgetExhausted, *BUDGET_ERRORS) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UnknownName, QLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
