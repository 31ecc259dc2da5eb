"""Command-line entry point.

Exit codes: 0 on success, 1 when a checked assertion fails, 2 on malformed
input (unreadable files, bad HOA/JSON, unmet preconditions).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .automaton import Automaton
from .buchi import buchi_equiv_on_lassos, determinize_weak
from .errors import ContractError, InputError
from .families import FAMILIES, build_dn
from .formats import load_hoa, to_dot, to_hoa
from .marking import collapse_to_p, run_marking, size_bound_report
from .mdp import load_mdp
from .product import Semantics, psem, psyn_details
from .proplab import (
    gfm_lower_bound_experiment,
    gfm_spot_check,
    is_separating,
    is_strongly_unambiguous,
    is_unambiguous,
)
from .reproduce import DEFAULT_SEED, frac, run_all

SEED_ENV = "OMEGA_SUCCINCT_SEED"


class AssertionFailed(Exception):
    pass


def _emit(data, out=None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _node_name(key: tuple) -> str:
    if key[0] == "state":
        return f"({key[1]},{key[2]})"
    if key[0] == "choice":
        return f"({key[1]},{key[2]},{key[3]})"
    return "reject"


def _action_name(name: tuple) -> str:
    return "(" + ",".join(str(x) for x in name) + ")"


# -- subcommands --------------------------------------------------------------


def cmd_gen(args) -> int:
    a = FAMILIES[args.family](args.n)
    label = f"{args.family}({args.n})"
    text = to_dot(a, label) if args.dot else to_hoa(a, label)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _witness_dba(a: Automaton, dba_path: str | None) -> tuple[Automaton, str]:
    if dba_path:
        return load_hoa(dba_path), "supplied"
    if a.deterministic:
        return a, "automaton itself"
    if a.safety or a.reachability:
        return determinize_weak(a), "subset construction"
    raise ContractError("psem needs --dba for a nondeterministic automaton that is neither safety nor reachability")


def cmd_analyze(args) -> int:
    m = load_mdp(args.mdp)
    a = load_hoa(args.automaton)
    report: dict = {"mode": args.mode}
    if args.mode == "psyn":
        semantics = Semantics(args.semantics)
        prod, mecs, values, strategy = psyn_details(m, a, semantics)
        value = values[prod.initial]
        report["semantics"] = semantics.value
        report["value"] = frac(value)
        report["strategy"] = [
            {"state": _node_name(prod.nodes[s]), "action": _action_name(prod.actions[s][k].name)}
            for s, k in sorted(strategy.items())
            if prod.nodes[s][0] != "reject" and values[s] > 0
        ]
        report["acceptingMecs"] = [sorted(_node_name(prod.nodes[s]) for s in ec.states) for ec in mecs]
    else:
        if not m.markov_chain:
            raise ContractError("psem is defined here for Markov chains only")
        dba, source = _witness_dba(a, args.dba)
        agrees, cex = buchi_equiv_on_lassos(a, dba)
        report["value"] = frac(psem(m, dba))
        report["witness"] = {"source": source, "states": dba.num_states}
        report["assumption"] = {
            "lassoAgreement": agrees,
            "counterexample": None if cex is None else str(cex),
        }
        if not agrees:
            _emit(report) if args.json else print(report["value"])
            raise AssertionFailed(f"witness DBA disagrees with the automaton on {cex}")
    if args.json:
        _emit(report)
    else:
        print(report["value"])
    return 0


def cmd_mark(args) -> int:
    d = load_hoa(args.dba) if args.dba else build_dn(args.n)
    marking = run_marking(d, args.n)
    rep = size_bound_report(args.n, d)
    index = {q: i for i, q in enumerate(marking.order)}
    p_size = collapse_to_p(d, marking).automaton.num_states if marking.unmarked and marking.order else None
    data = {
        "n": args.n,
        "dbaStates": d.num_states,
        "assignments": [
            {
                "state": q,
                "word": "".join(marking.assignments[q]),
                "phase": marking.phase[q].value,
                "orderIndex": index[q],
            }
            for q in marking.order
        ],
        "unmarked": marking.unmarked,
        "pSize": p_size,
        "boundsCheck": rep.as_dict(),
    }
    _emit(data, args.output)
    if not rep.passed:
        raise AssertionFailed("marking checks failed; see boundsCheck")
    return 0


def _pair_json(pair):
    if pair is None:
        return None
    return {
        "word": str(pair.word),
        "first": {"stem": pair.first[0], "loop": pair.first[1]},
        "second": {"stem": pair.second[0], "loop": pair.second[1]},
    }


def cmd_props(args) -> int:
    a = load_hoa(args.automaton)
    if args.check == "separating":
        holds, w = is_separating(a)
        witness = None if w is None else {"p": w[0], "q": w[1], "word": str(w[2])}
    else:
        fn = is_unambiguous if args.check == "unambiguous" else is_strongly_unambiguous
        holds, pair = fn(a)
        witness = _pair_json(pair)
    _emit({"check": args.check, "holds": holds, "witness": witness})
    return 0


def _parse_seeds(items: list[str] | None, count: int) -> list[int]:
    if not items:
        base = os.environ.get(SEED_ENV)
        try:
            start = int(base) if base is not None else DEFAULT_SEED
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {base!r}") from None
        return list(range(start, start + count))
    seeds = []
    for item in items:
        try:
            if ".." in item:
                lo, hi = item.split("..", 1)
                seeds.extend(range(int(lo), int(hi) + 1))
            else:
                seeds.append(int(item))
        except ValueError:
            raise InputError(f"bad seed {item!r}; use integers or ranges like 0..49") from None
    return seeds


def cmd_experiment(args) -> int:
    if args.which in ("lower-bound", "thm10"):
        candidate = load_hoa(args.candidate)
        report = gfm_lower_bound_experiment(args.n, candidate, args.flavor)
        _emit(report.as_dict(), args.output)
        if not report.lasso_agreement:
            raise AssertionFailed("candidate does not match the reference language on bounded lassos")
        return 0
    seeds = _parse_seeds(args.seeds, args.count)
    report = gfm_spot_check(args.n, seeds, states=args.states)
    _emit(report.as_dict(), args.output)
    if not report.passed:
        raise AssertionFailed("psyn and psem differ on some chain")
    return 0


def cmd_reproduce_all(args) -> int:
    base = os.environ.get(SEED_ENV)
    try:
        seed = int(base) if base is not None else DEFAULT_SEED
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {base!r}") from None
    reports = run_all(args.max_n, seed=seed)
    data = {
        "version": __version__,
        "maxN": args.max_n,
        "passed": all(r.passed for r in reports),
        "criteria": [r.as_dict(timing=args.timing) for r in reports],
    }
    _emit(data, args.output)
    for r in reports:
        line = r.summary_line()
        if args.timing:
            line += f" [{r.wall_clock_ms} ms]"
        print(line, file=sys.stderr if args.output is None else sys.stdout)
    if not data["passed"]:
        raise AssertionFailed("some criteria failed")
    return 0


# -- parser -------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegasucc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a family member as HOA or DOT")
    g.add_argument("family", choices=sorted(FAMILIES))
    g.add_argument("--n", type=_positive, required=True)
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--hoa", action="store_true", help="HOA output (default)")
    fmt.add_argument("--dot", action="store_true")
    g.add_argument("--output")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="exact psyn or psem of an MDP against an automaton")
    a.add_argument("--mdp", required=True)
    a.add_argument("--automaton", required=True)
    a.add_argument("--mode", choices=["psyn", "psem"], required=True)
    a.add_argument("--dba", help="deterministic witness for psem")
    a.add_argument("--semantics", choices=[s.value for s in Semantics], default=Semantics.COMMITTED.value)
    a.add_argument("--json", action="store_true", help="print the full JSON report")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("mark", help="run the marking procedure and the size checks")
    m.add_argument("--n", type=_positive, required=True)
    m.add_argument("--dba")
    m.add_argument("--output")
    m.set_defaults(func=cmd_mark)

    p = sub.add_parser("props", help="ambiguity and separation checks")
    p.add_argument("--automaton", required=True)
    p.add_argument("--check", choices=["unambiguous", "strongly-unambiguous", "separating"], required=True)
    p.set_defaults(func=cmd_props)

    e = sub.add_parser("experiment", help="chain experiments")
    # "thm10" is kept as an alias of "lower-bound"
    e.add_argument("which", choices=["lower-bound", "thm10", "gfm-spotcheck"])
    e.add_argument("--n", type=_positive, required=True)
    e.add_argument("--candidate", help="candidate automaton (lower-bound)")
    e.add_argument("--flavor", choices=["reach", "safety"], default="safety")
    e.add_argument("--seeds", nargs="*", help="seeds or inclusive ranges a..b (gfm-spotcheck)")
    e.add_argument("--count", type=_positive, default=10, help="number of seeds when --seeds is absent")
    e.add_argument("--states", type=_positive, default=5, help="states per random chain")
    e.add_argument("--output")
    e.set_defaults(func=cmd_experiment)

    r = sub.add_parser("reproduce-all", help="run every acceptance criterion")
    r.add_argument("--max-n", type=_positive, default=None)
    r.add_argument("--output", help="write the JSON report here instead of stdout")
    r.add_argument("--timing", action="store_true", help="include wall-clock times")
    r.set_defaults(func=cmd_reproduce_all)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "experiment" and args.which in ("lower-bound", "thm10") and not args.candidate:
        parser.error(f"experiment {args.which} needs --candidate")
    try:
        return args.func(args)
    except AssertionFailed as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, ContractError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
