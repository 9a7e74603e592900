"""Command line front end.

Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
1 on a domain error (bad field, failed step, ...) and 2 on a usage error.
``--format json`` switches every subcommand to one JSON object per line.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Sequence

from . import fixtures
from .automorph import generate_group
from .field import FieldError, LabelVector
from .gates import (
    INPUT_ROWS,
    GateField,
    circuit_table,
    functional_completeness_suite,
    gate_eval,
    nor_field,
    paper_nor_field,
    paper_transformation,
    parse_circuit,
    truth_table,
)
from .grammar import canonical_label, format_field, parse, serialize
from .machine import MachineState, automaton_run, format_state, parse_automaton, parse_state, run, step
from .random_mode import VERIFIERS, SearchConfig, random_automaton_run, random_search, transition_density
from .ski import DEFAULT_FUEL, DEFAULT_MAX_SIZE, encode_term_as_field, normalize, parse_term, reduce_step, reduce_step_rightmost


class Output:
    def __init__(self, fmt: str, stream=None):
        self.json = fmt == "json"
        self.stream = stream or sys.stdout

    def emit(self, text: str | None = None, **record):
        if self.json:
            self.stream.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            self.stream.write(text if text.endswith("\n") else text + "\n")


def _read(path: str) -> str:
    if path.startswith("fixture:"):
        return fixtures.read_text(path[len("fixture:"):])
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _field_record(f):
    return {
        "n": f.n,
        "m": f.modulus,
        "labels": list(f.labels),
        "entries": [list(r) for r in f.entries],
        "attributes": dict(f.attributes),
    }


def _state_record(s: MachineState):
    return {
        "L": list(s.L),
        "D": [[list(r) for r in f.entries] for f in s.D],
        "T": [str(o) for o in s.T],
        "O": [str(o) for o in s.O],
    }


def cmd_parse(args, out: Output):
    f = parse(_read(args.file))
    out.emit(format_field(f, inline=args.inline), **_field_record(f))


def cmd_canon(args, out: Output):
    f = parse(_read(args.file))
    text = serialize(f, inline=args.inline)
    rec = {"canonical": text, "labels": list(canonical_label(f))}
    if args.show_labels:
        text = f"labels {' '.join(map(str, canonical_label(f)))}\n{text}"
    out.emit(text, **rec)


def cmd_group_order(args, out: Output):
    gens = [g for g in args.gens.split(",") if g]
    group = generate_group(args.n, gens, cap=args.cap)
    out.emit(str(len(group)), n=args.n, generators=gens, order=len(group))
    if args.list:
        for g in group:
            out.emit(f"{g.cycles()}  {' '.join(g.word) or 'e'}", cycles=g.cycles(), word=list(g.word))


def cmd_step(args, out: Output):
    s = parse_state(_read(args.file))
    for _ in range(args.count):
        s = step(s)
    out.emit(format_state(s), **_state_record(s))


def cmd_run(args, out: Output):
    s = run(parse_state(_read(args.file)))
    out.emit(format_state(s), **_state_record(s))


def _load_inputs(path):
    lines = _read(path).splitlines()
    return [parse(x) for x in (ln.split("#", 1)[0].strip() for ln in lines) if x]


def cmd_automaton(args, out: Output):
    a = parse_automaton(_read(args.file))
    if args.density:
        weights = dict(item.split("=", 1) for item in args.density.split(","))
        res = random_automaton_run(a, transition_density(weights, args.seed), args.length)
    else:
        if not args.inputs:
            raise FieldError("give --inputs FILE or --density")
        res = automaton_run(a, _load_inputs(args.inputs))
    for src, sym, dst in res.trace:
        out.emit(f"{src} --{sym if sym is not None else '?'}--> {dst}", src=src, symbol=sym, dst=dst)
    verdict = "accepted" if res.accepted else "rejected"
    out.emit(f"{verdict} {res.final}", final=res.final, accepted=res.accepted)


def _gate(args) -> GateField:
    return nor_field() if args.nor else paper_nor_field()


def cmd_gate(args, out: Output):
    if args.gate_cmd == "eval":
        g = _gate(args)
        v = gate_eval(g, args.a, args.b)
        out.emit(str(v), a=args.a, b=args.b, out=v)
    elif args.gate_cmd == "table":
        g = _gate(args)
        if args.circuit:
            c = parse_circuit(_read(args.circuit))
            rows = list(itertools.product((0, 1), repeat=len(c.inputs)))
            for bits, v in zip(rows, circuit_table(c, g)):
                out.emit(f"{''.join(map(str, bits))} {v}", inputs=list(bits), out=v)
        else:
            for (a, b), v in zip(INPUT_ROWS, truth_table(g)):
                out.emit(f"{a}{b} {v}", a=a, b=b, out=v)
    elif args.gate_cmd == "transform":
        f = paper_transformation(_gate(args)).field
        out.emit(format_field(f), **_field_record(f))
    elif args.gate_cmd == "complete":
        rep = functional_completeness_suite(_gate(args), depth=args.depth)
        for name, table in rep.tables.items():
            mark = "ok" if rep.ok[name] else "FAIL"
            out.emit(
                f"{name} {''.join(map(str, table))} gates={rep.gate_counts[name]} {mark}",
                function=name,
                table=list(table),
                gates=rep.gate_counts[name],
                ok=rep.ok[name],
            )
        out.emit(
            f"primitive {rep.primitive}; {rep.reachable}/16 functions within depth {args.depth}",
            primitive=rep.primitive,
            reachable=rep.reachable,
            depth=args.depth,
        )
        if not rep.passed:
            return 1


def cmd_search(args, out: Output):
    labels = LabelVector(int(x) for x in args.labels.split(","))
    start = MachineState((), labels)
    cfg = SearchConfig(seed=args.seed, max_trials=args.max_trials, mode=args.mode.replace("-", "_"))
    res = random_search(start, args.moves.split(","), args.verifier, cfg)
    if args.trace:
        for st in res.trace:
            out.emit(
                f"{st.trial} {st.move} {' '.join(map(str, st.labels))}",
                trial=st.trial,
                move=st.move,
                labels=list(st.labels),
            )
    status = "verified" if res.verified else "exhausted"
    out.emit(
        f"{status} trials={res.trials} labels={' '.join(map(str, res.state.L))}",
        status=status,
        trials=res.trials,
        labels=list(res.state.L),
        seed=args.seed,
    )
    return 0 if res.verified or args.mode.startswith("monte") else 1


def cmd_ski(args, out: Output):
    t = parse_term(args.term)
    if args.ski_cmd == "reduce":
        strategy = reduce_step if args.strategy == "normal" else reduce_step_rightmost
        res = normalize(t, args.fuel, strategy, args.max_size)
        status = "normal" if res.normal else "gave-up"
        out.emit(f"{res.term}\nsteps={res.steps} {status}", term=str(res.term), steps=res.steps, normal=res.normal)
        return 0 if res.normal else 1
    f = encode_term_as_field(t, args.max_vertices)
    out.emit(format_field(f), **_field_record(f))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphfield", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed for randomized subcommands")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("parse", help="read a graph string and echo it normalized")
    sp.add_argument("file", help="graph string file, or - for stdin")
    sp.add_argument("--inline", action="store_true")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("canon", help="canonical serialization of a graph string")
    sp.add_argument("file")
    sp.add_argument("--inline", action="store_true")
    sp.add_argument("--show-labels", action="store_true", help="also print the canonical label vector")
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("group-order", help="order of the group generated by relabeling moves")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--gens", default="cyclic", help="comma list: cyclic,mirror,adjacent,swaps,swap(i,j)")
    sp.add_argument("--cap", type=int, default=50_000)
    sp.add_argument("--list", action="store_true", help="list elements in cycle notation")
    sp.set_defaults(func=cmd_group_order)

    sp = sub.add_parser("step", help="advance a machine state file")
    sp.add_argument("file")
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_step)

    sp = sub.add_parser("run", help="run a machine state file to completion")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("automaton", help="run a graph automaton")
    sp.add_argument("file", help="automaton description")
    sp.add_argument("--inputs", help="file with one inline graph string per line")
    sp.add_argument("--density", help="random mode: sym=weight,... (weights like 1/2)")
    sp.add_argument("--length", type=int, default=5, help="random mode: number of symbols")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="overrides the global --seed")
    sp.set_defaults(func=cmd_automaton)

    sp = sub.add_parser("gate", help="gate fields and circuits")
    gsub = sp.add_subparsers(dest="gate_cmd", required=True)
    for name in ("eval", "table", "transform", "complete"):
        g = gsub.add_parser(name)
        which = g.add_mutually_exclusive_group()
        which.add_argument("--paper-nor", action="store_true", help="the published matrix (default)")
        which.add_argument("--nor", action="store_true", help="the genuine NOR field")
        if name == "eval":
            g.add_argument("a", type=int, choices=(0, 1))
            g.add_argument("b", type=int, choices=(0, 1))
        if name == "table":
            g.add_argument("--circuit", help="circuit edge-list file")
        if name == "complete":
            g.add_argument("--depth", type=int, default=5)
    sp.set_defaults(func=cmd_gate)

    sp = sub.add_parser("search", help="Las Vegas / Monte Carlo search over relabelings")
    sp.add_argument("--labels", required=True, help="start label vector, e.g. 3,1,4,2")
    sp.add_argument("--moves", default="swaps", help="comma list of moves")
    sp.add_argument("--verifier", choices=sorted(VERIFIERS), default="sorted")
    sp.add_argument("--mode", choices=("las-vegas", "monte-carlo", "las_vegas", "monte_carlo"), default="las-vegas")
    sp.add_argument("--max-trials", type=int, default=1_000_000)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="overrides the global --seed")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("ski", help="SKI combinator terms")
    ssub = sp.add_subparsers(dest="ski_cmd", required=True)
    r = ssub.add_parser("reduce")
    r.add_argument("term", help="e.g. '((S K) K) x'")
    r.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    r.add_argument("--strategy", choices=("normal", "rightmost"), default="normal")
    r.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE, help="give up once the term has this many leaves")
    e = ssub.add_parser("encode")
    e.add_argument("term")
    e.add_argument("--max-vertices", type=int, default=64)
    sp.set_defaults(func=cmd_ski)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out) or 0
    except (ValueError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"graphfield: error: {msg}", file=sys.stderr)
        state = getattr(exc, "state", None)
        if state is not None:
            print(format_state(state), file=sys.stderr, end="")
        return 1


if __name__ == "__main__":
    sys.exit(main())
