"""Command-line entry point: ``lassynt <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

from .automata import build_prefix_dfa, dfa_to_dot, minimize_dfa
from .encoding import encode_synthesis
from .lasso import format_lasso, format_letter, input_letters
from .ltl import LtlSyntaxError, SpecFile, load_spec, parse_spec
from .qbf import emit_qdimacs
from .synth import (BACKENDS, REALIZABLE, RESOURCE_LIMIT, UNREALIZABLE, SynthConfig, SynthesisError,
                    approx_synthesize, check, export_counting, sweep_n, synthesize)
from .tsys import DEFAULT_CEILING, ResourceLimit, TransitionSystem, count_systems

EXIT_OK, EXIT_NO, EXIT_RESOURCE, EXIT_ERROR = 0, 1, 2, 3
EXIT_USAGE, EXIT_FILE = 64, 74

log = logging.getLogger("lassynt")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def bundled_specs() -> dict[str, str]:
    """Name -> text of the specifications shipped with the package."""
    out = {}
    for entry in resources.files("lassynt").joinpath("corpus").iterdir():
        if entry.name.endswith(".spec"):
            out[entry.name[:-5]] = entry.read_text()
    return dict(sorted(out.items()))


def resolve_spec(ref: str, seed_corpus: str | None = None) -> SpecFile:
    """Load ``ref`` as a path; failing that, as a spec name in the seed corpus or the bundled one.

    ``examples/greedy1.spec`` therefore works from any directory as long as a
    spec called ``greedy1`` is bundled.
    """
    p = Path(ref)
    if p.is_file():
        return load_spec(p)
    name = p.name[:-5] if p.name.endswith(".spec") else p.name
    if seed_corpus:
        cand = Path(seed_corpus) / f"{name}.spec"
        if cand.is_file():
            return load_spec(cand)
    texts = bundled_specs()
    if name in texts:
        return parse_spec(texts[name], name)
    raise FileNotFoundError(f"no such spec file or bundled spec: {ref}")


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _split_inputs(values: list[str] | None) -> list[str]:
    names = []
    for v in values or []:
        names += [x for x in v.replace(",", " ").split() if x]
    return names


def _config(args) -> SynthConfig:
    return SynthConfig(backend=args.backend, sat_backend=args.sat, solver_cmd=args.solver,
                       max_refinements=args.max_refinements, timeout=args.timeout,
                       ceiling=args.ceiling, phase_guard=not args.verbatim)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") if len(m) > 1
                                                                     else "-" + m for m in missing))
    for n in ("n", "k"):
        v = getattr(args, n, None)
        if v is not None and v < 1:
            raise UsageError(f"-{n} must be at least 1")


# commands

def cmd_synth(args) -> int:
    _need(args, "spec", "k")
    if args.sweep_n is None:
        _need(args, "n")
    spec = resolve_spec(args.spec, args.seed_corpus)
    cfg = _config(args)
    res = sweep_n(spec, args.sweep_n, args.k, cfg) if args.sweep_n else synthesize(spec, args.n, args.k, cfg)
    if args.format == "json":
        print(json.dumps(res.to_json(), indent=2, sort_keys=True))
        if args.out and res.witness is not None:
            Path(args.out).write_text(res.witness.dumps() + "\n")
    elif args.format == "dot":
        if res.witness is not None:
            _write(res.witness.to_dot(spec.name or "system"), args.out)
        else:
            print(f"// {res.verdict}")
    else:
        print(f"verdict: {res.verdict} (n={res.n}, k={res.k}, backend={res.backend})")
        if res.witness is not None:
            _write(_system_text(res.witness), args.out)
    return {REALIZABLE: EXIT_OK, UNREALIZABLE: EXIT_NO, RESOURCE_LIMIT: EXIT_RESOURCE}[res.verdict]


def _system_text(sys_: TransitionSystem) -> str:
    lines = []
    letters = input_letters(sys_.inputs)
    for t in range(sys_.n):
        succ = ", ".join(f"{format_letter(a, sys_.inputs)}->{sys_.trans[t][i]}"
                         for i, a in enumerate(letters))
        lines.append(f"state {t} {format_letter(sys_.labels[t], sys_.outputs)}: {succ}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    _need(args, "spec", "k", "system")
    spec = resolve_spec(args.spec, args.seed_corpus)
    sys_ = TransitionSystem.from_json(json.loads(Path(args.system).read_text()))
    res = check(spec, sys_, args.k)
    if res is True:
        print(json.dumps({"holds": True, "k": args.k}))
        return EXIT_OK
    print(json.dumps({"holds": False, "k": args.k, "counterexample": format_lasso(res, spec.inputs)}))
    return EXIT_NO


def cmd_approx(args) -> int:
    _need(args, "spec", "n", "k")
    spec = resolve_spec(args.spec, args.seed_corpus)
    if args.method == "export":
        if not args.out:
            raise UsageError("--method export needs --out")
        path = export_counting(spec, args.n, args.k, args.out, phase_guard=not args.verbatim)
        print(json.dumps({"exported": str(path)}))
        return EXIT_OK
    try:
        res = approx_synthesize(spec, args.n, args.k, args.epsilon, args.ceiling, table=args.table)
    except ResourceLimit as e:
        print(json.dumps({"verdict": RESOURCE_LIMIT, "reason": str(e)}))
        return EXIT_RESOURCE
    if args.format == "dot":
        _write(res.system.to_dot(spec.name or "system"), args.out)
    else:
        print(json.dumps(res.to_json(), indent=2, sort_keys=True))
        if args.out:
            Path(args.out).write_text(res.system.dumps() + "\n")
    return EXIT_OK if res.satisfied else EXIT_NO


def cmd_prefix_dfa(args) -> int:
    _need(args, "k")
    inputs = _split_inputs(args.inputs)
    if not inputs:
        raise UsageError("prefix-dfa needs at least one input proposition (-I)")
    dfa = build_prefix_dfa(input_letters(inputs), args.k)
    if args.minimize:
        dfa = minimize_dfa(dfa)
    if args.format == "dot":
        _write(dfa_to_dot(dfa, f"prefix_k{args.k}"), args.out)
    elif args.format == "json":
        data = {"k": args.k, "inputs": inputs, "states": dfa.num_states, "initial": dfa.initial,
                "accepting": sorted(dfa.accepting),
                "alphabet": [format_letter(a, inputs) for a in dfa.alphabet],
                "trans": [list(row) for row in dfa.trans]}
        _write(json.dumps(data, indent=2), args.out)
    else:
        _write(f"prefix DFA k={args.k} inputs={' '.join(inputs)}: {dfa.num_states} states, "
               f"{len(dfa.accepting)} accepting", args.out)
    return EXIT_OK


def cmd_emit_qdimacs(args) -> int:
    _need(args, "spec", "n", "k")
    spec = resolve_spec(args.spec, args.seed_corpus)
    enc = encode_synthesis(spec, args.n, args.k, phase_guard=not args.verbatim)
    header = [f"lassynt synthesis instance n={args.n} k={args.k}", f"formula {spec.formula}"]
    _write(emit_qdimacs(enc.problem, header), args.out)
    return EXIT_OK


def cmd_emit_count(args) -> int:
    _need(args, "spec", "n", "k")
    spec = resolve_spec(args.spec, args.seed_corpus)
    if args.out:
        export_counting(spec, args.n, args.k, args.out, phase_guard=not args.verbatim)
    else:
        from .encoding import encode_counting
        sys.stdout.write(encode_counting(spec, args.n, args.k, not args.verbatim).to_dimacs())
    return EXIT_OK


# (spec, n, k, expected verdict, expected rate or None); "-" marks a timeout row
TABLE1 = [
    ("rr2", 2, 4, UNREALIZABLE, 0.5),
    ("rr2", 3, 2, UNREALIZABLE, 0.88),
    ("rr2", 4, 2, REALIZABLE, 0.88),
    ("greedy1", 2, 2, REALIZABLE, 1.0),
    ("greedy1", 2, 3, UNREALIZABLE, 0.88),
    ("greedy1", 3, 3, UNREALIZABLE, 0.88),
    ("greedy1", 4, 3, REALIZABLE, 1.0),
    ("greedy1", 4, 4, "-", None),
    ("greedy2", 4, 2, REALIZABLE, None),
    ("greedy2", 4, 3, UNREALIZABLE, None),
    ("greedy3", 2, 2, UNREALIZABLE, 0.65),
]
SMALL_ROWS = {("rr2", 2, 4), ("rr2", 3, 2), ("rr2", 4, 2), ("greedy1", 2, 2), ("greedy1", 2, 3),
              ("greedy1", 3, 3), ("greedy1", 4, 3)}


def repro_rows(args) -> list[dict]:
    rows = []
    cfg = _config(args)
    for name, n, k, exp_verdict, exp_rate in TABLE1:
        row = {"spec": name, "n": n, "k": k, "expected": exp_verdict, "expected_rate": exp_rate}
        rows.append(row)
        if args.small and (name, n, k) not in SMALL_ROWS:
            row.update(verdict="skipped-by-guard", rate=None)
            continue
        spec = resolve_spec(name, args.seed_corpus)
        res = synthesize(spec, n, k, cfg)
        row["verdict"] = res.verdict
        row["time"] = res.stats.get("time")
        if res.verdict == REALIZABLE:
            row["rate"] = 1.0          # a verified lasso-precise witness satisfies every word
        elif count_systems(n, len(spec.inputs), len(spec.outputs)) <= args.rate_ceiling:
            row["rate"] = round(float(approx_synthesize(spec, n, k, ceiling=args.rate_ceiling).rate), 4)
        else:
            row["rate"] = None
    return rows


def cmd_repro_table(args) -> int:
    rows = repro_rows(args)
    if args.format == "json":
        _write(json.dumps(rows, indent=2), args.out)
        return EXIT_OK
    head = f"{'spec':<8} {'n':>2} {'k':>2}  {'expected':<13} {'obtained':<17} {'match':<5} {'rate(table)':>11} {'rate':>7}"
    lines = [head, "-" * len(head)]
    for r in rows:
        match = "-" if r["expected"] == "-" or r["verdict"] == "skipped-by-guard" else (
            "yes" if r["expected"] == r["verdict"] else "NO")
        pr = "-" if r["expected_rate"] is None else f"{r['expected_rate']:.2f}"
        ob = "-" if r.get("rate") is None else f"{r['rate']:.3f}"
        lines.append(f"{r['spec']:<8} {r['n']:>2} {r['k']:>2}  {r['expected']:<13} {r['verdict']:<17} "
                     f"{match:<5} {pr:>11} {ob:>7}")
    _write("\n".join(lines), args.out)
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth, "check": cmd_check, "approx": cmd_approx, "prefix-dfa": cmd_prefix_dfa,
    "emit-qdimacs": cmd_emit_qdimacs, "emit-count": cmd_emit_count, "repro-table": cmd_repro_table,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--spec", help="spec file, or the name of a bundled spec (e.g. greedy1)")
    shared.add_argument("-n", type=int, help="number of system states")
    shared.add_argument("-k", type=int, help="lasso length bound")
    shared.add_argument("--backend", choices=BACKENDS, default="internal-qbf")
    shared.add_argument("--sat", choices=("internal", "pysat"), default=None,
                        help="SAT engine inside the QBF solver (default: pysat when installed)")
    shared.add_argument("--solver", help="external QDIMACS solver command (else $LASSYNT_SOLVER)")
    shared.add_argument("--out", help="write the main artifact here instead of stdout")
    shared.add_argument("--format", choices=("json", "dot", "text"), default=None)
    shared.add_argument("--seed-corpus", help="directory of .spec files searched before the bundled corpus")
    shared.add_argument("--timeout", type=float, default=None, help="seconds per QBF solve")
    shared.add_argument("--max-refinements", type=int, default=10**6)
    shared.add_argument("--ceiling", type=int, default=DEFAULT_CEILING,
                        help="largest number of candidate systems brute force may enumerate")
    shared.add_argument("--verbatim", action="store_true",
                        help="drop the loop-phase constraint from the encoding")
    shared.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="lassynt", description="Lasso-precise reactive synthesis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("synth", parents=[shared], help="exact lasso-precise synthesis")
    s.add_argument("--sweep-n", type=int, metavar="MAX", help="try n = 1..MAX, report the first realizable")
    c = sub.add_parser("check", parents=[shared], help="check a system (JSON) against a spec")
    c.add_argument("--system", help="transition system JSON file")
    a = sub.add_parser("approx", parents=[shared], help="maximize the satisfied fraction of input lassos")
    a.add_argument("--epsilon", type=float, default=0.0)
    a.add_argument("--method", choices=("brute", "export"), default="brute")
    a.add_argument("--table", action="store_true", help="include the per-word satisfaction table")
    d = sub.add_parser("prefix-dfa", parents=[shared], help="DFA for prefixes of k-lasso words")
    d.add_argument("-I", dest="inputs", action="append", help="input propositions (repeatable or comma separated)")
    d.add_argument("--minimize", action="store_true")
    sub.add_parser("emit-qdimacs", parents=[shared], help="write the synthesis QBF")
    sub.add_parser("emit-count", parents=[shared], help="write the maximum-model-counting instance")
    r = sub.add_parser("repro-table", parents=[shared], help="rerun the benchmark table")
    r.add_argument("--small", action="store_true", help="only the single-client and round-robin rows")
    r.add_argument("--rate-ceiling", type=int, default=10**5,
                   help="compute exact rates only when at most this many systems exist")
    return p


DEFAULT_FORMATS = {"prefix-dfa": "text", "repro-table": "text"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = DEFAULT_FORMATS.get(args.command, "json")
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"lassynt: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        print(f"lassynt: {e}", file=sys.stderr)
        return EXIT_FILE
    except LtlSyntaxError as e:
        print(f"lassynt: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (SynthesisError, ValueError, ResourceLimit) as e:
        print(f"lassynt: {e}", file=sys.stderr)
        return EXIT_RESOURCE if isinstance(e, ResourceLimit) else EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
