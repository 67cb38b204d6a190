"""The ``ofl`` command line.

Exit codes: 0 success or SAT, 1 UNSAT (or a failed check), 2 UNKNOWN,
3 usage errors, 4 unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .classify import classify
from .fo import FOSyntaxError
from .ground import SAT, UNKNOWN, UNSAT
from .normalform import to_normal_form
from .semantics import Structure, evaluate, satisfied
from .solvers import fragment_bound, solve
from .syntax import dumps_term_file, loads_term_file, parse_term, parse_vocab
from .terms import TermError, format_ops, operators_used

EXIT = {SAT: 0, UNSAT: 1, UNKNOWN: 2}
EXIT_USAGE, EXIT_INPUT = 3, 4
SCHEMA = 1
# oracle runs past this many elements are flagged as impractical
ORACLE_FEASIBLE = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(args) -> int:
    env = os.environ.get("OFL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"OFL_SEED must be an integer, got {env!r}") from None
    return args.seed


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _term(args):
    if args.expr is not None:
        if args.vocab is None:
            raise UsageError("--expr needs --vocab (e.g. --vocab 'R/2, P/1')")
        vocab = parse_vocab(args.vocab)
        return parse_term(args.expr, vocab), vocab
    if args.term is None:
        raise UsageError("give a term file (or '-') or --expr")
    return loads_term_file(_read(args.term))


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps({"schema": SCHEMA, "command": args.command, **payload}, indent=2, default=str))
    elif text:
        print(text.rstrip("\n"))


# -- commands -----------------------------------------------------------------------

def cmd_parse(args) -> int:
    t, vocab = _term(args)
    if args.desugar:
        from .terms import desugar
        t = desugar(t)
    ops = format_ops(operators_used(t))
    _emit(args, {"term": str(t), "vocab": vocab.text(), "arity": t.arity, "operators": ops},
          dumps_term_file(t, vocab) + f"# arity {t.arity}, operators {ops}")
    return 0


def cmd_classify(args) -> int:
    t, vocab = _term(args)
    v = classify(t, max(vocab.values(), default=0))
    row = format_ops(v.row) if v.row is not None else "none"
    text = (f"operators: {format_ops(v.ops)}\nrow: {row}{'' if v.exact else ' (contains the operators)'}\n"
            f"status: {v.text()}")
    _emit(args, v.as_dict(), text)
    return 0


def cmd_eval(args) -> int:
    t, vocab = _term(args)
    A = Structure.from_json(json.loads(_read(args.structure)), vocab)
    rel = evaluate(t, A)
    if rel.arity == 0:
        val = bool(rel.data)
        _emit(args, {"arity": 0, "value": val}, "true" if val else "false")
    else:
        tuples = rel.tuples
        _emit(args, {"arity": rel.arity, "tuples": tuples},
              f"# arity {rel.arity}, {len(tuples)} tuples\n" + "\n".join(" ".join(map(str, x)) for x in tuples))
    return 0


def cmd_sat(args) -> int:
    t, vocab = _term(args)
    if t.arity != 0:
        raise UsageError(f"sat needs a sentence; the term has arity {t.arity}")
    note = ""
    if args.solver == "oracle" or (args.solver == "auto" and not _complete_solver(t)):
        bound = fragment_bound(t) if args.solver == "auto" else None
        if bound is not None and bound > ORACLE_FEASIBLE:
            note = f"oracle run to the fragment bound {bound}: feasible only for tiny terms"
    try:
        v = solve(t, args.solver, max_size=args.max_size, timeout=args.timeout, trace=args.trace)
    except TermError as e:
        # fragment/solver mismatch
        print(f"ofl sat: {e}", file=sys.stderr)
        return EXIT_USAGE
    note = "; ".join(x for x in (v.note, note) if x)
    model = None
    if v.status == SAT:
        model = Structure(v.model.n, {k: v.model.rel(k, ar) for k, ar in vocab.items()})
        if args.certify:
            Path(args.certify).write_text(model.dumps() + "\n", encoding="utf-8")
            back = Structure.load(args.certify, vocab)
            if not satisfied(back, t):
                print("ofl sat: written certificate does not satisfy the term", file=sys.stderr)
                return 5
    trace = list(v.trace) if args.trace else []
    stats = {k: v.stats[k] for k in sorted(v.stats) if k != "time"}
    lines = trace + [v.status + (f" (size {model.n})" if model is not None else "")]
    if note:
        lines.append(f"# {note}")
    if model is not None:
        lines.append(model.dumps())
        if args.certify:
            lines.append(f"# certificate written to {args.certify} and re-checked")
    _emit(args, {"status": v.status, "model": model.to_json() if model is not None else None,
                 "note": note, "stats": stats, "trace": trace, "certificate": args.certify if model else None},
          "\n".join(lines))
    return EXIT[v.status]


def _complete_solver(t) -> bool:
    from .solvers import pick_solver
    return pick_solver(t) != "oracle"


def cmd_nf(args) -> int:
    t, vocab = _term(args)
    branches = to_normal_form(t, vocab)
    m = len(branches)
    chunks = []
    for k, nf in enumerate(branches, 1):
        head = f"branch {k}/{m} ({nf.kind}; {len(nf.existentials)} existential, {len(nf.universals)} universal)"
        chunks.append(dumps_term_file(nf.to_term(), nf.vocab, head))
    _emit(args, {"branches": [{"kind": nf.kind, "vocab": nf.vocab.text(), "term": str(nf.to_term())}
                              for nf in branches]}, "".join(chunks))
    return 0


def cmd_translate(args) -> int:
    from . import reductions as red

    kind = args.kind
    src = args.expr if args.expr is not None else (_read(args.input) if args.input else None)
    if kind in ("modal", "s52", "ol", "tiling") and src is None:
        raise UsageError(f"translate {kind} needs an input file (or '-') or --expr")
    if kind == "modal":
        t, vocab = red.modal_to_term(red.parse_modal(src))
    elif kind == "s52":
        t, vocab = red.s52_to_term(red.parse_modal(src))
    elif kind == "ol":
        from .terms import vocabulary_of
        t = red.ol_to_term(src.strip())
        vocab = vocabulary_of(t)
    elif kind == "tiling":
        t, vocab = red.tiling_to_term(red.tiles_from_json(json.loads(src)))
    elif kind == "grid":
        t, vocab = red.grid_sentence(), red.GRID_VOCAB
    else:
        if args.c_free:
            t, vocab = red.infinity_axiom_c_free(), red.C_FREE_VOCAB
        else:
            t, vocab = red.infinity_axiom(), red.INFINITY_VOCAB
    _emit(args, {"kind": kind, "vocab": vocab.text(), "term": str(t),
                 "operators": format_ops(operators_used(t))}, dumps_term_file(t, vocab, f"translate {kind}"))
    return 0


def cmd_certify(args) -> int:
    t, vocab = _term(args)
    if t.arity != 0:
        raise UsageError(f"certify needs a sentence; the term has arity {t.arity}")
    A = Structure.from_json(json.loads(_read(args.model)), vocab)
    ok = satisfied(A, t)
    _emit(args, {"valid": ok, "size": A.n}, f"{'valid' if ok else 'INVALID'} model of size {A.n}")
    return 0 if ok else 1


def cmd_fuzz(args) -> int:
    from .fuzz import run_fuzz

    seed = _seed(args)
    suites = args.suite or ["ordered", "onedim"]
    rep = run_fuzz(seed, args.count, args.laws, suites, failures_dir=args.failures)
    extra = ""
    if args.figures:
        from .plotting import save_report_figures
        paths = save_report_figures(rep, args.figures)
        extra = "".join(f"figure {p}\n" for p in paths)
    if args.report:
        Path(args.report).write_text(rep.dumps(), encoding="utf-8")
    if args.json:
        print(rep.dumps().rstrip("\n"))
    else:
        print((rep.text() + extra).rstrip("\n"))
    return 0 if rep.ok else 1


# -- argument parsing ---------------------------------------------------------------

def _term_args(p, positional=True):
    if positional:
        p.add_argument("term", nargs="?", help="term file ('-' for stdin)")
    p.add_argument("-e", "--expr", help="term text instead of a file")
    p.add_argument("--vocab", help="vocabulary for --expr, e.g. 'R/2, P/1'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    ap = _Parser(prog="ofl", description="Relational-algebra terms for ordered fragments of first-order logic.")
    ap.add_argument("--version", action="version", version=f"ofl {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and print a term")
    _term_args(p)
    p.add_argument("--desugar", action="store_true", help="expand ∪, ⋅∪, ∀, ∀₁, ∀₀")

    p = sub.add_parser("classify", parents=[common], help="fragment and complexity of a term")
    _term_args(p)

    p = sub.add_parser("eval", parents=[common], help="evaluate a term on a structure")
    _term_args(p)
    p.add_argument("--structure", "-s", required=True, help="structure JSON file")

    p = sub.add_parser("sat", parents=[common], help="decide satisfiability")
    _term_args(p)
    p.add_argument("--solver", choices=("auto", "oracle", "ordered", "onedim"), default="auto")
    p.add_argument("--max-size", type=int, default=4, help="oracle search size (default 4)")
    p.add_argument("--timeout", type=float, default=None, help="oracle time limit in seconds")
    p.add_argument("--certify", metavar="PATH", help="write the model here and re-check it")
    p.add_argument("--trace", action="store_true", help="print the solver's guesses")

    p = sub.add_parser("nf", parents=[common], help="normal-form branches of a sentence")
    _term_args(p)

    p = sub.add_parser("translate", parents=[common], help="build a term from another formalism")
    p.add_argument("kind", choices=("modal", "s52", "ol", "tiling", "grid", "infinity"))
    p.add_argument("input", nargs="?", help="formula or tile JSON file ('-' for stdin)")
    p.add_argument("-e", "--expr", help="input text instead of a file")
    p.add_argument("--c-free", action="store_true", help="infinity: the variant without C")

    p = sub.add_parser("certify", parents=[common], help="check a model against a sentence")
    _term_args(p)
    p.add_argument("--model", "-m", required=True, help="structure JSON file")

    p = sub.add_parser("fuzz", parents=[common], help="differential and law fuzzing")
    p.add_argument("--seed", type=int, default=0, help="base seed (OFL_SEED overrides)")
    p.add_argument("--count", type=int, default=100, help="normal forms per suite")
    p.add_argument("--laws", type=int, default=1000, help="(term, structure) pairs for the law suite")
    p.add_argument("--suite", action="append", choices=("ordered", "onedim"))
    p.add_argument("--failures", metavar="DIR", help="write disagreeing instances here")
    p.add_argument("--figures", metavar="DIR", help="render report figures here")
    p.add_argument("--report", metavar="PATH", help="also write the JSON report here")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    handler = globals()[f"cmd_{args.command}"]
    try:
        return handler(args)
    except UsageError as e:
        print(f"ofl {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TermError, FOSyntaxError, ValueError, KeyError, json.JSONDecodeError, OSError) as e:
        print(f"ofl {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
