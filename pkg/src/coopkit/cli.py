"""Batch verification and enumeration interface.

Subcommands
    trees enum          list labeled trees on n vertices
    chains fiber        enumerate chain classes over a fixed top set
    compose eval        evaluate composition products / oracle comparison
    verify graph        axiom suite for the unoriented graph cooperad
    verify dirgraph     axiom suite for the directed graph cooperad
    verify cdc          dimension-1 agreement, homology, fragment axioms
    verify custom       axiom suite for a cooperad loaded from JSON
    cosimplicial        cosimplicial identities of the iterated products
    coalgebra verify    coalgebra axioms and iterated-coaction paths

Exit codes: 0 all checks pass, 1 at least one violation, 2 usage or
parse error.  COOPKIT_THREADS caps the worker count (checks run on a
single worker; the cap is honored trivially and kept for compatibility).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .wreath import FinSet, Atom, encode_chain, enumerate_fiber, parse_chain
from .zmodule import FreeMod, LinMap
from .symseq import evaluate, symseq_from_json
from .compose import (
    KanModule, StructuralError, closed_form_compose, kan_extension,
)
from .cooperad import (
    Report, cooperad_from_json, matrix_from_json, verify_cooperad,
    verify_cosimplicial, verify_paren_compat,
)
from .corpus import random_symseq
from . import graphco
from . import cdc as cdcmod
from .comodule import CoalgebraObj, coalgebra_delta_n, verify_coalgebra


class UsageError(Exception):
    pass


def _threads():
    raw = os.environ.get("COOPKIT_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError("COOPKIT_THREADS must be an integer")
    if n < 1:
        raise UsageError("COOPKIT_THREADS must be >= 1")
    return n


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError("%s: %s" % (path, exc.strerror or exc))
    except json.JSONDecodeError as exc:
        raise UsageError("%s:%d:%d: %s" % (path, exc.lineno, exc.colno,
                                           exc.msg))


def _emit(payload, args):
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = payload_to_text(payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def payload_to_text(payload):
    lines = []
    if "listing" in payload:
        lines.extend(payload["listing"])
    for entry in payload.get("results", []):
        status = entry["status"].upper()
        line = "%-8s %-20s %s" % (status, entry["check"], entry["instance"])
        if entry.get("witness") is not None and entry["status"] == "fail":
            line += "  witness=%s" % json.dumps(entry["witness"],
                                                sort_keys=True)
        lines.append(line)
    if "summary" in payload:
        s = payload["summary"]
        lines.append("checks=%d failures=%d excluded=%d"
                     % (s.get("checks", 0), s.get("failures", 0),
                        s.get("excluded", 0)))
    return "\n".join(lines) + "\n"


def _report_payload(command, config, report):
    return {
        "command": command,
        "config": config,
        "results": report.entries,
        "summary": {"checks": len(report.entries),
                    "failures": len(report.failures()),
                    "excluded": len(report.excluded())},
    }


def _finish(report, payload, args):
    _emit(payload, args)
    return 0 if report.ok else 1


def _config(args, **extra):
    cfg = {"max_set": getattr(args, "max_set", None),
           "max_n": getattr(args, "max_n", None),
           "max_arity": getattr(args, "max_arity", None),
           "seed": getattr(args, "seed", None),
           "threads": _threads()}
    cfg.update(extra)
    return {k: v for k, v in cfg.items() if v is not None}


def _builtin_cooperad(which, max_arity):
    if which == "graph":
        return graphco.graph_cooperad(max_arity)
    if which == "dirgraph":
        return graphco.dirgraph_cooperad(max_arity)
    raise UsageError("unknown cooperad %r" % which)


# --- subcommand handlers ----------------------------------------------------

def cmd_trees_enum(args):
    s = FinSet.standard(args.n)
    trees = graphco.enumerate_trees(s)
    listing = [graphco.encode_graph(g) for g in trees]
    payload = {"command": "trees enum", "config": _config(args, n=args.n),
               "count": len(trees), "listing": listing}
    _emit(payload, args)
    return 0


def cmd_chains_fiber(args):
    labels = [t.strip() for t in args.set.split(",") if t.strip()]
    top = FinSet(Atom(int(t) if t.lstrip("-").isdigit() else t)
                 for t in labels)
    bounds = [int(b) for b in args.bounds.split(",")] if args.bounds else []
    if len(bounds) != args.n - 1:
        raise UsageError("need %d bounds for a chain of length %d"
                         % (args.n - 1, args.n))
    classes = enumerate_fiber(top, args.n, bounds)
    listing = ["%s  aut=%d" % (encode_chain(fc.representative),
                               len(fc.automorphisms))
               for fc in classes]
    payload = {"command": "chains fiber",
               "config": _config(args, n=args.n, bounds=bounds),
               "count": len(classes), "listing": listing}
    _emit(payload, args)
    return 0


def cmd_compose_eval(args):
    rep = Report("compose eval")
    if args.corpus:
        rng = random.Random(args.seed)
        for trial in range(args.corpus):
            a = random_symseq(rng, "A%d" % trial, max_arity=3, max_rank=2)
            b = random_symseq(rng, "B%d" % trial, max_arity=3, max_rank=2)
            for n in range(0, args.max_arity + 1):
                kan = kan_extension([a, b], FinSet.standard(n))
                cf = closed_form_compose(a, b, n)
                rep.add("oracle-equality", "trial=%d n=%d" % (trial, n),
                        kan.rank == cf.rank,
                        None if kan.rank == cf.rank else
                        {"kan": kan.rank, "closed_form": cf.rank})
    else:
        if not args.seqs:
            raise UsageError("compose eval needs --seqs or --corpus")
        seqs = [symseq_from_json(_load_json(p), name=p) for p in args.seqs]
        n = args.arity
        kan = kan_extension(seqs, FinSet.standard(n))
        result = {"kan_rank": kan.rank}
        if len(seqs) == 2:
            cf = closed_form_compose(seqs[0], seqs[1], n)
            result["closed_form_rank"] = cf.rank
            rep.add("oracle-equality", "n=%d" % n, kan.rank == cf.rank,
                    None if kan.rank == cf.rank else result)
        else:
            rep.add("evaluated", "n=%d rank=%d" % (n, kan.rank), True)
    payload = _report_payload("compose eval", _config(args), rep)
    return _finish(rep, payload, args)


def cmd_verify(args):
    max_set = args.max_set
    if args.target == "custom":
        if not args.file:
            raise UsageError("verify custom needs a cooperad JSON file")
        try:
            coop = cooperad_from_json(_load_json(args.file),
                                      name=os.path.basename(args.file))
        except (ValueError, KeyError) as exc:
            raise UsageError("%s: %s" % (args.file, exc))
        report = verify_cooperad(coop, max_set)
    elif args.target == "cdc":
        report = _verify_cdc(args)
    else:
        max_arity = args.max_arity or max_set
        coop = _builtin_cooperad(args.target, max_arity)
        report = verify_cooperad(coop, max_set)
    payload = _report_payload("verify %s" % args.target, _config(args), report)
    return _finish(report, payload, args)


def _verify_cdc(args):
    max_set = args.max_set
    tri = args.max_triangles
    report = Report("verify_cdc")
    # dimension-1 fragment agrees with the graph cooperad
    gseq = graphco.graph_symseq(max_set)
    cseq = cdcmod.cdc_symseq(max_set, max_triangles=0)
    for n in range(max_set + 1):
        ok = (gseq.value(n).rank == cseq.value(n).rank
              and [g.images for g in gseq.gens(n)]
              == [g.images for g in cseq.gens(n)])
        report.add("dim1-values", "arity=%d" % n, ok)
    from .cooperad import enumerate_canonical_two_chains
    for ch in enumerate_canonical_two_chains(max_set, max_set):
        dg = graphco.delta_graph(ch, gseq)
        dc = cdcmod.delta_cdc(ch, cseq)
        report.add("dim1-cocomposition", encode_chain(ch), dg.mat == dc.mat)
    # admitted 2-dimensional complexes have vanishing reduced homology
    for n in range(3, max_set + 1):
        for cx in cdcmod.enumerate_complexes(FinSet.standard(n), tri):
            h = cdcmod.homology_ranks(cx)
            ok = (h["connected"] and h["h1_free"] == 0
                  and not h["h1_torsion"] and h["h2_free"] == 0)
            report.add("admitted-homology", repr(cx.tag()), ok)
    # cooperad axioms on the fragment where contractions stay defined
    frag_set = min(max_set, 3)
    coop = cdcmod.cdc_cooperad(frag_set, max_triangles=tri)
    sub = verify_cooperad(coop, frag_set,
                          soft_errors=(cdcmod.StructuralContractionError,))
    report.extend(sub)
    return report


def cmd_cosimplicial(args):
    if args.which == "custom":
        if not args.file:
            raise UsageError("cosimplicial custom needs a cooperad JSON file")
        coop = cooperad_from_json(_load_json(args.file),
                                  name=os.path.basename(args.file))
    else:
        coop = _builtin_cooperad(args.which, args.max_arity or args.max_set)
    report = verify_cosimplicial(coop, args.max_n, args.max_set)
    payload = _report_payload("cosimplicial", _config(args), report)
    return _finish(report, payload, args)


def cmd_coalgebra_verify(args):
    data = _load_json(args.file)
    which = data.get("cooperad", "graph")
    max_arity = data.get("max_arity", 3)
    if isinstance(which, dict):
        coop = cooperad_from_json(which, name="inline")
    else:
        coop = _builtin_cooperad(which, max_arity)
    carrier = FreeMod(tuple(data["carrier"]))
    from .symseq import coefficient_seq
    from .compose import eval_tensor
    from .wreath import Chain, SetMap, EMPTY_SET
    coeff = coefficient_seq(carrier, name="c")
    table = {}
    for key, matdata in data.get("coaction", {}).items():
        k = int(key)
        std = Chain((FinSet.standard(k), EMPTY_SET),
                    (SetMap(EMPTY_SET, FinSet.standard(k), {}),))
        tv = eval_tensor([coop.seq, coeff], std)
        dom = evaluate(coeff, EMPTY_SET)
        mat = matrix_from_json(matdata)
        if mat.nrows != tv.value.rank or mat.ncols != dom.rank:
            raise UsageError(
                "coaction %s has shape %dx%d, expected %dx%d"
                % (key, mat.nrows, mat.ncols, tv.value.rank, dom.rank))
        table[k] = LinMap(dom, tv.value, mat)
    coalg = CoalgebraObj(coop, carrier, table,
                         name=os.path.basename(args.file))
    report = verify_coalgebra(coalg, args.max_set)
    if report.ok:
        try:
            coalgebra_delta_n(coalg, args.delta_n)
            report.add("iterated-coaction", "n<=%d path-independent"
                       % args.delta_n, True)
        except StructuralError as exc:
            report.add("iterated-coaction", "n<=%d" % args.delta_n, False,
                       str(exc))
    payload = _report_payload("coalgebra verify", _config(args), report)
    return _finish(report, payload, args)


# --- argument parsing ---------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to a file")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(
        prog="coopkit",
        description="exact verification of cooperad structures presented "
                    "as symmetric sequences")
    sub = parser.add_subparsers(dest="command", required=True)

    trees = sub.add_parser("trees", help="labeled tree utilities")
    trees_sub = trees.add_subparsers(dest="sub", required=True)
    t_enum = trees_sub.add_parser("enum", parents=[common],
                                  help="enumerate labeled trees")
    t_enum.add_argument("--n", type=int, required=True)
    t_enum.set_defaults(func=cmd_trees_enum)

    chains = sub.add_parser("chains", help="chain utilities")
    chains_sub = chains.add_subparsers(dest="sub", required=True)
    c_fiber = chains_sub.add_parser("fiber", parents=[common],
                                    help="chain classes over a top set")
    c_fiber.add_argument("--set", required=True,
                         help="comma separated top-level atoms")
    c_fiber.add_argument("--n", type=int, default=2, help="chain length")
    c_fiber.add_argument("--bounds", default="",
                         help="comma separated level size caps")
    c_fiber.set_defaults(func=cmd_chains_fiber)

    comp = sub.add_parser("compose", help="composition products")
    comp_sub = comp.add_subparsers(dest="sub", required=True)
    c_eval = comp_sub.add_parser("eval", parents=[common],
                                 help="evaluate or compare products")
    c_eval.add_argument("--seqs", nargs="*", default=[],
                        help="symmetric sequence JSON files")
    c_eval.add_argument("--arity", type=int, default=2)
    c_eval.add_argument("--corpus", type=int, default=0,
                        help="compare both constructions on N random pairs")
    c_eval.add_argument("--max-arity", dest="max_arity", type=int, default=4)
    c_eval.set_defaults(func=cmd_compose_eval)

    ver = sub.add_parser("verify", parents=[common],
                         help="axiom verification suites")
    ver.add_argument("target", choices=("graph", "dirgraph", "cdc", "custom"))
    ver.add_argument("file", nargs="?", help="cooperad JSON for custom")
    ver.add_argument("--max-set", dest="max_set", type=int, default=4)
    ver.add_argument("--max-arity", dest="max_arity", type=int)
    ver.add_argument("--max-triangles", dest="max_triangles", type=int,
                     default=2)
    ver.set_defaults(func=cmd_verify)

    cosi = sub.add_parser("cosimplicial", parents=[common],
                          help="cosimplicial identities of the tower")
    cosi.add_argument("--which", choices=("graph", "dirgraph", "custom"),
                      default="graph")
    cosi.add_argument("file", nargs="?")
    cosi.add_argument("--max-n", dest="max_n", type=int, default=3)
    cosi.add_argument("--max-set", dest="max_set", type=int, default=4)
    cosi.add_argument("--max-arity", dest="max_arity", type=int)
    cosi.set_defaults(func=cmd_cosimplicial)

    coalg = sub.add_parser("coalgebra", help="coalgebras over cooperads")
    coalg_sub = coalg.add_subparsers(dest="sub", required=True)
    c_ver = coalg_sub.add_parser("verify", parents=[common],
                                 help="verify a coalgebra JSON")
    c_ver.add_argument("file")
    c_ver.add_argument("--max-set", dest="max_set", type=int, default=3)
    c_ver.add_argument("--delta-n", dest="delta_n", type=int, default=3)
    c_ver.set_defaults(func=cmd_coalgebra_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except (ValueError, KeyError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
