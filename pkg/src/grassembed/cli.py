"""Command-line interface.

Every command writes ``key=value`` lines to standard output. Exit codes:
0 success or verified, 1 verified-false, 2 usage or format error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import acceptance, embeddings, formats
from .errors import (BudgetExceeded, DimensionError, FieldError, FormatError,
                     NotAnEmbeddingError)
from .grassmann import GrassmannGraph, export_graph
from .semilinear import DEFAULT_BUDGET

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _bool(b) -> str:
    return "true" if b else "false"


def _rows(rows) -> str:
    return ";".join(",".join(map(str, r)) for r in rows) or "-"


def _read(path) -> str:
    with open(path) as fh:
        return fh.read()


def _write(path, text, out):
    if path is None or path == "-":
        out.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _subspace_from_file(path):
    M = formats.read_matrix(_read(path))
    from .linalg import Subspace
    return Subspace.span(M.field, M.ncols, M.rows)


# -- commands ------------------------------------------------------------------------

def cmd_gen(args, out):
    G = GrassmannGraph(args.q, args.n, args.k)
    _write(args.out, export_graph(G, args.format), out)
    if args.out not in (None, "-"):
        out.write(f"vertices={G.order}\nedges={G.edge_count}\nout={args.out}\n")
    return EXIT_OK


def cmd_stats(args, out):
    G = GrassmannGraph(args.q, args.n, args.k)
    out.write(f"field={G.field.header()}\n")
    out.write(f"vertices={G.order}\nedges={G.edge_count}\ndegree={G.degree}\n")
    out.write(f"diameter={G.diameter}\nstar_size={G.star_size}\ntop_size={G.top_size}\n")
    return EXIT_OK


def cmd_construct(args, out):
    l = formats.read_semilinear(_read(args.map))
    S = _subspace_from_file(args.subspace)
    if args.type == "A":
        f = embeddings.construct_type_A(S, l, args.k)
    elif args.type == "B":
        f = embeddings.construct_type_B(S, l, args.k)
    else:
        if args.outer is None:
            raise _UsageError("--type balanced needs --outer U.mat")
        U = _subspace_from_file(args.outer)
        f = embeddings.construct_balanced(S, U, l, args.k, args.flavor)
    text = formats.write_emb(f)
    if args.out in (None, "-"):
        out.write(text)
        return EXIT_OK
    _write(args.out, text, out)
    d, c = f.domain, f.codomain
    out.write(f"type={args.type}\ndomain={d.q},{d.n},{d.k}\ncodomain={c.q},{c.n},{c.k}\n")
    out.write(f"vertices={d.order}\nout={args.out}\n")
    return EXIT_OK


def cmd_verify(args, out):
    f = formats.read_emb(_read(args.file))
    rep = embeddings.verify(f)
    out.write(f"injective={_bool(rep.injective)}\n")
    out.write(f"adjacency_forward={_bool(rep.adjacency_forward)}\n")
    out.write(f"adjacency_backward={_bool(rep.adjacency_backward)}\n")
    out.write(f"isometric={_bool(rep.isometric)}\ntype={rep.type}\n")
    if rep.field_mismatch:
        out.write("note=domain and codomain fields differ\n")
    for w in rep.witnesses:
        out.write(f"witness={' '.join(map(str, w))}\n")
    return EXIT_OK if rep.isometric else EXIT_FALSE


def cmd_decompose(args, out):
    f = formats.read_emb(_read(args.file))
    try:
        dec = embeddings.decompose(f, dualize=args.dualize)
    except NotAnEmbeddingError as exc:
        out.write(f"decomposable=false\nreason={exc}\n")
        return EXIT_FALSE
    l = dec.inner_map
    out.write(f"decomposable=true\ntype={dec.type}\nk={dec.k}\n")
    out.write(f"dualized_domain={_bool(dec.dualized_domain)}\n")
    if dec.S is not None:
        out.write(f"S_dim={dec.S.dim}\nS={_rows(dec.S.rows)}\n")
    if dec.U is not None:
        out.write(f"U_dim={dec.U.dim}\nU={_rows(dec.U.rows)}\n")
    out.write(f"sigma={l.sigma.image_of_generator}\nmap_rows={_rows(l.rows)}\n")
    if args.out_map:
        _write(args.out_map, formats.write_semilinear(l), out)
    return EXIT_OK


def cmd_rigidity(args, out):
    f = formats.read_emb(_read(args.file))
    rep = embeddings.check_l_rigidity(f, budget=args.budget)
    out.write(f"rigid={_bool(rep.rigid)}\ntype={rep.type}\n")
    out.write(f"generators={len(rep.checked_generators)}\n")
    out.write(f"failures={','.join(map(str, rep.failures)) or '-'}\n")
    for gi in rep.failures:
        out.write(f"failing_generator={_rows(rep.checked_generators[gi].rows)}\n")
    return EXIT_OK if rep.rigid else EXIT_FALSE


def cmd_feasibility(args, out):
    rep = embeddings.feasibility(args.q, args.n, args.k, args.q2, args.n2, args.k2)
    for key, val in rep.items():
        out.write(f"{key}={_bool(val)}\n")
    return EXIT_OK


def cmd_selftest(args, out):
    if args.list:
        for c in acceptance.CRITERIA:
            out.write(f"criterion {c.number}: {c.name} (limit {c.limit:g}s)\n")
        return EXIT_OK
    out.write(f"seed={args.seed}\n")
    results = acceptance.run(args.only, seed=args.seed, out=lambda s: out.write(s + "\n"))
    passed = sum(r.passed for r in results)
    out.write(f"passed={passed}\nfailed={len(results) - passed}\n")
    return EXIT_OK if passed == len(results) else EXIT_FALSE


# -- parser -----------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help=f"seed for random catalogs (default {acceptance.DEFAULT_SEED})")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="cap on internal parallelism (the library runs sequentially)")
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                   help=f"cap on search sizes (default {DEFAULT_BUDGET})")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return p


def _grade_args(p, suffix=""):
    for name in ("q", "n", "k"):
        p.add_argument(f"--{name}{suffix}", type=int, required=True)


def build_parser():
    common = _common()
    parser = _Parser(prog="grassembed", parents=[common],
                     description="Isometric embeddings between Grassmann graphs.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen", parents=[common], help="export a Grassmann graph")
    _grade_args(p)
    p.add_argument("--format", choices=("edge-list", "dot"), default="edge-list")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", parents=[common], help="invariants of a Grassmann graph")
    _grade_args(p)
    p.set_defaults(func=cmd_stats)

    emb = sub.add_parser("embed", parents=[common], help="embedding operations")
    esub = emb.add_subparsers(dest="action", parser_class=_Parser)
    esub.required = True

    p = esub.add_parser("construct", parents=[common])
    p.add_argument("--type", choices=("A", "B", "balanced"), required=True)
    p.add_argument("--map", required=True, help="semilinear map file")
    p.add_argument("--subspace", required=True, help="matrix file spanning S (A, balanced) or U (B)")
    p.add_argument("--outer", help="matrix file spanning U (balanced)")
    p.add_argument("--flavor", choices=("quotient", "dual-quotient"), default="quotient")
    p.add_argument("--k", type=int, required=True, help="domain grade")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = esub.add_parser("verify", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = esub.add_parser("decompose", parents=[common])
    p.add_argument("file")
    p.add_argument("--dualize", action="store_true", help="dualize the domain when k > n-k")
    p.add_argument("--out-map", help="write the recovered semilinear map here")
    p.set_defaults(func=cmd_decompose)

    p = esub.add_parser("rigidity", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_rigidity)

    p = esub.add_parser("feasibility", parents=[common])
    _grade_args(p)
    _grade_args(p, "2")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--list", action="store_true", help="list criteria without running")
    p.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    p.set_defaults(func=cmd_selftest)
    return parser


def _normalize(argv):
    """Accept ``embed-verify`` style aliases for ``embed verify``."""
    out = []
    for i, a in enumerate(argv):
        if a.startswith("embed-") and not any(x.startswith("embed") for x in out):
            out += ["embed", a[len("embed-"):]]
        else:
            out.append(a)
    return out


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = _normalize(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    args.seed = getattr(args, "seed", acceptance.DEFAULT_SEED)
    args.budget = getattr(args, "budget", DEFAULT_BUDGET)
    args.threads = getattr(args, "threads", 1)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING)
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        out.write(f"error=budget exceeded\nbudget={exc.budget}\n")
        sys.stderr.write(f"{exc}\n")
        return EXIT_BUDGET
    except (FormatError, FieldError, DimensionError, _UsageError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NotAnEmbeddingError as exc:
        out.write(f"error={exc}\n")
        return EXIT_FALSE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
