"""Command-line front end.

Exit status: 0 when every check passes, 1 on a mathematical violation,
2 when the input cannot be parsed or fails validation.

Structure files use the line-based format described in
``artifact.fileformat``.  Matrices for ``snf`` use the coordinate format of
``artifact.linalg.write_matrix``::

    ROWS COLS NNZ
    i j value        (0-based, one line per nonzero entry)

Trees print in a nested-list form::

    tree   := ["~"] leaf | ["~"] "(" [flavours] tree tree* ")"
    leaf   := integer label
    flavours := "{" name* "}"

A leading ``~`` marks the edge into that node as dashed.  Children of
unordered trees are sorted by their smallest leaf label.
"""

import argparse
import sys

from . import co as co_mod
from .documents import build
from .errors import ArtifactError
from .fileformat import load_document
from .hochschild import check_ainfty, hochschild_cohomology
from .linalg import homology, invariant_factors, read_matrix
from .linfty import check_linfty_morphism, check_linfty_relations, check_symmetry
from .ops import default_jobs
from .report import add_verdict, new_report, render
from .telescope import build_telescope, compare_with_colimit, telescope_homology
from .trees import (
    Flavouring,
    enumerate_stable_trees,
    format_tree,
    internal_edges,
    split_table,
    stratum_dimension,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def parse_caps(items):
    caps = {}
    for item in items or []:
        key, _, val = item.partition("=")
        if key not in ("d", "k", "length") or not val.isdigit():
            raise ArtifactError(f"bad cap {item!r}; use d=K, k=K or length=K")
        caps[key] = int(val)
    return caps


def parse_window(text):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise ArtifactError(f"bad window {text!r}; use lo..hi") from None


def _homology_rows(hom):
    rows = []
    for deg in sorted(hom):
        g = hom[deg]
        if isinstance(deg, tuple):
            deg = deg[0] if len(deg) == 1 else list(deg)
        rows.append({"degree": deg, "rank": g.rank,
                     "torsion": list(g.torsion)})
    return rows


def cmd_verify(args):
    doc = load_document(args.path)
    if doc.kind != args.kind:
        raise ArtifactError(f"file declares kind {doc.kind!r}, --kind is {args.kind!r}")
    caps = parse_caps(args.caps)
    jobs = args.jobs
    obj = build(doc)
    rep = new_report("verify", kind=args.kind, input=args.path, caps=caps)
    D = caps.get("d", 4)
    if args.kind == "linfty":
        add_verdict(rep, check_symmetry(obj, jobs=jobs))
        add_verdict(rep, check_linfty_relations(obj, D, jobs=jobs))
        if obj.ops_tilde:
            v = check_linfty_relations(obj.tilde(), D, jobs=jobs)
            v.check += " (unmodified operations)"
            add_verdict(rep, v)
    elif args.kind == "ainfty":
        add_verdict(rep, check_ainfty(obj))
        if obj.mu_tilde is not None:
            add_verdict(rep, check_ainfty(obj, tilde=True))
    elif args.kind == "morphism":
        for L in (obj.source, obj.target):
            v = check_linfty_relations(L, D, jobs=jobs)
            v.check += f" ({L.name})"
            add_verdict(rep, v)
        add_verdict(rep, check_linfty_morphism(obj, D, jobs=jobs))
    elif args.kind == "co":
        dd, kk = co_mod.default_relation_caps(obj)
        max_d, max_k = caps.get("d", dd), caps.get("k", kk)
        v = check_linfty_relations(obj.source.tilde(), max(D, 1), jobs=jobs)
        v.check += " (closed side)"
        add_verdict(rep, v)
        add_verdict(rep, check_ainfty(obj.target, tilde=obj.target.mu_tilde is not None))
        add_verdict(rep, co_mod.check_co_symmetry(obj, jobs=jobs))
        rel = co_mod.check_co_relations(obj, max_d, max_k, jobs=jobs)
        add_verdict(rep, rel)
        mor = co_mod.check_co_morphism(obj, max_arity=max(max_d, 1), length_cap=caps.get("length"), jobs=jobs)
        add_verdict(rep, mor)
        rep["relation_forms_agree"] = rel.ok == mor.ok
    return rep


def cmd_homology(args):
    doc = load_document(args.path)
    rep = new_report("homology", mode=args.mode, input=args.path)
    if args.mode == "complex":
        if doc.kind != "complex":
            raise ArtifactError("complex mode needs a file of kind complex")
        rep["homology"] = _homology_rows(homology(build(doc)))
    elif args.mode == "telescope":
        if doc.kind != "system":
            raise ArtifactError("telescope mode needs a file of kind system")
        S = build(doc)
        rep["homology"] = _homology_rows(telescope_homology(build_telescope(S)))
        rep["comparison"] = compare_with_colimit(S)
    else:
        if doc.kind != "ainfty":
            raise ArtifactError("hochschild mode needs a file of kind ainfty")
        if args.window is None:
            raise ArtifactError("hochschild mode needs --window lo..hi")
        cat = build(doc)
        v = check_ainfty(cat)
        if not v:
            raise ArtifactError("the category fails the A-infinity relations; its Hochschild complex is not a complex")
        hh = hochschild_cohomology(cat, parse_window(args.window), args.length_cap)
        rep["window"] = args.window
        rep["homology"] = [{"degree": n, "rank": g.rank, "torsion": list(g.torsion)} for n, g in sorted(hh.items())]
    if args.window and args.mode != "hochschild":
        lo, hi = parse_window(args.window)
        rep["homology"] = [r for r in rep["homology"] if isinstance(r["degree"], int) and lo <= r["degree"] <= hi]
    return rep


def _flavouring(text):
    if not text:
        return None
    names, p = [], {}
    for item in text.split(","):
        f, _, leaf = item.partition(":")
        if not f or not leaf.isdigit() or f in p:
            raise ArtifactError(f"bad flavour {item!r}; use name:leaf,...")
        names.append(f)
        p[f] = int(leaf)
    return Flavouring(tuple(names), p)


def cmd_trees(args):
    flav = _flavouring(args.flavours)
    if flav is not None and args.kind != "flavoured":
        raise ArtifactError("--flavours needs --kind flavoured")
    trees = enumerate_stable_trees(args.kind, args.leaves, args.interior, flav, args.max_internal_edges)
    by_edges, by_dim, listing = {}, {}, []
    for t in trees:
        e = internal_edges(t)
        dim = stratum_dimension(t, args.kind, flav)
        by_edges[str(e)] = by_edges.get(str(e), 0) + 1
        by_dim[str(dim)] = by_dim.get(str(dim), 0) + 1
        if args.list:
            listing.append({"tree": format_tree(t), "dimension": dim})
    rep = new_report("trees", kind=args.kind, leaves=args.leaves)
    if args.kind == "two_colored":
        rep["interior"] = args.interior
    if flav is not None:
        rep["flavours"] = args.flavours
    rep["trees"] = {"count": len(trees), "by_internal_edges": by_edges, "by_dimension": by_dim}
    if args.list:
        rep["listing"] = listing
    if args.kind == "unordered":
        rep["splits"] = split_table(args.leaves)
    return rep


def cmd_snf(args):
    with open(args.path, encoding="utf-8") as fh:
        M = read_matrix(fh.read())
    f = invariant_factors(M)
    return new_report("snf", input=args.path, rows=M.rows, cols=M.cols, rank=len(f), invariant_factors=f)


def build_parser():
    p = argparse.ArgumentParser(prog="artifact", description="Exact checks for L-infinity/A-infinity data.")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default: $ARTIFACT_JOBS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
        sp.add_argument("--jobs", type=int, default=argparse.SUPPRESS)

    v = sub.add_parser("verify", help="run the relation checks for a structure file")
    v.add_argument("path")
    v.add_argument("--kind", required=True, choices=("linfty", "ainfty", "morphism", "co"))
    v.add_argument("--caps", nargs="*", default=[], metavar="KEY=K", help="d=K k=K length=K")
    common(v)

    h = sub.add_parser("homology", help="homology of a complex, telescope or Hochschild window")
    h.add_argument("path")
    h.add_argument("--mode", required=True, choices=("complex", "telescope", "hochschild"))
    h.add_argument("--window", default=None, metavar="LO..HI")
    h.add_argument("--length-cap", type=int, default=None)
    common(h)

    t = sub.add_parser("trees", help="enumerate stable trees")
    t.add_argument("--kind", required=True, choices=("ordered", "unordered", "two_colored", "flavoured"))
    t.add_argument("--leaves", type=int, required=True)
    t.add_argument("--interior", type=int, default=0, help="dashed leaves of two-colored trees")
    t.add_argument("--flavours", default=None, metavar="f:LEAF,...")
    t.add_argument("--max-internal-edges", type=int, default=None)
    t.add_argument("--list", action="store_true")
    common(t)

    s = sub.add_parser("snf", help="invariant factors of a matrix in coordinate format")
    s.add_argument("path")
    common(s)
    return p


COMMANDS = {"verify": cmd_verify, "homology": cmd_homology, "trees": cmd_trees, "snf": cmd_snf}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs is None:
        args.jobs = default_jobs()
    try:
        rep = COMMANDS[args.command](args)
    except (ArtifactError, OSError, ValueError) as e:
        rep = new_report(args.command, status="error", error=str(e))
        sys.stdout.write(render(rep, args.format))
        return EXIT_INPUT
    sys.stdout.write(render(rep, args.format))
    return EXIT_OK if rep["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
