"""Command-line surface for profmack.

Commands: group, tower, cb, burnside, span, mackey, sheaf, homdim.  Output is
pretty text by default, canonical JSON with --json (sorted keys, rationals as
"p/q" strings, "schema": 1), TSV for tables with --tsv.  --threads is
accepted for configuration symmetry but evaluation is serial: results are
assembled in canonical order, so outputs are byte-identical for any count.

Exit codes: 0 success, 2 usage error, 3 capacity/depth exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import burnside as bs
from . import cbrank as cb
from . import homdim as hd
from . import mackey as mk
from . import sheaf as sh
from . import tower as tw
from .groups import (
    CapacityError,
    UnknownFamily,
    all_subgroups,
    core,
    normalizer,
    parse_group,
    weyl_group,
)
from .gsets import FiniteGSet, transitive_gset

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3

DEFAULT_DEPTH = int(os.environ.get("PROFMACK_DEPTH", "6"))


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(obj, args, pretty_lines=None):
    if getattr(args, "json", False):
        print(json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ": "),
                         indent=1))
    elif getattr(args, "tsv", False):
        for row in pretty_lines or _flatten_rows(obj):
            print("\t".join(str(c) for c in row))
    else:
        for line in pretty_lines or [json.dumps(_jsonable(obj), sort_keys=True)]:
            if isinstance(line, (list, tuple)):
                print("  ".join(str(c) for c in line))
            else:
                print(line)


def _flatten_rows(obj):
    if isinstance(obj, dict):
        return [[k, json.dumps(_jsonable(v), sort_keys=True)] for k, v in sorted(obj.items())]
    if isinstance(obj, list):
        return [row if isinstance(row, (list, tuple)) else [row] for row in obj]
    return [[obj]]


# ---------------------------------------------------------------------------
# group


def cmd_group_info(args):
    G = parse_group(args.group)
    subs = all_subgroups(G)
    classes = mk.subgroup_conjugacy_classes(G)
    class_of = {}
    for ci, (rep, members) in enumerate(classes):
        for H in members:
            class_of[H] = ci
    rows = []
    for i, H in enumerate(subs):
        W, _ = weyl_group(G, H)
        rows.append({
            "index": i,
            "order": H.order,
            "elements": list(H.elements),
            "class": class_of[H],
            "core_order": core(G, H).order,
            "normalizer_order": normalizer(G, H).order,
            "weyl_order": W.order,
        })
    report = {
        "schema": 1,
        "group": args.group,
        "order": G.order,
        "num_subgroups": len(subs),
        "num_classes": len(classes),
        "subgroups": rows,
    }
    lines = [f"group {args.group}: order {G.order}, {len(subs)} subgroups, "
             f"{len(classes)} classes"]
    for r in rows:
        lines.append(
            f"  #{r['index']} order {r['order']} class {r['class']} "
            f"core {r['core_order']} N {r['normalizer_order']} W {r['weyl_order']}"
        )
    emit(report, args, lines)


# ---------------------------------------------------------------------------
# tower


def cmd_tower_show(args):
    T = tw.builtin_tower(args.tower, args.depth)
    data = tw.tower_to_json(T)
    lines = [f"tower {args.tower} depth {T.depth}"] + [
        f"  level {k}: order {G.order}" for k, G in enumerate(T.levels)
    ]
    emit(data, args, lines)


# ---------------------------------------------------------------------------
# cb


def _space_tree(args) -> cb.SpaceTree:
    T = tw.builtin_tower(args.tower, args.depth)
    return tw.subgroup_space_tower(T)


def verify_rank_json(data: dict) -> list[str]:
    """Re-verify a rank certificate from its JSON alone (no recomputation)."""
    bad = []
    if data.get("schema") != 1:
        bad.append("missing schema")
    verdict = data.get("verdict")
    trace = data.get("trace", [])
    if verdict == "Exact":
        if data.get("rank") != len(trace):
            bad.append("Exact rank does not match trace length")
        if any(not t.get("removed") and "note" not in t for t in trace[:-1]):
            bad.append("a derivative stage removed nothing")
    elif verdict == "Interval":
        if data.get("lo") is None or (data.get("hi") is not None
                                      and data["lo"] > data["hi"]):
            bad.append("interval bounds incoherent")
        if not any("undecided" in t for t in trace):
            bad.append("interval verdict without undecided threads")
    elif verdict == "PerfectHullDetected":
        if not trace or trace[-1].get("note") != "stage equals its derivative":
            bad.append("perfect hull verdict without fixed-point stage")
    else:
        bad.append(f"unknown verdict {verdict!r}")
    if "convention" not in data:
        bad.append("missing convention string")
    return bad


def cmd_cb_rank(args):
    if args.verify:
        with open(args.verify) as fh:
            problems = verify_rank_json(json.load(fh))
        emit({"schema": 1, "verified": not problems, "problems": problems},
             args, [f"verify: {'OK' if not problems else problems}"])
        if problems:
            raise UsageError("certificate failed verification")
        return
    cert = cb.cb_rank(_space_tree(args)).as_dict()
    lines = [f"cb rank [{cert['chain']}]: {cert['verdict']}"
             + (f"({cert['rank']})" if cert["rank"] is not None else
                f" lo={cert['lo']} hi={cert['hi']}")]
    emit(cert, args, lines)


def cmd_cb_heights(args):
    rep = cb.heights(_space_tree(args))
    data = {
        "schema": 1,
        "heights": dict(sorted(rep.heights.items())),
        "lower_bounds": dict(sorted(rep.lower_bounds.items())),
        "hull": sorted(rep.hull),
    }
    lines = [f"  {k}: {v}" for k, v in sorted(rep.heights.items())]
    emit(data, args, lines)


# ---------------------------------------------------------------------------
# burnside / span


def cmd_marks(args):
    R = bs.burnside_ring(parse_group(args.group))
    data = {
        "schema": 1,
        "group": args.group,
        "basis": [f"G/H(order {H.order})" for H in R.basis],
        "marks": R.marks,
        "unit_index": R.unit_index,
    }
    emit(data, args, [list(row) for row in R.marks])


def cmd_burnside_ring(args):
    R = bs.burnside_ring(parse_group(args.group))
    data = {
        "schema": 1,
        "group": args.group,
        "basis_orders": [H.order for H in R.basis],
        "structure": R.structure,
        "marks": R.marks,
        "unit_index": R.unit_index,
    }
    emit(data, args)


def _gset_from_json(G, data) -> FiniteGSet:
    return FiniteGSet(G, tuple(tuple(r) for r in data["act"]),
                      label=data.get("label", ""))


def _span_from_json(G, feet, data) -> bs.Span:
    apex = _gset_from_json(G, data["apex"])
    return bs.Span(feet[0], feet[1], apex, tuple(data["left"]),
                   tuple(data["right"]))


def cmd_span_compose(args):
    with open(args.file) as fh:
        data = json.load(fh)
    if data.get("schema") != 1:
        raise UsageError("span file needs schema 1")
    from .groups import group_from_json

    G = group_from_json(data["group"])
    sets = {k: _gset_from_json(G, v) for k, v in data["gsets"].items()}
    s1d, s2d = data["spans"]
    s1 = _span_from_json(G, (sets[s1d["left_foot"]], sets[s1d["right_foot"]]), s1d)
    s2 = _span_from_json(G, (sets[s2d["left_foot"]], sets[s2d["right_foot"]]), s2d)
    try:
        comp = bs.span_compose(s1, s2)
    except bs.MiddleMismatch as e:
        raise UsageError(str(e)) from None
    canon = comp.canonical()
    out = {
        "schema": 1,
        "canonical": [[list(stab), a, b] for (stab, a, b) in canon],
        "apex_size": comp.apex.size,
    }
    emit(out, args, [f"composite apex size {comp.apex.size}",
                     f"canonical class {out['canonical']}"])


# ---------------------------------------------------------------------------
# mackey


def _parse_mackey(G, sel: str) -> mk.MackeyFunctorQ:
    if sel == "burnside":
        return mk.burnside_mackey(G)
    if sel.startswith("rep:"):
        arg = sel.split(":", 1)[1]
        reps = mk.subgroup_conjugacy_classes(G)
        classes = [rep for rep, _ in reps]
        idx = int(arg)
        if not 0 <= idx < len(classes):
            raise UsageError(f"rep index out of range 0..{len(classes) - 1}")
        H = classes[idx]
        return mk.representable(G, transitive_gset(G, H), name=f"rep:{idx}")
    if sel.startswith("fixedpoint:"):
        arg = sel.split(":", 1)[1]
        irrs = mk.rational_irreducibles(G)
        for V in irrs:
            if V.name == arg:
                return mk.fixed_point_functor(V)
        if arg.isdigit() and int(arg) < len(irrs):
            return mk.fixed_point_functor(irrs[int(arg)])
        raise UsageError(
            f"unknown irreducible {arg!r}; have {[V.name for V in irrs]}"
        )
    raise UsageError(f"unknown mackey selector {sel!r}")


def cmd_mackey_ext(args):
    G = parse_group(args.group)
    M = _parse_mackey(G, args.M)
    N = _parse_mackey(G, args.N)
    dim = mk.ext_mackey(M, N, args.degree)
    out = {
        "schema": 1,
        "group": args.group,
        "M": args.M,
        "N": args.N,
        "degree": args.degree,
        "dimension": dim,
    }
    emit(out, args, [f"Ext^{args.degree}({args.M},{args.N}) = {dim}"])


def cmd_mackey_hom(args):
    G = parse_group(args.group)
    M = _parse_mackey(G, args.M)
    N = _parse_mackey(G, args.N)
    dim = len(mk.hom_space(M, N))
    out = {"schema": 1, "group": args.group, "M": args.M, "N": args.N,
           "dimension": dim}
    emit(out, args, [f"dim Hom({args.M},{args.N}) = {dim}"])


# ---------------------------------------------------------------------------
# sheaf


def _parse_base(sel: str) -> sh.ConvergingBase:
    if sel.startswith("spzp"):
        p = 2
        if ":" in sel:
            p = int(sel.split(":", 1)[1])
        return sh.spzp_base(p)
    raise UsageError(f"unknown base selector {sel!r}")


def _parse_sheaf(base, sel: str) -> sh.ConvSheaf:
    if sel in ("const:Q", "const:1"):
        return sh.constant_sheaf(base, 1)
    if sel.startswith("const:"):
        return sh.constant_sheaf(base, int(sel.split(":", 1)[1]))
    if sel.startswith("sky:omega:"):
        return sh.skyscraper_omega(base, int(sel.rsplit(":", 1)[1]))
    raise UsageError(f"unknown sheaf selector {sel!r}")


def cmd_sheaf_godement(args):
    base = _parse_base(args.base)
    E = _parse_sheaf(base, args.sheaf)
    res = sh.godement_resolution(E, max_n=args.stages)
    stages = [res.stage_stalk_dims(i) for i in range(len(res.stages))]
    violations = sh.stalk_vanishing_check(res, {"isolated": 0, "omega": 1})
    out = {
        "schema": 1,
        "base": args.base,
        "sheaf": args.sheaf,
        "length": res.length,
        "stages": stages,
        "stalk_vanishing_violations": violations,
    }
    lines = [f"Godement resolution of {args.sheaf} over {args.base}: "
             f"length {res.length}"]
    for i, s in enumerate(stages):
        lines.append(f"  I{i}: {s}")
    emit(out, args, lines)


# ---------------------------------------------------------------------------
# homdim


def verify_homdim_json(data: dict) -> list[str]:
    bad = []
    if data.get("schema") != 1:
        bad.append("missing schema")
    verdict = data.get("verdict")
    lo, hi, val = data.get("lower"), data.get("upper"), data.get("value")
    if verdict == "Exact":
        if lo != hi or val != lo:
            bad.append("Exact verdict with unequal bounds")
        rc = data.get("rank_certificate") or {}
        if rc.get("verdict") == "Exact" and rc.get("rank") is not None \
                and hi != rc["rank"] - 1:
            bad.append("upper bound does not equal rank - 1")
        gl = data.get("godement_length")
        if gl is not None and gl != hi:
            bad.append("resolution length does not witness the upper bound")
        if (lo or 0) >= 1 and not data.get("witness"):
            bad.append("positive lower bound without extension witness")
        w = data.get("witness")
        if w is not None:
            vals = w.get("values", [])
            if all(all(x in ("0", 0) for x in v) for v in vals):
                bad.append("witness tail is zero")
        if rc:
            bad.extend(verify_rank_json(rc))
    elif verdict == "PerfectHull":
        if val is not None:
            bad.append("perfect hull certificates carry no value")
    elif verdict == "Interval":
        if lo is not None and hi is not None and lo > hi:
            bad.append("interval bounds incoherent")
    else:
        bad.append(f"unknown verdict {verdict!r}")
    return bad


def cmd_homdim_certify(args):
    if args.verify:
        with open(args.verify) as fh:
            problems = verify_homdim_json(json.load(fh))
        emit({"schema": 1, "verified": not problems, "problems": problems},
             args, [f"verify: {'OK' if not problems else problems}"])
        if problems:
            raise UsageError("certificate failed verification")
        return
    cert = hd.homdim_certificate(args.setup, depth=args.depth).as_dict()
    lines = [f"homdim [{args.setup}]: {cert['verdict']}"
             + (f"({cert['value']})" if cert["value"] is not None else "")]
    lines += [f"  {t}" for t in cert["trace"]]
    emit(cert, args, lines)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true")
    common.add_argument("--tsv", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    p = argparse.ArgumentParser(prog="profmack", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", parents=[common]).add_subparsers(
        dest="sub", required=True)
    gi = g.add_parser("info", parents=[common])
    gi.add_argument("--group", required=True)
    gi.set_defaults(func=cmd_group_info)

    t = sub.add_parser("tower", parents=[common]).add_subparsers(
        dest="sub", required=True)
    ts = t.add_parser("show", parents=[common])
    ts.add_argument("--tower", required=True)
    ts.set_defaults(func=cmd_tower_show)

    c = sub.add_parser("cb", parents=[common]).add_subparsers(
        dest="sub", required=True)
    cr = c.add_parser("rank", parents=[common])
    cr.add_argument("--tower", default="pro_p:2")
    cr.add_argument("--verify", metavar="FILE")
    cr.set_defaults(func=cmd_cb_rank)
    ch = c.add_parser("heights", parents=[common])
    ch.add_argument("--tower", default="pro_p:2")
    ch.set_defaults(func=cmd_cb_heights)

    b = sub.add_parser("burnside", parents=[common]).add_subparsers(
        dest="sub", required=True)
    bm = b.add_parser("marks", parents=[common])
    bm.add_argument("--group", required=True)
    bm.set_defaults(func=cmd_marks)
    br = b.add_parser("ring", parents=[common])
    br.add_argument("--group", required=True)
    br.set_defaults(func=cmd_burnside_ring)

    s = sub.add_parser("span", parents=[common]).add_subparsers(
        dest="sub", required=True)
    sc = s.add_parser("compose", parents=[common])
    sc.add_argument("--file", required=True)
    sc.set_defaults(func=cmd_span_compose)

    m = sub.add_parser("mackey", parents=[common]).add_subparsers(
        dest="sub", required=True)
    me = m.add_parser("ext", parents=[common])
    me.add_argument("--group", required=True)
    me.add_argument("--M", required=True)
    me.add_argument("--N", required=True)
    me.add_argument("--degree", type=int, default=1)
    me.set_defaults(func=cmd_mackey_ext)
    mh = m.add_parser("hom", parents=[common])
    mh.add_argument("--group", required=True)
    mh.add_argument("--M", required=True)
    mh.add_argument("--N", required=True)
    mh.set_defaults(func=cmd_mackey_hom)

    f = sub.add_parser("sheaf", parents=[common]).add_subparsers(
        dest="sub", required=True)
    fg = f.add_parser("godement", parents=[common])
    fg.add_argument("--base", default="spzp:2")
    fg.add_argument("--sheaf", default="const:Q")
    fg.add_argument("--stages", type=int, default=3)
    fg.set_defaults(func=cmd_sheaf_godement)

    h = sub.add_parser("homdim", parents=[common]).add_subparsers(
        dest="sub", required=True)
    hc = h.add_parser("certify", parents=[common])
    hc.add_argument("--setup", default="spzp-weyl")
    hc.add_argument("--verify", metavar="FILE")
    hc.set_defaults(func=cmd_homdim_certify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    random.seed(args.seed)
    try:
        args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownFamily as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (cb.DepthExhausted, CapacityError, hd.ResolutionUnavailable,
            sh.NonPeriodicTail) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
