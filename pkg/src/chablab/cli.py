"""Command-line front end: ``chablab {eval,chab,gf,dyadic,bp} ...``.

Every command prints one JSON document (sorted keys) or DOT text.  Exit code
0 means every requested check passed, 1 that some check failed, 2 that the
input could not be parsed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import blockperm as bp
from . import perms
from .chabfin import corpus as group_corpus
from .chabfin.dyadic import dyadic_counterexample
from .chabfin.group import FiniteGroup, GroupError, SubgroupLattice
from .chabfin.measures import InvariantMeasure, irs_vertices, saturated_push, urs_list
from .chabfin.render import lattice_dot
from .chabfin.saturation import Tower, saturation_table, trunc_saturation
from .plgroup.family import FamilyError, FamilySpec, make_alt_family, verify_certificate
from .plgroup.gf import (
    GFElement,
    GFError,
    admissible_level,
    gf_membership,
    neighborhood_member,
    truncate_to_ball,
)
from .plgroup.plmap import (
    PieceLimitExceeded,
    fixed_points,
    in_gamma_p,
    in_lambda_p,
    in_Vp,
    support,
)
from .plgroup.words import (
    GeneratorTable,
    UnknownGenerator,
    WordParseError,
    evaluate_word,
    format_word,
    index_of_word,
    lambda_table,
    parse_word_file,
)
from .sampling import random_gf_element, rng_from


class InputError(Exception):
    """Malformed input; reported with exit code 2."""


def _emit(doc, fmt: str = "json") -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(doc)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _summary(checks: dict[str, bool]) -> dict:
    return {"checks": dict(sorted(checks.items())), "passed": all(checks.values())}


# eval


def cmd_eval(args) -> int:
    try:
        text = Path(args.words).read_text() if args.words != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError(str(exc)) from None
    words = parse_word_file(text)
    table = GeneratorTable.load(args.generators) if args.generators else lambda_table(args.p)
    results = []
    for w in words:
        f = evaluate_word(w, table)
        entry = {
            "word": format_word(w),
            "map": f.to_json(),
            "support": support(f).to_json(),
            "fixed_points": fixed_points(f).to_json(),
            "in_gamma_p": in_gamma_p(f),
            "in_lambda_p": in_lambda_p(f),
        }
        entry["in_Vp"] = in_Vp(f) if entry["in_lambda_p"] else None
        if "a" in table:
            entry["index"] = index_of_word(w)
        results.append(entry)
    _emit({"p": table.p, "results": results, **_summary({"parsed": True})})
    return 0


# chab


def _load_group(spec: str) -> FiniteGroup:
    if Path(spec).exists():
        return FiniteGroup.from_json(_read_json(spec))
    try:
        return group_corpus.by_name(spec)
    except KeyError:
        raise InputError(f"{spec!r} is neither a file nor a corpus group name") from None


def cmd_chab(args) -> int:
    G = _load_group(args.group)
    lat = SubgroupLattice(G)
    subs = lat.subgroups
    if args.format == "dot":
        U = subs[args.U[0]] if args.U else None
        _emit(lattice_dot(lat, U), "dot")
        return 0
    checks: dict[str, bool] = {}
    doc: dict = {
        "group": G.name,
        "order": G.n,
        "subgroups": len(subs),
        "classes": len(lat.classes),
        "note": "Sub(G) is discrete for finite G: URS = conjugacy classes, ergodic IRS = uniform measures on them",
    }
    if args.saturation_table:
        us = args.U if args.U else list(range(len(subs)))
        for u in us:
            if not 0 <= u < len(subs):
                raise InputError(f"subgroup index {u} out of range 0..{len(subs) - 1}")
        Us = [subs[u] for u in us]
        orbit = saturation_table(G, Us, subs, "orbit", args.threads)
        formula = saturation_table(G, Us, subs, "formula", args.threads)
        doc["saturation"] = {
            str(u): [lat.index[S] for S in row] for u, row in zip(us, formula)
        }
        checks["orbit_equals_formula"] = orbit == formula
    if args.urs:
        doc["urs"] = [
            {"class": k, "order": r.order, "size": len(r.members), "trivial": r.trivial}
            for k, r in enumerate(urs_list(G, lat))
        ]
    if args.irs:
        verts = irs_vertices(G, lat)
        doc["irs_vertices"] = [
            {"class": k, "support": [lat.index[H] for H in m.support()], "weight": str(m.weights[0][1])}
            for k, m in enumerate(verts)
        ]
        checks["irs_invariant"] = all(m.is_invariant(G) for m in verts)
    if args.tower:
        T = Tower.from_json(G, _read_json(args.tower))
        levels = []
        for n in range(1, T.length + 1):
            lam = [lat.index[trunc_saturation(T, n, H)] for H in subs]
            lam_o = [lat.index[trunc_saturation(T, n, H, "orbit")] for H in subs]
            entry = {"n": n, "lambda": lam}
            Gn, Un = T.level(n)
            if G.is_normal(Un, Gn):
                res = [saturated_push(T, n, InvariantMeasure.uniform([subs[i] for i in cls])) for cls in lat.classes]
                entry["push_verified"] = all(r.verified for r in res)
                checks[f"push_{n}"] = entry["push_verified"]
            levels.append(entry)
            checks[f"lambda_{n}_routes_agree"] = lam == lam_o
        checks["top_level_identity"] = levels[-1]["lambda"] == list(range(len(subs)))
        doc["tower"] = levels
    doc["subgroup_list"] = [{"index": i, "order": H.order, "class": lat.class_of[i], "elements": H.elements()}
                            for i, H in enumerate(subs)]
    doc.update(_summary(checks))
    _emit(doc)
    return 0 if doc["passed"] else 1


# gf


def _load_family(args) -> FamilySpec:
    if args.family:
        return FamilySpec.from_json(_read_json(args.family))
    return make_alt_family(args.p, [args.depth], "periodic", 1)


def _violation(g: GFElement, N: int) -> Optional[dict]:
    """Why ``g`` is outside V_N(1), or None."""
    if not g.head.is_identity():
        return {"reason": "head moves a ball", "ball": g.head.pieces[0].domain.to_json()}
    fam = g.family
    for n in range(g.level, max(N, g.level) + 1):
        if n < N and not perms.is_identity(g.tail_at(n)):
            balls = fam.balls(n)
            i = next(i for i, j in enumerate(g.tail_at(n)) if i != j)
            return {"reason": f"acts nontrivially on annulus {n} < {N}", "ball": balls[i].to_json()}
    if not neighborhood_member(g, N):
        return {"reason": "tail leaves the family"}
    return None


def cmd_gf(args) -> int:
    fam = _load_family(args)
    elements: list[tuple[str, GFElement]] = []
    for path in args.element or []:
        elements.append((path, GFElement.from_json(fam, _read_json(path))))
    rng = rng_from(args.seed)
    for i in range(args.random):
        elements.append((f"random[{i}]", random_gf_element(fam, rng, args.max_level)))
    checks: dict[str, bool] = {}
    checks["certificates"] = all(
        verify_certificate(fam, n, k) for n in fam.classes(0) for k in range(len(fam.generators(n)))
    )
    reports = []
    for name, g in elements:
        rep: dict = {"name": name, "element": g.to_json(), "member": gf_membership(g),
                     "admissible_level": admissible_level(g)}
        if args.nbhd is not None:
            rep["nbhd"] = {}
            for N in args.nbhd:
                v = _violation(g, N)
                rep["nbhd"][str(N)] = {"member": v is None, **({"violation": v} if v else {})}
        if args.truncate is not None:
            rows = []
            for k in args.truncate:
                if k > -g.level - 1:
                    rows.append({"k": k, "skipped": f"needs k <= {-g.level - 1}"})
                    continue
                t = truncate_to_ball(g, k)
                rows.append(t.to_json())
                checks[f"{name}:truncate{k}"] = t.verified
            rep["truncations"] = rows
            depths = [r["M"] for r in rows if "M" in r]
            vals = [math.inf if d == "inf" else d for d in depths]
            checks[f"{name}:nondecreasing"] = all(a <= b for a, b in zip(vals, vals[1:]))
        reports.append(rep)
    doc = {"family": fam.to_json(), "elements": reports}
    doc.update(_summary(checks))
    _emit(doc)
    return 0 if doc["passed"] else 1


# dyadic


def cmd_dyadic(args) -> int:
    rep = dyadic_counterexample(args.nmax)
    checks = {"H_n_saturated": rep["all_H_n_saturated"], "limit_saturation_is_G": rep["limit_saturation_is_G"]}
    rep.update(_summary(checks))
    _emit(rep)
    return 0 if rep["passed"] else 1


# bp


def cmd_bp(args) -> int:
    fam = bp.BlockFamily.from_json(_read_json(args.family)) if args.family else bp.uniform_family(
        3, [perms.from_cycles([[0, 1, 2]], 3)]
    )
    reports = []
    for path in args.element or []:
        g = bp.BlockPermElement.from_json(fam, _read_json(path))
        rep: dict = {"name": path, "element": g.to_json(), "in_G": bp.bp_in_G(g)}
        if args.quotient is not None:
            n = args.quotient
            rep["in_Gn"] = bp.bp_in_Gn(g, n)
            if rep["in_Gn"]:
                rep["quotient"] = perms.fin_to_string(bp.bp_quotient(g, n))
        if args.nbhd is not None:
            rep["nbhd"] = {str(N): bp.bp_neighborhood_member(g, N) for N in args.nbhd}
        reports.append(rep)
    doc = {"family": fam.to_json(), "elements": reports}
    doc.update(_summary({}))
    _emit(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chablab", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for table loops")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate words over PL generators")
    e.add_argument("words", help="word file ('-' for stdin), one word per line")
    e.add_argument("--generators", help="generator table JSON (default: s, t, a for Lambda_p)")
    e.add_argument("-p", type=int, default=2)
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("chab", help="finite-group saturation, URS and IRS reports")
    c.add_argument("group", help="group JSON file or corpus name (S4, A4, Q8, C4, ...)")
    c.add_argument("--saturation-table", action="store_true")
    c.add_argument("--U", type=int, nargs="*", help="subgroup indices used as U")
    c.add_argument("--urs", action="store_true")
    c.add_argument("--irs", action="store_true")
    c.add_argument("--tower", help="tower JSON with element lists for G_n and U_n")
    c.add_argument("--format", choices=["json", "dot"], default="json")
    c.set_defaults(func=cmd_chab)

    g = sub.add_parser("gf", help="G_F membership, neighbourhoods and truncation")
    g.add_argument("--family", help="family JSON (default: alternating family with -p/--depth)")
    g.add_argument("-p", type=int, default=2)
    g.add_argument("--depth", type=int, default=2)
    g.add_argument("--element", action="append", help="element JSON (repeatable)")
    g.add_argument("--random", type=int, default=0, help="number of random elements")
    g.add_argument("--max-level", type=int, default=3)
    g.add_argument("--truncate", type=int, nargs="*", help="ball parameters k")
    g.add_argument("--nbhd", type=int, nargs="*", help="levels N for V_N(1) membership")
    g.set_defaults(func=cmd_gf)

    d = sub.add_parser("dyadic", help="saturation in Z[1/2] x| {+-1}")
    d.add_argument("--nmax", type=int, default=6)
    d.set_defaults(func=cmd_dyadic)

    b = sub.add_parser("bp", help="block permutation group queries")
    b.add_argument("--family", help="block family JSON (default: k_n = 3n, D_n = Alt(3))")
    b.add_argument("--element", action="append")
    b.add_argument("--quotient", type=int)
    b.add_argument("--nbhd", type=int, nargs="*")
    b.set_defaults(func=cmd_bp)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        ap.error("--threads must be positive")
    try:
        return args.func(args)
    except (InputError, WordParseError, UnknownGenerator, FamilyError, GroupError, GFError, bp.BlockError,
            ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"chablab: error: {msg}", file=sys.stderr)
        return 2
    except PieceLimitExceeded as exc:
        print(f"chablab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
