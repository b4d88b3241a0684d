"""Command-line front end.

Subcommands parse a matrix description (a file path or `fixture:<name>`),
delegate to the corresponding module operation, and print either plain
text or canonical JSON (`--json`): stable key order, versioned schema
field, no timestamps, fixed seeds, so identical inputs give byte-identical
reports.  Exit codes: 0 success, 1 flagged analysis failures under
`--strict`, 2 input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import algebra, dsl, dynamics, fixtures, graphs, rep, spectrum, words
from .matrix import MatrixSpec
from .universe import IndexSet
from .words import EvPeriodicWord

SCHEMA = "ck-report/1"


class InputError(Exception):
    pass


def _load_spec(ref: str) -> MatrixSpec:
    try:
        if ref.startswith("fixture:"):
            return fixtures.load(ref.split(":", 1)[1])
        with open(ref, "r", encoding="utf-8") as fh:
            return dsl.parse_spec(fh.read())
    except (OSError, KeyError, ValueError) as e:
        raise InputError(str(e)) from None


def _parse_group_word(spec: MatrixSpec, text: str):
    return tuple(dsl.parse_word_letters(spec.universe, text))


_EVP_RE = re.compile(r"^(.*?)\(\s*(.+?)\s*\)\^inf$")


def _parse_point(spec: MatrixSpec, text: str) -> spectrum.SpectrumPoint:
    """`stem=<word>;root={...}` for bounded points, `stem=<pre> ( <per> )^inf`
    for unbounded ones; `e` denotes the empty stem."""
    text = text.strip()
    if not text.startswith("stem="):
        raise InputError("point syntax: stem=<word>;root={...} or stem=<pre>(<per>)^inf")
    body = text[len("stem="):]
    m = _EVP_RE.match(body)
    if m:
        pre = _parse_positive(spec, m.group(1))
        per = _parse_positive(spec, m.group(2))
        return spectrum.make_unbounded(spec, EvPeriodicWord.make(pre, per))
    if ";root=" not in body:
        raise InputError("bounded points need ;root={...}")
    stem_text, root_text = body.split(";root=", 1)
    stem = _parse_positive(spec, stem_text)
    root = dsl.parse_set(spec.universe, root_text)
    return spectrum.make_bounded(spec, stem, root)


def _parse_positive(spec: MatrixSpec, text: str) -> tuple:
    text = text.strip()
    if text in ("", "e"):
        return ()
    letters = dsl.parse_word_letters(spec.universe, text)
    if any(s != 1 for _x, s in letters):
        raise InputError("expected a positive word")
    return tuple(x for x, _s in letters)


def _jsonable(spec: MatrixSpec, obj):
    fmt = spec.universe.format_index
    if isinstance(obj, dict):
        return {str(k): _jsonable(spec, v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return [_jsonable(spec, v) for v in items]
    if isinstance(obj, IndexSet):
        return obj.render()
    if isinstance(obj, spectrum.SpectrumPoint):
        return obj.render(fmt)
    if isinstance(obj, EvPeriodicWord):
        return obj.render(fmt)
    if spec.universe.contains(obj) and not isinstance(obj, (int, bool)):
        return fmt(obj)
    if isinstance(obj, tuple):
        return [_jsonable(spec, v) for v in obj]
    return obj


def _emit(spec: MatrixSpec, payload: dict, as_json: bool):
    payload = {"schema": SCHEMA, **payload}
    if as_json:
        print(json.dumps(_jsonable(spec, payload), indent=2))
    else:
        for k, v in payload.items():
            if k == "schema":
                continue
            print(f"{k}: {json.dumps(_jsonable(spec, v))}")


def _fmt_word(spec, w) -> str:
    fmt = spec.universe.format_index
    out = []
    for x, s in w:
        out.append(fmt(x) if s == 1 else "~" + fmt(x))
    return " ".join(out) if out else "e"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    _load_spec(args.spec)
    print("ok")
    return 0


def cmd_analyze(args) -> int:
    spec = _load_spec(args.spec)
    verdicts = graphs.analyze(spec, transitory_reading=args.transitory_reading)
    notable = {}
    if verdicts["simple_sufficient"]["answer"] == "unknown":
        witness = _non_simplicity_witness(spec)
        if witness is not None:
            xi, x, row_sample = witness
            verdicts["simple_sufficient"] = {
                "answer": "no",
                "witness": {
                    "kind": "proper_invariant_set",
                    "point": xi.render(spec.universe.format_index),
                    "inside_E_of": spec.universe.format_index(x),
                    "outside_E_of_row": row_sample,
                    "note": "the union of the edge-orbit sets over this row is a "
                    "proper nonempty open invariant subset",
                },
                "exact": True,
            }
            notable["non_simplicity_point"] = xi.render(spec.universe.format_index)
    samples = [
        p.render(spec.universe.format_index)
        for p in dynamics.sample_points(spec, 3, seed=7)
    ]
    report = {
        "matrix": spec.describe(),
        "unital": spec.is_unital(),
        "clusters": [c.render() for c in spec.column_cluster_points()],
        "rows_finite": _rows_finite_probe(spec),
        "verdicts": verdicts,
        "witnesses": notable,
        "spectrum_samples": samples,
    }
    report["unital"].pop("_Y", None)
    if args.with_verification:
        R = rep.build_rep(spec, _default_gens(spec), args.verify_window)
        report["verification"] = [
            {
                "relation": w.relation,
                "degree": w.degree,
                "window": [w.window_lo, w.window_hi],
                "result": w.result,
            }
            for w in (R.verify_relation(r) for r in ("tck1", "tck2", "tck3", "ck1"))
        ]
    _emit(spec, report, args.json)
    if args.strict:
        bad = any(
            verdicts[k]["answer"] == "unknown" and not verdicts[k]["exact"]
            for k in ("topologically_free", "cofinal", "transitive")
        )
        return 1 if bad else 0
    return 0


def _rows_finite_probe(spec: MatrixSpec) -> dict:
    out = {}
    if spec.universe.is_finite:
        probes = list(spec.universe.names)
    else:
        probes = [(t, n) for t in spec.universe.names for n in (1, 2, 3)]
    for i in probes:
        out[spec.universe.format_index(i)] = spec.is_row_finite(i)
    return out


def _non_simplicity_witness(spec: MatrixSpec):
    if spec.universe.is_finite:
        return None
    seen = set()
    for v in graphs.window_vertices(spec, spec.low_bound() + spec.modulus()):
        if v in seen:
            continue
        seen.add(v)
        if spec.row_support(v).is_finite():
            continue
        xi = dynamics.garfo_counterexample_search(spec, v)
        if xi is not None:
            row_sample = [
                spec.universe.format_index(y)
                for y in spec.row_support(v).iter_sample(3)
            ]
            return xi, v, row_sample
    return None


def cmd_entry(args) -> int:
    spec = _load_spec(args.spec)
    i = spec.universe.parse_index(args.i)
    j = spec.universe.parse_index(args.j)
    print(spec.entry(i, j))
    return 0


def cmd_unital(args) -> int:
    spec = _load_spec(args.spec)
    result = spec.is_unital()
    result.pop("_Y", None)
    _emit(spec, result, args.json)
    return 0 if (result["unital"] or not args.strict) else 1


def cmd_clusters(args) -> int:
    spec = _load_spec(args.spec)
    _emit(spec, {"clusters": [c.render() for c in spec.column_cluster_points()]}, args.json)
    return 0


def cmd_rewrite(args) -> int:
    spec = _load_spec(args.spec)
    word = _parse_group_word(spec, args.word)
    m = algebra.rewrite(spec, word)
    print(m.render(spec.universe.format_index))
    return 0


def cmd_member(args) -> int:
    spec = _load_spec(args.spec)
    xi = _parse_point(spec, args.point)
    t = _parse_group_word(spec, args.word)
    print("yes" if spectrum.contains(spec, xi, t) else "no")
    return 0


def cmd_act(args) -> int:
    spec = _load_spec(args.spec)
    xi = _parse_point(spec, args.point)
    t = _parse_group_word(spec, args.word)
    if not dynamics.in_domain(spec, xi, t):
        print("point is not in the domain of t", file=sys.stderr)
        return 1
    moved = dynamics.act(spec, xi, t)
    print(moved.render(spec.universe.format_index))
    return 0


def cmd_fixed(args) -> int:
    spec = _load_spec(args.spec)
    t = _parse_group_word(spec, args.word)
    xi = dynamics.fixed_point(spec, t)
    if xi is None:
        print("none")
        return 1 if args.strict else 0
    print(xi.render(spec.universe.format_index))
    return 0


def cmd_ex(args) -> int:
    spec = _load_spec(args.spec)
    xi = _parse_point(spec, args.point)
    x = spec.universe.parse_index(args.letter)
    print("yes" if dynamics.e_x_contains(spec, xi, x) else "no")
    return 0


def cmd_orbit_member(args) -> int:
    spec = _load_spec(args.spec)
    xi = _parse_point(spec, args.point)
    parse = spec.universe.parse_index
    pattern = spectrum.Pattern(
        (),
        frozenset(parse(x) for x in (args.X or "").split(",") if x),
        frozenset(parse(y) for y in (args.Y or "").split(",") if y),
        frozenset(parse(z) for z in (args.Z or "").split(",") if z),
    )
    print("yes" if dynamics.pattern_contains(spec, pattern, xi) else "no")
    return 0


def _default_gens(spec: MatrixSpec):
    if spec.universe.is_finite:
        return list(spec.universe.names)
    return [(t, n) for t in spec.universe.names for n in (1, 2)]


def cmd_verify(args) -> int:
    spec = _load_spec(args.spec)
    gens = (
        [spec.universe.parse_index(g) for g in args.gens.split(",")]
        if args.gens
        else _default_gens(spec)
    )
    R = rep.build_rep(spec, gens, args.window)
    for w in R.warnings:
        print(f"warning: {w}", file=sys.stderr)
    wanted = args.relations.split(",")
    reports = []
    failed = False
    for name in wanted:
        if name == "tck":
            reports += [R.verify_relation(r) for r in ("tck1", "tck2", "tck3")]
        elif name == "ck":
            reports += [R.verify_relation("ck1"), R.verify_relation("ck2")]
        elif name == "elcond":
            reports += _elcond_reports(spec, R, gens)
        elif name == "claims":
            reports.append(R.verify_relation("claims", max_len=args.max_len))
        elif name == "semisat":
            reports.append(R.verify_relation("semisat", max_len=args.max_len))
        elif name == "projections":
            reports += _projection_reports(spec, R)
        else:
            raise InputError(f"unknown relation group {name!r}")
    payload = []
    for w in reports:
        if isinstance(w, rep.WindowReport):
            failed |= not w.passed
            payload.append(
                {
                    "relation": w.relation,
                    "degree": w.degree,
                    "window": [w.window_lo, w.window_hi],
                    "instances": w.instances,
                    "result": w.result,
                    "witness": w.witness,
                }
            )
        else:
            payload.append(w)
    _emit(spec, {"window": args.window, "reports": payload}, args.json)
    return 1 if (failed and args.strict) else 0


def _elcond_reports(spec, R, gens):
    out = []
    for X, Y in [((g,), ()) for g in gens] + [((g,), (h,)) for g in gens for h in gens if h != g]:
        support = spec.axyj_support(X, Y)
        if not support.finite or not set(support.elements) <= set(gens):
            continue
        out.append(R.verify_relation("elcond", X=X, Y=Y))
    return out


def _projection_reports(spec, R):
    out = []
    fmt = spec.universe.format_index
    for repct in graphs.enumerate_circuits(spec, 2):
        gamma = repct.circuit
        if set(gamma) - set(R.basis.gens):
            continue
        t = words.from_positive(gamma)
        lo1, hi1 = R._window(rep._e(t))
        lo2, hi2 = R._window(rep._e(words.invert(t)))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        cmp = R.projection_compare(rep._e(t), rep._e(words.invert(t)), lo, hi)
        entry = {
            "relation": f"projection-order circuit {' '.join(fmt(v) for v in gamma)}",
            "compare e(g) vs e(g^-1)": cmp,
            "window": [lo, hi],
        }
        try:
            entry["infinite_projection"] = R.infinite_projection_witness((gamma[-1],), gamma)
        except ValueError as e:
            entry["infinite_projection"] = str(e)
        out.append(entry)
    return out


def cmd_oracle(args) -> int:
    spec = _load_spec(args.spec)
    gens = (
        [spec.universe.parse_index(g) for g in args.gens.split(",")]
        if args.gens
        else _default_gens(spec)
    )
    R = rep.build_rep(spec, gens, args.window)
    mismatches = []
    total = 0
    for t in R._reduced_words(args.max_len):
        if not t:
            continue
        total += 1
        sym = algebra.is_zero_u(spec, tuple(t), algebra.TAU)
        mat = R.operator(tuple(t)).is_zero()
        if sym != mat:
            mismatches.append(_fmt_word(spec, t))
    _emit(
        spec,
        {
            "words_checked": total,
            "max_len": args.max_len,
            "window": args.window,
            "mismatches": mismatches,
        },
        args.json,
    )
    return 0 if not mismatches else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ckwork",
        description="exact combinatorial analysis of Cuntz-Krieger matrices",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("spec", help="DSL file path or fixture:<name>")
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--strict", action="store_true")
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, help="parse and validate a matrix description")
    sp = add("analyze", cmd_analyze, help="full verdict report")
    sp.add_argument("--transitory-reading", choices=["literal", "edge_departure"], default="literal")
    sp.add_argument("--with-verification", action="store_true")
    sp.add_argument("--verify-window", type=int, default=6, dest="verify_window")
    sp = add("entry", cmd_entry, help="one matrix entry")
    sp.add_argument("i")
    sp.add_argument("j")
    add("unital", cmd_unital, help="unitality with witness")
    add("clusters", cmd_clusters, help="cluster points of the column family")
    sp = add("rewrite", cmd_rewrite, help="canonical monomial of a generator word")
    sp.add_argument("word")
    sp = add("member", cmd_member, help="membership t in xi")
    sp.add_argument("--point", required=True)
    sp.add_argument("--word", required=True)
    sp = add("act", cmd_act, help="apply a group element to a point")
    sp.add_argument("--point", required=True)
    sp.add_argument("--word", required=True)
    sp = add("fixed", cmd_fixed, help="fixed point of a group element")
    sp.add_argument("word")
    sp = add("ex", cmd_ex, help="membership in the edge-orbit set E_x")
    sp.add_argument("--point", required=True)
    sp.add_argument("--letter", required=True)
    sp = add("orbit-member", cmd_orbit_member, help="pattern-orbit membership")
    sp.add_argument("--point", required=True)
    sp.add_argument("--X", default="")
    sp.add_argument("--Y", default="")
    sp.add_argument("--Z", default="")
    sp = add("verify", cmd_verify, help="window verification of operator relations")
    sp.add_argument("--window", type=int, default=8)
    sp.add_argument("--gens", default="")
    sp.add_argument("--relations", default="tck,ck,claims,semisat")
    sp.add_argument("--max-len", type=int, default=3, dest="max_len")
    sp = add("oracle", cmd_oracle, help="symbolic zero vs truncated matrix zero")
    sp.add_argument("--max-len", type=int, default=4, dest="max_len")
    sp.add_argument("--window", type=int, default=8)
    sp.add_argument("--gens", default="")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except dsl.DslError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
