"""Command-line entry point ``ietmorph``.

Exit codes: 0 success, 1 a reproduction criterion failed, 2 a preservation
test found a counterexample, 64 bad usage or unparsable input, 65 a domain
error (reported as a JSON object on stdout).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Sequence

from . import __version__
from .acceptance import CRITERIA, run_all
from .capset import (
    Interval,
    capset_csv,
    capset_svg,
    duality_check,
    from_iet,
    generate,
    geometric_points,
    pn_experiment,
    q_bound,
    q_count,
    renorm_check,
    selfsimilar_check,
    unit_scaling_check,
)
from .errors import IetMorphError, ParseError
from .iet import Iet2Params, classify, language, parse_closure, params_from_values, s_coding, t2_code, t3_code
from .monoid import degeneracy_transport_check, enumerate_e3n, matrix_report, spectrum_report
from .morphism import (
    Morphism,
    apply,
    det,
    find_fixed_points,
    format_matrix,
    incidence_matrix,
    is_primitive,
    parse_matrix,
    perron_data,
)
from .preserve import fixed_point_3iet_check, test_preservation, theorem_b_check
from .qfield import Approx, parse, parse_list
from .words import PointedWord, balance_defect, complexity_csv, complexity_profile, empirical_densities, metric_distance

EXIT_FAILED = 1
EXIT_FALSIFIED = 2
EXIT_USAGE = 64
EXIT_DOMAIN = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument helpers ---------------------------------------------------------


def _number(text: str, approx: bool = False):
    value = parse(text)
    return Approx(float(value)) if approx else value


def _numbers(text: str, approx: bool = False) -> list:
    values = parse_list(text)
    return [Approx(float(v)) for v in values] if approx else values


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise ParseError(f"range must look like LO:HI, got {text!r}") from None
    if hi < lo:
        raise ParseError(f"empty range {text!r}")
    return lo, hi


def _params(args):
    return params_from_values(_numbers(args.params, args.approx), parse_closure(args.closure))


def _word(text: str) -> PointedWord:
    return PointedWord.from_text(text if "|" in text else "|" + text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _config(args) -> dict:
    keys = {k: v for k, v in vars(args).items() if k not in ("func", "out") and not callable(v)}
    return {"command": " ".join(x for x in (args.group, args.action) if x), **{k: keys[k] for k in sorted(keys)}}


# -- handlers -------------------------------------------------------------------
# each returns (text, exit_code)


def _iet_code(args):
    lo, hi = _range(args.range)
    x0 = _number(args.x0, args.approx)
    if args.coding == "s":
        win = s_coding(_params(args), x0, lo, hi)
    else:
        win = t3_code(_params(args), x0, lo, hi)
    out = {"word": str(win.word), "n_lo": lo, "n_hi": hi, "approximate": win.approximate, "tie_warning": win.tie_warning}
    if args.points:
        out["points"] = [str(x) for x in win.points]
    return out, 0


def _iet_classify(args):
    return classify(_params(args)).to_json(), 0


def _iet_rotation(args):
    lo, hi = _range(args.range)
    p = Iet2Params(_number(args.slope, args.approx), _number(args.intercept, args.approx), args.kind)
    return {"word": str(t2_code(p, lo, hi)), "n_lo": lo, "n_hi": hi}, 0


def _iet_language(args):
    fs = language(_params(args), args.n)
    return {"n": args.n, "count": len(fs), "factors": sorted(fs.factors)}, 0


def _word_complexity(args):
    profile = complexity_profile(_word(args.word), args.nmax)
    if args.format == "csv":
        return complexity_csv(profile), 0
    return {"complexity": profile}, 0


def _word_balance(args):
    w = _word(args.word)
    return {"balance_defect": balance_defect(w, args.nmax or len(w))}, 0


def _word_densities(args):
    w = _word(args.word)
    return {a: str(x) for a, x in zip(w.alphabet, empirical_densities(w))}, 0


def _word_distance(args):
    return {"distance": str(metric_distance(_word(args.u), _word(args.v)))}, 0


def _morph_info(args):
    m = Morphism.parse(args.morphism)
    out = {"morphism": str(m), "source": m.alphabet, "target": m.target}
    mat = incidence_matrix(m)
    out["matrix"] = format_matrix(mat)
    if m.endo:
        prim, k = is_primitive(m)
        out.update(det=det(mat), primitive=prim, primitive_power=k)
        if prim:
            try:
                pd = perron_data(mat)
                out["perron"] = {"value": str(pd.value), "left": [str(x) for x in pd.left], "right": [str(x) for x in pd.right]}
            except IetMorphError as exc:
                out["perron"] = {"error": type(exc).__name__, "message": str(exc)}
    return out, 0


def _morph_apply(args):
    m = Morphism.parse(args.morphism)
    return {"word": str(apply(m, _word(args.word)))}, 0


def _morph_fixed(args):
    m = Morphism.parse(args.morphism)
    found = []
    for p, w in find_fixed_points(m, args.max_power, args.length):
        cut = args.length
        found.append({"power": p, "seed": f"{w.left[0]}|{w.right[0]}", "word": w.left[:cut][::-1] + "|" + w.right[:cut]})
    return {"fixed_points": found}, 0


def _monoid_check(args):
    mat = parse_matrix(args.matrix)
    out = {"matrix": format_matrix(mat), "report": matrix_report(mat).to_json()}
    try:
        out["spectrum"] = spectrum_report(mat).to_json()
    except IetMorphError as exc:
        out["spectrum"] = {"error": type(exc).__name__, "message": str(exc)}
    try:
        out["transport_witness"] = degeneracy_transport_check(mat).to_json()
    except IetMorphError as exc:
        out["transport_witness"] = {"error": type(exc).__name__, "message": str(exc)}
    return out, 0


def _monoid_enum(args):
    members = enumerate_e3n(args.bound, naive=args.naive)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"m{i}{j}" for i in range(1, 4) for j in range(1, 4)] + ["det", "symplectic_sign", "delta"])
        for m in members:
            r = matrix_report(m)
            writer.writerow([x for row in m for x in row] + [r.det, r.symplectic_sign, r.delta])
        return buf.getvalue(), 0
    return {"bound": args.bound, "count": len(members), "members": [format_matrix(m) for m in members]}, 0


def _capset_gen(args):
    lo, hi = _range(args.range)
    conv = from_iet(_params(args), _number(args.x0))
    cs = generate(conv, _number(args.eta), lo, hi)
    if args.format == "svg":
        return capset_svg(cs.points, cs.gap_word().text), 0
    return capset_csv(cs), 0


def _capset_dualcheck(args):
    lhs, rhs = duality_check(_number(args.eps), _number(args.eta), Interval.parse(args.omega1), Interval.parse(args.omega2))
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}, 0


def _capset_scale(args):
    ok = unit_scaling_check(_number(args.eps), _number(args.lam), Interval.parse(args.omega), Interval.parse(args.window))
    return {"holds": ok}, 0


def _capset_renorm(args):
    ok = renorm_check(
        _number(args.eps), _number(args.eta), Interval.parse(args.omega), Interval.parse(args.window), form=args.form
    )
    return {"form": args.form, "holds": ok}, 0


def _capset_qbound(args):
    et, nt = _number(args.eps), _number(args.eta)
    J = Interval.parse(args.J)
    qz, qt = q_count(et, nt, J, _number(args.z)), q_count(et, nt, J, _number(args.t))
    R = q_bound(et, nt)
    return {"Q_z": qz, "Q_t": qt, "R": str(R), "R_float": float(R), "holds": abs(qz - qt) <= R}, 0


def _capset_pn(args):
    rep = pn_experiment(
        _number(args.eps), _number(args.lam), Interval.parse(args.omega), n_max=args.nmax, samples=args.samples, seed=args.seed
    )
    return rep.to_json(), 0


def _capset_selfsim(args):
    m = Morphism.parse(args.morphism)
    rep = selfsimilar_check(m, gaps=args.gaps)
    if args.format == "svg":
        w = next(w for p, w in find_fixed_points(m, rep.power, args.gaps) if p == rep.power)
        pts, _ = geometric_points(w, rep.lengths)
        return capset_svg(pts, w.text, rep.factor), 0
    return rep.to_json(), 0


def _preserve_test(args):
    rep = test_preservation(Morphism.parse(args.morphism), args.trials, args.window, args.flen, args.seed)
    return rep.to_json(), 0 if rep.verdict == "Consistent" else EXIT_FALSIFIED


def _preserve_thmb(args):
    rep = theorem_b_check(parse_matrix(args.matrix), samples=args.samples, seed=args.seed)
    return rep.to_json(), 0 if rep.ok else EXIT_FAILED


def _preserve_fixpoint(args):
    rep = fixed_point_3iet_check(Morphism.parse(args.morphism), args.max_power, args.flen)
    return rep.to_json(), 0 if rep.contained else EXIT_FAILED


def _repro(args):
    numbers = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(numbers)
    lines = [r.line() for r in results]
    ok = all(r.passed and r.in_budget for r in results)
    if args.format == "json":
        payload = [
            {"criterion": r.number, "name": r.name, "passed": r.passed, "seconds": r.seconds, "budget": r.budget, "detail": r.detail}
            for r in results
        ]
        return payload, 0 if ok else EXIT_FAILED
    return "\n".join(lines) + "\n", 0 if ok else EXIT_FAILED


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--approx", action="store_true", help="use floating point for numeric inputs")

    iet_opts = argparse.ArgumentParser(add_help=False)
    iet_opts.add_argument("--params", required=True, help='lengths "alpha,beta,gamma", e.g. "1,sqrt2,sqrt2"')
    iet_opts.add_argument("--closure", default="left", choices=("left", "right"))

    parser = _Parser(prog="ietmorph", description="Three-interval exchanges, their codings and morphisms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def add(sub, name, func, parents=(), help=None):
        p = sub.add_parser(name, parents=[common, *parents], help=help)
        p.set_defaults(func=func)
        return p

    # iet
    g = groups.add_parser("iet", help="exchanges and their codings").add_subparsers(dest="action", required=True)
    p = add(g, "code", _iet_code, [iet_opts], "code an orbit window")
    p.add_argument("--x0", default="0")
    p.add_argument("--range", default="0:99", help="orbit indices LO:HI")
    p.add_argument("--coding", choices=("t", "s"), default="t", help="ternary coding t or binary S-coding s")
    p.add_argument("--points", action="store_true", help="include orbit points")
    add(g, "classify", _iet_classify, [iet_opts], "periodic, degenerate or non-degenerate")
    p = add(g, "rotation", _iet_rotation, (), "mechanical word of a rotation")
    p.add_argument("--slope", required=True)
    p.add_argument("--intercept", default="0")
    p.add_argument("--kind", choices=("lower", "upper"), default="lower")
    p.add_argument("--range", default="0:99")
    p = add(g, "language", _iet_language, [iet_opts], "exact factors of one length")
    p.add_argument("--n", type=int, required=True)

    # word
    g = groups.add_parser("word", help="combinatorics of finite words").add_subparsers(dest="action", required=True)
    p = add(g, "complexity", _word_complexity)
    p.add_argument("--word", required=True, help='"LEFT|RIGHT" or a plain word')
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p = add(g, "balance", _word_balance)
    p.add_argument("--word", required=True)
    p.add_argument("--nmax", type=int, default=0, help="0 means the whole word")
    p = add(g, "densities", _word_densities)
    p.add_argument("--word", required=True)
    p = add(g, "distance", _word_distance)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)

    # morph
    g = groups.add_parser("morph", help="substitutions").add_subparsers(dest="action", required=True)
    p = add(g, "info", _morph_info)
    p.add_argument("--morphism", required=True, help='e.g. "A->AC;B->BC;C->C"')
    p = add(g, "apply", _morph_apply)
    p.add_argument("--morphism", required=True)
    p.add_argument("--word", required=True)
    p = add(g, "fixed", _morph_fixed)
    p.add_argument("--morphism", required=True)
    p.add_argument("--max-power", type=int, default=9)
    p.add_argument("--length", type=int, default=40)

    # monoid
    g = groups.add_parser("monoid", help="incidence matrix predicates").add_subparsers(dest="action", required=True)
    p = add(g, "check", _monoid_check)
    p.add_argument("--matrix", required=True, help='rows separated by ";", e.g. "1,0,0;1,1,1;0,0,1"')
    p = add(g, "enum", _monoid_enum)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--naive", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    # capset
    g = groups.add_parser("capset", help="cut-and-project sets").add_subparsers(dest="action", required=True)
    p = add(g, "gen", _capset_gen, [iet_opts])
    p.add_argument("--x0", default="0")
    p.add_argument("--eta", default="1")
    p.add_argument("--range", default="-50:50")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p = add(g, "dualcheck", _capset_dualcheck)
    p.add_argument("--eps", required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--omega1", required=True, help='interval such as "(0,1]"')
    p.add_argument("--omega2", required=True)
    p = add(g, "scale", _capset_scale)
    p.add_argument("--eps", required=True)
    p.add_argument("--lam", required=True)
    p.add_argument("--omega", default="(0,1]")
    p.add_argument("--window", default="[-20,20]")
    p = add(g, "renorm", _capset_renorm)
    p.add_argument("--eps", required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--omega", default="(0,1]")
    p.add_argument("--window", default="[-20,20]")
    p.add_argument("--form", choices=("corrected", "printed"), default="corrected")
    p = add(g, "qbound", _capset_qbound)
    p.add_argument("--eps", required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--J", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--t", required=True)
    p = add(g, "pn", _capset_pn)
    p.add_argument("--eps", required=True)
    p.add_argument("--lam", required=True)
    p.add_argument("--omega", default="(0,1]")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--samples", type=int, default=8)
    p = add(g, "selfsim", _capset_selfsim)
    p.add_argument("--morphism", required=True)
    p.add_argument("--gaps", type=int, default=500)
    p.add_argument("--format", choices=("json", "svg"), default="json")

    # preserve
    g = groups.add_parser("preserve", help="empirical preservation tests").add_subparsers(dest="action", required=True)
    p = add(g, "test", _preserve_test)
    p.add_argument("--morphism", required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--window", type=int, default=50_000)
    p.add_argument("--flen", type=int, default=15)
    p = add(g, "thmb", _preserve_thmb)
    p.add_argument("--matrix", required=True)
    p.add_argument("--samples", type=int, default=20)
    p = add(g, "fixpoint", _preserve_fixpoint)
    p.add_argument("--morphism", required=True)
    p.add_argument("--max-power", type=int, default=9)
    p.add_argument("--flen", type=int, default=15)

    # repro
    p = groups.add_parser("repro", parents=[common], help="run the acceptance criteria")
    p.set_defaults(func=_repro, action=None)
    p.add_argument("--only", help=f"comma-separated criterion numbers out of 1..{len(CRITERIA)}")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    try:
        result, code = args.func(args)
    except ParseError as exc:
        print(_json({"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_USAGE
    except IetMorphError as exc:
        print(_json({"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_DOMAIN
    except ValueError as exc:
        print(_json({"error": "ParseError", "message": str(exc)}))
        return EXIT_USAGE
    if isinstance(result, str):
        text = result
    else:
        if isinstance(result, dict):
            result = {**result, "config": _config(args)}
        text = _json(result) + "\n"
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
