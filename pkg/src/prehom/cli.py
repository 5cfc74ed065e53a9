"""Command line front end.

Exit codes: 0 ok, 1 verification mismatch, 2 input error, 3 unsupported
variant, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .combinatorics import (ThinDimVector, classify, one_strings, parse_bits, parse_strings,
                            thin_vectors)
from .constructions import build_diagram, decompose_JK, family_F, family_Fbar, modify_diagram
from .errors import BudgetExceeded, PrehomError
from .fields import GF, QQ
from .matrix_model import orbit_codim
from .orbits import DEFAULT_BUDGET, enumerate_orbits, is_minimal, max_class_size
from .quiver import (StandardSubset, ext1_dim, hom_dim, hom_dim_standard, module_from_element,
                     standard_module)
from .verify import SuiteOptions, VerificationReport, resolve_suites, run_suite

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_BUDGET = 0, 1, 2, 3, 4


class Unsupported(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(" ", "").split(",") if tok]


def _dim_vector(args) -> ThinDimVector:
    if getattr(args, "d", None):
        return parse_bits(args.d)
    if getattr(args, "a", None):
        return parse_strings(args.a)
    raise ValueError("give --d (0/1 entries) or --a (1-string lengths)")


def _emit(payload: dict, fmt: str, text: str, tsv: str | None = None) -> str:
    if fmt == "json":
        return json.dumps({"schema": 1, **payload}, sort_keys=True, indent=2)
    if fmt == "tsv" and tsv is not None:
        return tsv.rstrip("\n")
    if fmt == "tsv":
        return "\n".join(f"{k}\t{_flat(v)}" for k, v in sorted(payload.items()))
    return text


def _flat(v) -> str:
    return json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else str(v)


# -- commands -------------------------------------------------------------------

def cmd_classify(args) -> tuple[int, str]:
    d = _dim_vector(args)
    c = classify(d)
    payload = {"d": list(d.entries), "a": list(one_strings(d).a), "t": d.t, "n": d.n,
               "e": c.e, "dense": c.dense, "codim": c.codim}
    text = (f"d = {d}  a = {one_strings(d)}\ne = {c.e}, dense = {str(c.dense).lower()}, "
            f"codim = {c.codim}")
    return EXIT_OK, _emit(payload, args.format, text)


def cmd_represent(args) -> tuple[int, str]:
    d = _dim_vector(args)
    c = classify(d)
    variant = args.variant
    if variant == "plain" and c.e >= 2:
        raise Unsupported("variant plain needs e(d) <= 1; use --variant family")
    D = build_diagram(d)
    if variant == "family" and c.e >= 2:
        F = family_F(d)
        params = _int_list(args.params) if args.params else [1] * F.n_params
        y = F.instantiate(params, QQ)
        payload = {"variant": variant, "d": list(d.entries), "family": str(F),
                   "family_json": F.to_json(), "modified_family": str(family_Fbar(d)),
                   "parameters": params, "element": y.to_json()}
    else:
        if variant != "plain":
            D = modify_diagram(D)
        F = family_Fbar(d) if variant != "plain" else family_F(d)
        y = F.instantiate([], QQ)
        payload = {"variant": variant, "d": list(d.entries), "element": y.to_json(),
                   "element_text": str(y)}
        if variant == "minimal":
            payload["is_minimal"] = _minimal_flag(d, args.q, args.budget)
            payload["is_minimal_q"] = args.q
    M = module_from_element(y)
    payload.update({
        "decomposition": decompose_JK(d).to_json(),
        "diagram": D.to_json(),
        "diagram_text": D.to_text(),
        "orbit_codim": orbit_codim(y),
        "ext1_self": ext1_dim(M, M),
    })
    text_lines = [f"d = {d}  variant = {variant}"]
    if "family" in payload:
        text_lines.append(f"F = {payload['family']}")
        text_lines.append(f"F-bar = {payload['modified_family']}")
    text_lines.append(f"element = {y}")
    text_lines.append(D.to_text())
    text_lines.append(f"orbit codim = {payload['orbit_codim']}, "
                      f"dim Ext^1(M,M) = {payload['ext1_self']}")
    if "is_minimal" in payload:
        text_lines.append(f"minimal over GF({args.q}): {payload['is_minimal']}")
    return EXIT_OK, _emit(payload, args.format, "\n".join(text_lines))


MINIMALITY_BUDGET = 1 << 18


def _minimal_flag(d: ThinDimVector, q: int, budget: int):
    """Minimality of x-bar over GF(q), or None when the orbit search is too large."""
    try:
        return is_minimal(family_Fbar(d).instantiate([], GF(q)), min(budget, MINIMALITY_BUDGET))
    except BudgetExceeded:
        return None


def cmd_ext(args) -> tuple[int, str]:
    if args.d or args.a:
        d = _dim_vector(args)
        dec = decompose_JK(d)
        t = d.t
        J, K = dec.J, StandardSubset(dec.K, t)
    else:
        if args.J is None or args.K is None or args.t is None:
            raise ValueError("give --J, --K and --t, or --d / --a")
        t = args.t
        J, K = StandardSubset(tuple(_int_list(args.J)), t), StandardSubset(tuple(_int_list(args.K)), t)
    MJ, MK = standard_module(J, t), standard_module(K, t)
    payload = {"t": t, "J": list(J.elements), "K": list(K.elements),
               "hom_formula": hom_dim_standard(J, K), "hom_solver": hom_dim(MJ, MK),
               "ext1_JK": ext1_dim(MJ, MK), "ext1_KJ": ext1_dim(MK, MJ)}
    text = (f"J = {J}, K = {K}, t = {t}\n"
            f"dim Hom(D(J),D(K)) = {payload['hom_formula']} (formula), "
            f"{payload['hom_solver']} (solver)\n"
            f"dim Ext^1(D(J),D(K)) = {payload['ext1_JK']}\n"
            f"dim Ext^1(D(K),D(J)) = {payload['ext1_KJ']}")
    code = EXIT_OK if payload["hom_formula"] == payload["hom_solver"] else EXIT_MISMATCH
    return code, _emit(payload, args.format, text)


def cmd_enumerate(args) -> tuple[int, str]:
    d = _dim_vector(args)
    census = enumerate_orbits(d, args.q, args.budget)
    r = max_class_size(d, args.q, census=census)
    payload = {**census.to_json(), "max_class": r.to_json()}
    payload.pop("schema")
    lines = [f"d = {d}, q = {args.q}: {census.n_orbits} orbits on {census.ctx.n_states} elements",
             f"max class size {r.brute}, predicted {r.predicted}: "
             + ("match" if r.match else ("flagged anomaly" if r.anomaly else "MISMATCH"))]
    for row in census.rows():
        lines.append(f"  {census.ctx.digits_str(row.key)}  size {row.size}  mm {row.mm}  "
                     f"In {row.In}  minimal rep {census.ctx.digits_str(row.minimal_rep)}")
    if args.figures:
        from .plotting import census_figure
        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        name = "".join(map(str, d.entries))
        census_figure(census, out / f"census_{name}_q{args.q}.png", r.predicted)
    code = EXIT_OK if r.match or r.anomaly else EXIT_MISMATCH
    return code, _emit(payload, args.format, "\n".join(lines), census.to_tsv())


def cmd_finite(args) -> tuple[int, str]:
    qs = tuple(_int_list(args.q_list))
    if args.d or args.a:
        ds = [_dim_vector(args)]
    else:
        ds = thin_vectors(n_max=args.n_max)
    rep = VerificationReport("finite", "maximal class size against the closed formula")
    for d in ds:
        for q in qs:
            r = max_class_size(d, q, args.budget)
            rep.add(f"d={d} q={q}", "max class size", r.brute, r.predicted, r.match,
                    r.anomaly and not r.match,
                    "second row of the decomposition is empty" if r.anomaly else "")
    code = EXIT_OK if rep.passed else EXIT_MISMATCH
    return code, _emit(rep.to_json(), args.format, rep.to_text(), rep.to_tsv())


def cmd_verify(args) -> tuple[int, str]:
    opts = SuiteOptions(seed=args.seed, t_max=args.t_max, n_max=args.n_max,
                        q_list=tuple(_int_list(args.q_list)) if args.q_list else None,
                        samples=args.samples, budget=args.budget)
    reports = [run_suite(key, opts) for key in resolve_suites(args.suite)]
    if args.figures:
        from .plotting import report_figure
        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            report_figure(r, out / f"{r.suite}.png")
    ok = all(r.passed for r in reports)
    payload = {"suites": [r.to_json() for r in reports], "passed": ok}
    text = "\n".join(r.to_text() for r in reports)
    tsv = "".join(r.to_tsv() if i == 0 else r.to_tsv().split("\n", 1)[1]
                  for i, r in enumerate(reports))
    return (EXIT_OK if ok else EXIT_MISMATCH), _emit(payload, args.format, text, tsv)


# -- parser ---------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("json", "tsv", "text"), default=default("json"))
    p.add_argument("--seed", type=int, default=default(0))
    p.add_argument("--budget", type=int, default=default(DEFAULT_BUDGET),
                   help="maximum number of states visited by an enumeration")


def _vector_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--d", help="0/1 entries, e.g. 1,1,0,1")
    g.add_argument("--a", help="1-string lengths, e.g. 1,2,2,1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prehom", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="e(d), density and codimension")
    _vector_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("represent", help="representative, family and diagram")
    _vector_flags(p)
    p.add_argument("--variant", choices=("plain", "minimal", "family"), default="plain")
    p.add_argument("--params", help="family parameters x_2,..., nonzero integers")
    p.add_argument("--q", type=int, default=2, help="prime used to confirm minimality")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("ext", help="Hom and Ext^1 between standard modules")
    p.add_argument("--J")
    p.add_argument("--K")
    p.add_argument("--t", type=int)
    _vector_flags(p, required=False)
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("enumerate", help="B(q)-orbit census of n(d) over F_q")
    _vector_flags(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--figures", help="directory for summary PNGs")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("finite", help="maximal class sizes against the closed formula")
    _vector_flags(p, required=False)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--q-list", default="2,3")
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("verify", help="run acceptance suites A1..A9")
    p.add_argument("--suite", default="all")
    p.add_argument("--t-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--q-list")
    p.add_argument("--samples", type=int)
    p.add_argument("--figures", help="directory for summary PNGs")
    p.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        _global_flags(sp, suppress=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, out = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Unsupported as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (PrehomError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
