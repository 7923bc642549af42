"""Command line entry point: ``tanakakit <subcommand> ...``.

Exit codes: 0 for any mathematical verdict (including ``undecided``), 2 for
parse and input errors, 3 when the distribution is not bracket-generating at
the requested point, 4 when a size guard stops a computation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .config import Config
from .errors import InputError, NotBracketGeneratingError, SizeGuardError, TanakaError
from .fieldalg import PointQ, VectorField
from .fintype import (CharVarietyBudget, char_variety, finiteness_report, h0, symmetry_bound_free,
                      theorem2_status)
from .flag import derived_flag, flag_at, is_bracket_generating
from .gnla import free_total_dim, gnla_at, witt_dim
from .modelio import Model, emit_report, format_field, parse_expression, parse_model, print_model
from .prolong import tanaka_prolongation
from .symcheck import AtLeast, filtration_degree, graded_symbol, is_symmetry

EXIT_INPUT = 2
EXIT_NOT_BRACKET_GENERATING = 3
EXIT_SIZE = 4


def _read_model(path: str) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model(text)


def _parse_point(text: str | None, model: Model) -> PointQ:
    if text is None:
        return model.point()
    parts = [s for s in text.replace(",", " ").split() if s]
    if len(parts) != model.dim:
        raise InputError(f"--point needs {model.dim} values, got {len(parts)}")
    try:
        return PointQ(model.coords, [Fraction(s) for s in parts])
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--point values must be rationals a/b: {text!r}") from None


def _config(args) -> Config:
    return Config.from_env(max_degree=getattr(args, "max_degree", None),
                           probe_samples=getattr(args, "samples", None),
                           seed=getattr(args, "seed", None),
                           groebner_budget=getattr(args, "groebner_budget", None),
                           output="json" if getattr(args, "json", None) else "text")


def _write_json(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _say(args, *lines):
    # JSON on stdout stays machine-readable
    if not getattr(args, "quiet", False) and getattr(args, "json", None) != "-":
        for line in lines:
            print(line)


def _fmt_list(xs):
    return "(" + ", ".join(str(x) for x in xs) + ")"


# -- subcommands ----------------------------------------------------------------

def cmd_analyze(args) -> int:
    model = _read_model(args.model)
    cfg = _config(args)
    rep = finiteness_report(model, _parse_point(args.point, model), cfg)
    if args.json:
        _write_json(args.json, emit_report(rep))
    cv = rep.char_variety
    _say(args,
         f"model              {rep.model}",
         f"growth             {_fmt_list(rep.growth)}  cumulative {_fmt_list(rep.growth_cumulative)}",
         f"tanaka dims        {_fmt_list(rep.prolongation.dims)}  "
         f"{'terminated, total ' + str(rep.prolongation.total_dim) if rep.prolongation.terminated else 'capped at degree ' + str(cfg.max_degree)}",
         f"h0 dim             {rep.h0.dim}",
         f"char variety       {cv.verdict} ({cv.stage}: {cv.certificate})",
         f"prolongation bound {rep.theorem1_bound if rep.theorem1_bound is not None else '-'} (min over probe points)",
         f"growth criterion   {rep.theorem2}",
         f"verdict            {rep.finiteness_verdict}",
         f"samples            {len(rep.samples)}, {rep.strong_regularity}; seed {cfg.seed}")
    return 0


def cmd_prolong(args) -> int:
    model = _read_model(args.model)
    cfg = _config(args)
    p = _parse_point(args.point, model)
    df = derived_flag(model.frame, cfg.kappa_cap, model.distribution, cfg.probe_samples, cfg.seed)
    fp = flag_at(df, p)
    if not is_bracket_generating(fp):
        raise NotBracketGeneratingError(f"not bracket-generating at the point (growth {_fmt_list(fp.growth)})")
    pro = tanaka_prolongation(gnla_at(df, p, fp), cfg.max_degree, cfg.unknown_cap)
    if args.json:
        _write_json(args.json, emit_report({"model": model.name, "point": p,
                                            "growth_incremental": list(fp.growth),
                                            "tanaka": pro.to_dict(), "seed": cfg.seed,
                                            "config": cfg.to_dict(), "version": __version__}))
    _say(args, f"growth {_fmt_list(fp.growth)}", f"g_k dims {_fmt_list(pro.dims)} ({pro.status})",
         f"total {pro.total_dim if pro.terminated else '-'}")
    return 0


def cmd_fintype(args) -> int:
    if args.growth:
        try:
            growth = [int(s) for s in " ".join(args.growth).replace(",", " ").split()]
        except ValueError:
            raise InputError("--growth must be a list of integers") from None
        _say(args, f"growth criterion: {theorem2_status(growth)}")
        return 0
    if not args.model:
        raise InputError("give a model file or --growth")
    model = _read_model(args.model)
    cfg = _config(args)
    p = _parse_point(args.point, model)
    df = derived_flag(model.frame, cfg.kappa_cap, model.distribution, cfg.probe_samples, cfg.seed)
    fp = flag_at(df, p)
    if not is_bracket_generating(fp):
        raise NotBracketGeneratingError(f"not bracket-generating at the point (growth {_fmt_list(fp.growth)})")
    pro = tanaka_prolongation(gnla_at(df, p, fp), cfg.max_degree, cfg.unknown_cap)
    h = h0(pro)
    cv = char_variety(h, CharVarietyBudget(groebner_budget=cfg.groebner_budget, seed=cfg.seed))
    if args.json:
        _write_json(args.json, emit_report({"model": model.name, "point": p, "h0_dim": h.dim,
                                            "char_variety": cv, "theorem2": theorem2_status(fp.growth),
                                            "seed": cfg.seed, "config": cfg.to_dict(),
                                            "version": __version__}))
    lines = [f"h0 dim {h.dim}", f"char variety {cv.verdict} ({cv.stage}: {cv.certificate})"]
    if cv.has_witness:
        lines.append(f"witness p = {_fmt_list(cv.witness_p)}, q = {_fmt_list(cv.witness_q)}")
    lines.append(f"growth criterion: {theorem2_status(fp.growth)}")
    _say(args, *lines)
    return 0


def cmd_freedim(args) -> int:
    n, k = args.n, args.k
    if n < 2 or k < 1:
        raise InputError("need n >= 2 and k >= 1")
    dims = [witt_dim(n, j) for j in range(1, k + 1)]
    bound = symmetry_bound_free(n, k) if k >= 2 else None
    btext = "infinite (contact)" if k == 2 and n == 2 else ("-" if bound is None else str(bound))
    if args.json:
        _write_json(args.json, emit_report({"n": n, "k": k, "witt_dims": dims,
                                            "free_total_dim": free_total_dim(n, k),
                                            "symmetry_bound": bound if bound is not None else btext,
                                            "version": __version__}))
    _say(args, f"n={n} k={k}", f"witt dims {_fmt_list(dims)}", f"total {free_total_dim(n, k)}",
         f"bound {btext}")
    return 0


def cmd_check_sym(args) -> int:
    model = _read_model(args.model)
    cfg = _config(args)
    spec = args.field
    if spec in model.fields:
        X = model.fields[spec]
    elif spec in model.marked:
        X = model.marked[spec]
    else:
        X = parse_expression(spec, model.coords, model.fields)
        if not isinstance(X, VectorField):
            raise InputError("expression is a function, not a vector field")
    p = _parse_point(args.point, model)
    ok = is_symmetry(X, model.frame, p)
    out = {"model": model.name, "field": format_field(X), "symmetry": ok, "point": p,
           "version": __version__}
    lines = [f"{spec}: {'symmetry' if ok else 'not a symmetry'}"]
    if ok:
        df = derived_flag(model.frame, cfg.kappa_cap, model.distribution, cfg.probe_samples, cfg.seed)
        deg = filtration_degree(X, df, p, cfg.filtration_cap, check=False)
        out["degree"] = str(deg) if isinstance(deg, AtLeast) else deg
        lines.append(f"degree {deg}")
        if not isinstance(deg, AtLeast):
            fp = flag_at(df, p)
            if is_bracket_generating(fp):
                pro = tanaka_prolongation(gnla_at(df, p, fp), max(cfg.max_degree, deg), cfg.unknown_cap)
                if deg < len(pro.levels):
                    sym = graded_symbol(X, df, pro, p, deg)
                    out["symbol"] = sym
                    if sym.coords is not None:
                        lines.append(f"symbol class in g_{deg}: {_fmt_list(sym.coords)}")
                    else:
                        lines.append(f"symbol in g_{deg}: {_fmt_list(sym.element.coords)}")
    if args.json:
        _write_json(args.json, emit_report(out))
    _say(args, *lines)
    return 0


def cmd_model(args) -> int:
    from . import models

    kind, params = args.kind, args.params
    need = {"cartan-jet": 1, "monge": 2, "mixed-jet": 2, "e13": 0}
    if kind not in need:
        raise InputError(f"unknown model kind {kind!r} (choose from {', '.join(need)})")
    if len(params) != need[kind]:
        raise InputError(f"{kind} takes {need[kind]} integer parameter(s)")
    if kind == "cartan-jet":
        m = models.cartan_jet(*params).model
    elif kind == "monge":
        m = models.monge(*params).model
    elif kind == "mixed-jet":
        m = models.mixed_jet(*params).model
    else:
        jm, syms = models.e13_with_symmetries()
        fields = dict(jm.model.fields)
        fields.update({s.name: s.field for s in syms})
        m = Model(jm.model.name, jm.model.coords, fields, jm.model.distribution,
                  jm.model.distribution_name, jm.model.marked, jm.model.base_point)
    sys.stdout.write(print_model(m))
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tanakakit",
                                     description="Flags, Tanaka prolongations and finite-type tests "
                                                 "for polynomial distributions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True, point=True):
        if model:
            p.add_argument("model", help="model file in the .tk description language")
        if point:
            p.add_argument("--point", help="rational point, comma or space separated")
        p.add_argument("--max-degree", type=int, dest="max_degree")
        p.add_argument("--samples", type=int, help="number of seeded probe points")
        p.add_argument("--seed", type=int, help="seed (falls back to $TANAKA_SEED, then 0)")
        p.add_argument("--groebner-budget", type=int, dest="groebner_budget")
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
        p.add_argument("--quiet", action="store_true", help="suppress the text summary")

    common(sub.add_parser("analyze", help="full finite-type analysis"))
    common(sub.add_parser("prolong", help="Tanaka prolongation dimensions"))
    p = sub.add_parser("fintype", help="h0, characteristic variety and growth criterion")
    p.add_argument("model", nargs="?")
    p.add_argument("--growth", nargs="+", help="only classify a growth vector, e.g. 2 1 2 1 or 2,1,2,1")
    common(p, model=False)
    p = sub.add_parser("freedim", help="free nilpotent algebra dimensions and symmetry bound")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    common(p, model=False, point=False)
    p = sub.add_parser("check-sym", help="certify a symmetry and report its degree")
    p.add_argument("model")
    p.add_argument("field", help="field name from the model or a field expression")
    common(p, model=False)
    p = sub.add_parser("model", help="print a built-in model in the description language")
    p.add_argument("kind", help="cartan-jet | monge | mixed-jet | e13")
    p.add_argument("params", nargs="*", type=int)
    return parser


_COMMANDS = {"analyze": cmd_analyze, "prolong": cmd_prolong, "fintype": cmd_fintype,
             "freedim": cmd_freedim, "check-sym": cmd_check_sym, "model": cmd_model}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NotBracketGeneratingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_BRACKET_GENERATING
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except TanakaError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
