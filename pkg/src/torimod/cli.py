"""Command-line interface.

Exit status: 0 on success, 1 when the library raises a domain error (the
message is printed as is), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

from torimod import cache
from torimod.arith.qseries import QSeries, Verdict
from torimod.errors import TorimodError
from torimod.forms.cohomology import toric_form_generator_poly
from torimod.forms.lattice_sum import check_certificate, toric_form_lattice_sum
from torimod.forms.membership import express_in_generators
from torimod.generators import GeneratorPoly, r_symbol, s_symbol
from torimod.io import dumps, load_deg, load_fan


class UsageError(Exception):
    pass


class PipelineMismatch(TorimodError):
    pass


def _require(args, *fields):
    for f in fields:
        if getattr(args, f) is None:
            raise UsageError(f"--{f.replace('_', '-')} is required for '{args.command}'")
    if getattr(args, "prec", None) is not None and args.prec < 1:
        raise UsageError("--prec must be at least 1")


def _fan_and_deg(args):
    _require(args, "fan", "deg")
    try:
        fan = load_fan(args.fan)
    except (OSError, ValueError) as exc:
        raise UsageError(f"--fan: {exc}") from exc
    try:
        deg = load_deg(args.deg, fan)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"--deg: {exc}") from exc
    return fan, deg


def _generator(args) -> GeneratorPoly:
    _require(args, "l", "k")
    if args.type == "r":
        return GeneratorPoly.symbol(args.l, r_symbol(args.k))
    _require(args, "a")
    return GeneratorPoly.symbol(args.l, s_symbol(args.a, args.l, args.k))


def _series_out(series: QSeries, args) -> dict | str:
    return series.pretty() if args.pretty else series.to_json()


def _poly_out(poly: GeneratorPoly, args) -> dict | str:
    return poly.pretty() if args.pretty else poly.to_json()


def _emit(out: dict, args) -> None:
    if args.pretty:
        for key, value in out.items():
            print(f"{key}: {value if not isinstance(value, (dict, list)) else dumps(value)}")
    else:
        print(dumps(out))


# commands ------------------------------------------------------------------------------

def cmd_form(args) -> int:
    fan, deg = _fan_and_deg(args)
    _require(args, "prec")
    out: dict = {}
    lattice = cohom = None
    if args.pipeline in ("lattice", "both"):
        if args.certify:
            lattice, cert = toric_form_lattice_sum(fan, deg, args.prec, certify=True)
            out["certificate"] = cert
            out["certificate_valid"] = check_certificate(fan, cert)
        else:
            lattice = toric_form_lattice_sum(fan, deg, args.prec)
    if args.pipeline in ("cohomology", "both"):
        poly = toric_form_generator_poly(fan, deg)
        cohom = poly.to_series(args.prec)
        out["generators"] = _poly_out(poly, args)
    if lattice is not None and cohom is not None:
        verdict = lattice.compare(cohom)
        if verdict is not Verdict.EQUAL:
            n = lattice.first_difference(cohom)
            raise PipelineMismatch(f"lattice-sum and cohomological pipelines differ at q^{n}")
    series = lattice if lattice is not None else cohom
    out = {"series": _series_out(series, args), **out}
    if args.express:
        out["generators"] = _poly_out(express_in_generators(series, fan.rank, deg.l), args)
    _emit(out, args)
    return 0


def cmd_gen(args) -> int:
    _require(args, "prec")
    g = _generator(args)
    out = {"symbol": g.pretty(), "series": _series_out(g.to_series(args.prec), args)}
    if args.reduce:
        from torimod.generators import reduce_to_s1

        (sym,) = g.symbols()
        out["reduction"] = _poly_out(reduce_to_s1(sym, args.l), args)
    _emit(out, args)
    return 0


def _input_poly(args) -> tuple[GeneratorPoly, int]:
    """A toric form (smooth fan) or a single generator, with its weight."""
    if args.fan is not None:
        fan, deg = _fan_and_deg(args)
        return toric_form_generator_poly(fan, deg), fan.rank
    g = _generator(args)
    return g, g.weight


def cmd_hecke(args) -> int:
    from torimod.hecke import hecke, sublattice_side

    _require(args, "p", "prec")
    poly, weight = _input_poly(args)
    series = hecke(poly, args.p, weight, args.prec)
    out = {"input": _poly_out(poly, args), "operator": "U_p" if poly.l % args.p == 0 else "T_p",
           "series": _series_out(series, args)}
    if args.sublattice:
        fan, deg = _fan_and_deg(args)
        side = sublattice_side(fan, deg, args.p, args.prec)
        out["sublattice_side_equal"] = series.compare(side) is Verdict.EQUAL
    if args.express:
        out["generators"] = _poly_out(express_in_generators(series, weight, poly.l), args)
    _emit(out, args)
    return 0


def cmd_fricke(args) -> int:
    from torimod.hecke import fricke_direct_series, fricke_s1

    _require(args, "a", "l", "prec")
    poly = fricke_s1(args.a, args.l)
    series = poly.to_series(args.prec)
    out = {"generators": _poly_out(poly, args), "series": _series_out(series, args),
           "matches_direct_expansion": series.compare(fricke_direct_series(args.a, args.l, args.prec)) is Verdict.EQUAL}
    _emit(out, args)
    return 0


def cmd_lift(args) -> int:
    from torimod.hecke import level_raise

    _require(args, "p", "prec")
    poly, _ = _input_poly(args)
    raised = level_raise(poly, args.p)
    _emit({"level": raised.l, "generators": _poly_out(raised, args),
           "series": _series_out(raised.to_series(args.prec), args)}, args)
    return 0


def cmd_verify(args) -> int:
    from torimod import verify

    try:
        names = verify.select(args.suite)
    except KeyError:
        raise UsageError(f"--suite: unknown suite '{args.suite}'; choose from all, 1-15, {', '.join(verify.SUITES)}")
    results = []
    for name in names:
        r = verify.run_suite(name)
        results.append(r)
        print(verify.format_table([r]), flush=True)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return 0 if failed == 0 else 1


def cmd_fan_info(args) -> int:
    from torimod.forms.lattice_sum import TruncationBound

    _require(args, "fan")
    try:
        fan = load_fan(args.fan)
    except (OSError, ValueError) as exc:
        raise UsageError(f"--fan: {exc}") from exc
    counts: dict[int, int] = {}
    for dim in fan.cones.values():
        counts[dim] = counts.get(dim, 0) + 1
    out = {"rank": fan.rank, "rays": [list(d) for d in fan.rays],
           "cones_by_dim": {str(k): v for k, v in sorted(counts.items())},
           "complete": fan.is_complete(), "simplicial": fan.is_simplicial(), "smooth": fan.is_smooth()}
    if out["complete"]:
        bound = TruncationBound(fan.triangulate())
        out["interior_points"] = [list(n) for n in bound.interior]
        out["sign_cells"] = len(bound.cells)
    _emit(out, args)
    return 0


COMMANDS = {"form": cmd_form, "gen": cmd_gen, "hecke": cmd_hecke, "fricke": cmd_fricke,
            "lift": cmd_lift, "verify": cmd_verify, "fan-info": cmd_fan_info}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--cache-dir", help="directory for cached generator expansions (overrides TORIMOD_CACHE)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="torimod", description="Exact q-expansions of toric modular forms")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fan=None, deg=None, l=None, a=None, k=None, p=None, prec=None)
        return p

    def form_input(p):
        p.add_argument("--fan", help="bundled fan name (p1, p2, p1xp1, f1, p3), JSON file, or inline JSON")
        p.add_argument("--deg", help='degree function as JSON file or inline JSON, e.g. {"l": 5, "values": [1, 1]}')

    def gen_input(p, k_default=None):
        p.add_argument("--type", choices=["s", "r"], default="s")
        p.add_argument("--a", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--k", type=int, default=k_default)

    p = add("form", "q-expansion of a toric form")
    form_input(p)
    p.add_argument("--prec", type=int)
    p.add_argument("--pipeline", choices=["lattice", "cohomology", "both"], default="lattice")
    p.add_argument("--certify", action="store_true", help="emit and check the termination certificate")
    p.add_argument("--express", action="store_true", help="also write the result in ring generators")

    p = add("gen", "q-expansion of a generator s_{a/l}^(k) or r^(k)")
    gen_input(p)
    p.add_argument("--prec", type=int)
    p.add_argument("--reduce", action="store_true", help="also express it through the s^(1)")

    p = add("hecke", "T_p (or U_p when p divides the level) of a toric form or generator")
    form_input(p)
    gen_input(p, k_default=1)
    p.add_argument("--p", type=int)
    p.add_argument("--prec", type=int)
    p.add_argument("--sublattice", action="store_true", help="compare with the sum over superlattices")
    p.add_argument("--express", action="store_true")

    p = add("fricke", "Fricke image of s_{a/l}^(1)")
    gen_input(p, k_default=1)
    p.add_argument("--prec", type=int, default=20)

    p = add("lift", "f(p tau) in generators of level p l")
    form_input(p)
    gen_input(p, k_default=1)
    p.add_argument("--p", type=int)
    p.add_argument("--prec", type=int, default=20)

    p = add("verify", "run built-in verification suites")
    p.add_argument("--suite", default="all")

    p = add("fan-info", "validate a fan and describe it")
    form_input(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.cache_dir:
        cache.set_cache_dir(args.cache_dir)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.exit(2, f"torimod {args.command}: error: {exc}\n")
    except TorimodError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
