"""Command line surface.

Subcommands construct the group data, evaluate the uniformizer and the
forms, run verification suites, emit SVG tilings, and print knot-map
samples.  Output is either human-readable text or a structured record
(--format record) that parses back losslessly.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from .errors import TriknotError
from .forms import evaluator_for
from .knotmap import knot_point, lens_data, radial_project, unit_config
from .moebius import LogNonzero, TangentPoint
from .records import print_record
from .svgtile import render_tiling
from .triangle import build_group, domain_spec, tile
from .uniformizer import theta_map
from .verify import results_record, results_text, run_suites
from .words import format_word, standard_characters


def _coprime_pair(parser: argparse.ArgumentParser, p: int, q: int):
    if p < 2 or q < 2 or math.gcd(p, q) != 1 or p == q:
        parser.error("p and q must be distinct coprime integers >= 2, "
                     "got (%d, %d)" % (p, q))


def _add_pq_positional(sub: argparse.ArgumentParser):
    sub.add_argument("p", type=int)
    sub.add_argument("q", type=int)


def _add_pq_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--p", type=int, default=2, dest="p")
    sub.add_argument("--q", type=int, default=3, dest="q")


def _add_output_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--format", choices=("text", "record"), default="text")
    sub.add_argument("--out", metavar="PATH", default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triknot",
        description="Triangle groups, their automorphic forms, and the "
                    "induced torus-knot maps.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("info", help="group constants and matrices")
    _add_pq_positional(sub)
    _add_output_flags(sub)

    sub = subs.add_parser("verify", help="run verification suites")
    _add_pq_positional(sub)
    sub.add_argument("suite", choices=("group", "forms", "knotmap", "all"))
    sub.add_argument("--tol", type=float, default=0.0,
                     help="loosen every threshold to at least this value")
    sub.add_argument("--seed", type=int, default=0)
    _add_output_flags(sub)

    sub = subs.add_parser("tile", help="write an SVG tiling")
    _add_pq_positional(sub)
    sub.add_argument("--domain", choices=("D", "D1", "Dprime"), default="D1")
    sub.add_argument("--radius", type=int, default=2)
    sub.add_argument("--out", metavar="PATH", required=True)

    sub = subs.add_parser("theta", help="evaluate the uniformizer")
    _add_pq_positional(sub)
    sub.add_argument("--z", type=float, nargs=2, metavar=("RE", "IM"),
                     required=True)
    _add_output_flags(sub)

    sub = subs.add_parser("forms", help="automorphic form evaluation")
    forms_subs = sub.add_subparsers(dest="action", required=True)
    ev = forms_subs.add_parser("eval", help="evaluate one form at a "
                                            "lifted tangent point")
    _add_pq_flags(ev)
    ev.add_argument("--tag", choices=("a", "b", "inf"), required=True)
    ev.add_argument("--z", type=float, nargs=2, metavar=("RE", "IM"),
                    required=True)
    ev.add_argument("--w", type=float, nargs=2, metavar=("LOG", "ARG"),
                    default=(0.0, 0.0),
                    help="tangent fiber as log-modulus and argument")
    _add_output_flags(ev)

    sub = subs.add_parser("knot", help="knot curve sampling and projection")
    knot_subs = sub.add_subparsers(dest="action", required=True)
    ks = knot_subs.add_parser("sample", help="point on the torus knot")
    _add_pq_flags(ks)
    ks.add_argument("--t", type=float, required=True,
                    help="curve parameter in [0, 1)")
    _add_output_flags(ks)
    kp = knot_subs.add_parser("project", help="radial projection to the "
                                              "unit sphere")
    _add_pq_flags(kp)
    kp.add_argument("--z1", type=float, nargs=2, metavar=("RE", "IM"),
                    required=True)
    kp.add_argument("--z2", type=float, nargs=2, metavar=("RE", "IM"),
                    required=True)
    _add_output_flags(kp)

    sub = subs.add_parser("lens", help="lens space parameters of the "
                                       "quotient")
    _add_pq_flags(sub)
    _add_output_flags(sub)
    return parser


# ---------------------------------------------------------------------------
# rendering helpers


def _emit(args, record: dict, text: str) -> None:
    out = print_record(record) if args.format == "record" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _mat_record(m) -> dict:
    return {"a": m.a, "b": m.b, "c": m.c, "d": m.d}


def _frac(f: Fraction) -> str:
    return str(f)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_info(args) -> int:
    g = build_group(args.p, args.q)
    chi_o, chi_a, chi_b = standard_characters(g.p, g.q)
    ld = lens_data(g.p, g.q)
    rec = {
        "p": g.p, "q": g.q, "r": g.r,
        "k_o": _frac(g.k_o), "lam": g.lam,
        "p1": g.p1, "q1": g.q1,
        "vertices": {"a": g.vertex_a, "b": g.vertex_b, "d": g.vertex_d,
                     "c": "inf"},
        "matrices": {"A0": _mat_record(g.A0), "B0": _mat_record(g.B0),
                     "gamma0": _mat_record(g.gamma0)},
        "characters": {"t_o": _frac(chi_o.t), "t_a": _frac(chi_a.t),
                       "t_b": _frac(chi_b.t),
                       "order_o": chi_o.order, "order_a": chi_a.order,
                       "order_b": chi_b.order},
        "lens": {"r": ld.r, "param": ld.lens_param,
                 "h_phases": [_frac(x) for x in ld.h_phases],
                 "fixed_point_free": ld.fixed_point_free},
    }
    lines = [
        "(p, q) = (%d, %d)" % (g.p, g.q),
        "r = pq - p - q = %d" % g.r,
        "k_o = %s    lambda = %.12g" % (rec["k_o"], g.lam),
        "bezout p1 = %d, q1 = %d  (p p1 + q q1 = 1)" % (g.p1, g.q1),
        "vertices: a = %.12g%+.12gj   b = %.12g%+.12gj   d = %.12g%+.12gj"
        "   c = inf" % (g.vertex_a.real, g.vertex_a.imag, g.vertex_b.real,
                        g.vertex_b.imag, g.vertex_d.real, g.vertex_d.imag),
        "A0 = [[%.12g, %.12g], [%.12g, %.12g]]"
        % (g.A0.a, g.A0.b, g.A0.c, g.A0.d),
        "B0 = [[%.12g, %.12g], [%.12g, %.12g]]"
        % (g.B0.a, g.B0.b, g.B0.c, g.B0.d),
        "gamma0 = [[%.12g, %.12g], [%.12g, %.12g]]"
        % (g.gamma0.a, g.gamma0.b, g.gamma0.c, g.gamma0.d),
        "characters: t_o = %s   t_a = %s   t_b = %s"
        % (rec["characters"]["t_o"], rec["characters"]["t_a"],
           rec["characters"]["t_b"]),
        "character orders: %d, %d, %d"
        % (chi_o.order, chi_a.order, chi_b.order),
        "lens space: r = %d, parameter %d mod %d, free action: %s"
        % (ld.r, ld.lens_param, max(ld.r, 1), ld.fixed_point_free),
    ]
    _emit(args, rec, "\n".join(lines) + "\n")
    return 0


def _cmd_verify(args) -> int:
    results = run_suites(args.suite, args.p, args.q, seed=args.seed,
                         tol=args.tol)
    rec = results_record(args.p, args.q, args.suite, results)
    _emit(args, rec, results_text(results))
    return 0 if all(r.passed for r in results) else 1


def _cmd_tile(args) -> int:
    g = build_group(args.p, args.q)
    if args.radius < 0:
        raise TriknotError("radius must be >= 0")
    dom = domain_spec(g, args.domain)
    text = render_tiling(g, dom, args.radius)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    count = len(tile(g, dom, args.radius))
    sys.stdout.write("wrote %s: %d tiles, %d bytes\n"
                     % (args.out, count, len(text)))
    return 0


def _cmd_theta(args) -> int:
    g = build_group(args.p, args.q)
    z = complex(args.z[0], args.z[1])
    td = theta_map(g, z)
    rec = {"p": g.p, "q": g.q, "z": z, "theta": td.value,
           "theta_prime": td.derivative, "reduced": td.reduced,
           "word": format_word(td.word)}
    text = ("theta(%.12g%+.12gj) = %.17g%+.17gj\n"
            "theta'        = %.17g%+.17gj\n"
            "reduced point = %.12g%+.12gj  via word %s\n"
            % (z.real, z.imag, td.value.real, td.value.imag,
               td.derivative.real, td.derivative.imag,
               td.reduced.real, td.reduced.imag, format_word(td.word)))
    _emit(args, rec, text)
    return 0


def _cmd_forms_eval(args) -> int:
    g = build_group(args.p, args.q)
    ev = evaluator_for(g)
    z = complex(args.z[0], args.z[1])
    pt = TangentPoint(z, LogNonzero(args.w[0], args.w[1]))
    val = ev.eval_form(args.tag, pt)
    rec = {"p": g.p, "q": g.q, "tag": args.tag, "z": z,
           "w_log": args.w[0], "w_arg": args.w[1],
           "value": val, "abs": abs(val)}
    text = ("f_%s at z = %.12g%+.12gj, w = (%.12g, %.12g):\n"
            "  value = %.17g%+.17gj   |value| = %.12g\n"
            % (args.tag, z.real, z.imag, args.w[0], args.w[1],
               val.real, val.imag, abs(val)))
    _emit(args, rec, text)
    return 0


def _cmd_knot_sample(args) -> int:
    s = knot_point(args.p, args.q, args.t)
    norm = abs(s.z1) ** 2 + abs(s.z2) ** 2
    rec = {"p": args.p, "q": args.q, "t": args.t, "z1": s.z1, "z2": s.z2,
           "norm_error": norm - 1.0, "f_value": s.f_value}
    text = ("knot point at t = %.12g:\n"
            "  z1 = %.17g%+.17gj\n  z2 = %.17g%+.17gj\n"
            "  |norm - 1| = %.3g   |f| = %.3g\n"
            % (args.t, s.z1.real, s.z1.imag, s.z2.real, s.z2.imag,
               abs(norm - 1.0), abs(s.f_value)))
    _emit(args, rec, text)
    return 0


def _cmd_knot_project(args) -> int:
    cfg = unit_config(build_group(args.p, args.q))
    z1 = complex(args.z1[0], args.z1[1])
    z2 = complex(args.z2[0], args.z2[1])
    s = radial_project(cfg, z1, z2)
    norm = abs(s.z1) ** 2 + abs(s.z2) ** 2
    rec = {"p": args.p, "q": args.q, "z1": s.z1, "z2": s.z2,
           "norm_error": norm - 1.0, "f_value": s.f_value}
    text = ("radial projection to the unit sphere:\n"
            "  z1 = %.17g%+.17gj\n  z2 = %.17g%+.17gj\n"
            "  |norm - 1| = %.3g   f = %.12g%+.12gj\n"
            % (s.z1.real, s.z1.imag, s.z2.real, s.z2.imag,
               abs(norm - 1.0), s.f_value.real, s.f_value.imag))
    _emit(args, rec, text)
    return 0


def _cmd_lens(args) -> int:
    ld = lens_data(args.p, args.q)
    rec = {"p": args.p, "q": args.q, "r": ld.r, "param": ld.lens_param,
           "h_phases": [str(x) for x in ld.h_phases],
           "fixed_point_free": ld.fixed_point_free}
    text = ("lens data for (p, q) = (%d, %d):\n"
            "  r = %d\n  parameter = %d mod %d\n"
            "  h rotation numbers: (%s, %s)\n  free action: %s\n"
            % (args.p, args.q, ld.r, ld.lens_param, max(ld.r, 1),
               ld.h_phases[0], ld.h_phases[1], ld.fixed_point_free))
    _emit(args, rec, text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _coprime_pair(parser, args.p, args.q)
    try:
        if args.command == "info":
            return _cmd_info(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "tile":
            return _cmd_tile(args)
        if args.command == "theta":
            return _cmd_theta(args)
        if args.command == "forms":
            return _cmd_forms_eval(args)
        if args.command == "knot":
            if args.action == "sample":
                return _cmd_knot_sample(args)
            return _cmd_knot_project(args)
        if args.command == "lens":
            return _cmd_lens(args)
    except TriknotError as exc:
        sys.stderr.write("error: %s\n" % (exc,))
        return 1
    parser.error("unknown command %r" % (args.command,))
    return 2


if __name__ == "__main__":
    sys.exit(main())
