"""Command-line entry point.

Subcommands: build, validate, simulate, mapreduce, bounds, search-rainbow.
Every run ends with one machine-readable key=value summary line. Exit codes:
0 success, 1 domain error (invalid scheme, failed decode, axiom violation),
2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import gf, mapreduce, rainbow3ap, schemes, simulator
from .errors import SchemeError
from .schemes import decodability_sigma, sigma_from_doc
from .universe import universe_from_doc


def frac(x):
    """Exact rational plus decimal, e.g. '5/36 (0.1389)'."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x} ({float(x):.4g})"


def _write_json(path, doc):
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _summary(pairs):
    print(" ".join(f"{k}={v}" for k, v in pairs))


def _scheme_line(scheme, extra=()):
    p = scheme.params
    pairs = [("K", p.K), ("F", p.F), ("M/N", frac(p.cache_fraction)),
             ("colors", p.num_colors), ("m", p.m), ("R", frac(p.rate)),
             ("field", p.field)]
    _summary(pairs + list(extra))


def _parse_generator(text):
    rows = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "," in part:
            rows.append([int(tok) for tok in part.split(",")])
        else:
            rows.append([int(ch) for ch in part])
    if not rows:
        raise ValueError("empty generator")
    return rows


def cmd_build(args):
    if args.kind == "man":
        scheme = schemes.scheme_man(args.K, args.t, field=args.field)
    elif args.kind == "union-subsets":
        scheme = schemes.scheme_union_subsets(args.n, args.a, args.b,
                                              field=args.field)
    elif args.kind == "linear-block":
        scheme = schemes.scheme_linear_block(_parse_generator(args.generator),
                                             args.q, field=args.field)
    elif args.kind == "rainbow-3ap":
        if args.strategy == "explicit":
            if not args.explicit:
                raise SchemeError("--strategy explicit needs --explicit FILE")
            doc = json.loads(Path(args.explicit).read_text())
            raps = rainbow3ap.RainbowAPSet.from_doc(doc)
        else:
            raps = rainbow3ap.build_rainbow_ap(args.m, strategy=args.strategy,
                                               color_budget=args.budget)
        scheme = rainbow3ap.build_rainbow_scheme(raps, field=args.field)
    elif args.kind == "pda-import":
        pda = schemes.parse_pda(Path(args.path).read_text())
        scheme = schemes.pda_to_scheme(pda, field=args.field)
    else:
        raise SchemeError(f"unknown scheme kind {args.kind!r}")
    out = args.out or "scheme.json"
    _write_json(out, schemes.scheme_to_doc(scheme))
    _scheme_line(scheme, extra=[("out", out)])
    return 0


def cmd_validate(args):
    path = Path(args.path)
    if path.suffix == ".pda":
        pda = schemes.parse_pda(path.read_text())
        schemes.validate_pda(pda)
        _summary([("valid", "pda"), ("F", pda.F), ("K", pda.K),
                  ("colors", len(pda.colors()))])
        return 0
    doc = json.loads(path.read_text())
    if "pair_colors" in doc:
        scheme = schemes.scheme_from_doc(doc)
        _scheme_line(scheme, extra=[("valid", "scheme")])
        return 0
    if "chi" in doc:
        raps = rainbow3ap.RainbowAPSet.from_doc(doc)
        _summary([("valid", "rainbow-ap-set"), ("n", raps.n),
                  ("A_size", len(raps.members)), ("colors", raps.chi.num_colors)])
        return 0
    if "colored" in doc:
        universe, coloring = universe_from_doc(doc)
        sigma = decodability_sigma(universe, coloring.domain)
        scheme = schemes.build_scheme(universe, coloring, sigma)
        _scheme_line(scheme, extra=[("valid", "universe-coloring")])
        return 0
    raise SchemeError("unrecognized document; expected scheme, coloring, or set")


def cmd_simulate(args):
    doc = json.loads(Path(args.path).read_text())
    scheme = schemes.scheme_from_doc(doc, field=args.field)
    N = args.N if args.N is not None else scheme.params.K
    report = simulator.sweep(scheme, N, policy=args.policy, count=args.count,
                             seed=args.seed, packet_size=args.packet_size)
    simulator.compare_bounds(report, scheme)
    prefix = args.out_prefix or str(Path(args.path).with_suffix("")) + ".report"
    _write_json(prefix + ".json", report.to_doc())
    Path(prefix + ".csv").write_text(report.to_csv_text())
    _summary([("R", frac(report.realized_rate)),
              ("demands", len(report.outcomes)),
              ("all_pass", str(report.all_pass).lower()),
              ("out", prefix + ".json")])
    return 0 if report.all_pass else 1


def _load_mapreduce_scheme(args):
    if args.cyclic is not None:
        return schemes.scheme_cyclic(args.cyclic, field=args.field or gf.GF2)
    if not args.path:
        raise SchemeError("give a universe JSON path or --cyclic N")
    doc = json.loads(Path(args.path).read_text())
    if "pair_colors" in doc:
        # full scheme document; keep its pair coloring and matrix
        return schemes.scheme_from_doc(doc, field=args.field)
    universe, coloring = universe_from_doc(doc)
    if coloring is None:
        raise SchemeError("universe document carries no coloring")
    if "sigma" in doc:
        sigma = sigma_from_doc(doc["sigma"], universe, coloring.domain)
    else:
        sigma = decodability_sigma(universe, coloring.domain)
    return schemes.build_scheme(universe, coloring, sigma,
                                field=args.field or gf.GF2)


def cmd_mapreduce(args):
    scheme = _load_mapreduce_scheme(args)
    instance = mapreduce.build_instance(scheme.universe, scheme.coloring,
                                        Q=args.Q,
                                        value_bytes=args.value_bytes,
                                        seed=args.seed)
    plan = mapreduce.synthesize_shuffle(instance, scheme)
    result = mapreduce.run_reduce(instance, plan)
    pairs = [("r", frac(instance.r)), ("L", frac(plan.L)),
             ("m_prime", plan.m_prime), ("strategy", plan.strategy),
             ("reduce_pass", str(result.passed).lower())]
    if instance.r > 0:
        pairs.append(("bound", frac(mapreduce.cdc_bound(instance.r, instance.K))))
    if args.compare:
        g = plan.g
        if g and g >= 2:
            baseline = Fraction(g, g - 1) * scheme.params.num_colors \
                / (instance.Q * instance.N)
            pairs.append(("pda_baseline", frac(baseline)))
        else:
            pairs.append(("pda_baseline", "n/a"))
    if args.out:
        doc = plan.to_doc(instance)
        doc["reduce_pass"] = result.passed
        _write_json(args.out, doc)
        pairs.append(("out", args.out))
    _summary(pairs)
    return 0 if result.passed else 1


def cmd_bounds(args):
    pairs = []
    if args.M is not None:
        if args.N is None:
            raise SchemeError("cut-set bound needs --N")
        bound = schemes.cutset_bound(args.K, args.N, Fraction(args.M))
        pairs.append(("cutset", frac(bound)))
    if args.r is not None:
        pairs.append(("cdc", frac(mapreduce.cdc_bound(Fraction(args.r), args.K))))
    if not pairs:
        raise SchemeError("nothing to compute; give --M (with --N) and/or --r")
    _summary(pairs)
    return 0


def cmd_search_rainbow(args):
    raps = rainbow3ap.build_rainbow_ap(args.m, strategy=args.strategy,
                                       color_budget=args.budget)
    pairs = [("n", raps.n), ("A_size", len(raps.members)),
             ("colors", raps.chi.num_colors),
             ("alpha_emp", f"{raps.alpha_emp:.4f}"),
             ("beta_emp", f"{raps.beta_emp:.4f}")]
    if args.out:
        _write_json(args.out, raps.to_doc())
        pairs.append(("out", args.out))
    _summary(pairs)
    return 0


def make_parser():
    parser = argparse.ArgumentParser(
        prog="rainbowcc",
        description="Build, validate, and simulate rainbow-coloring coded "
                    "caching schemes and their MapReduce shuffle plans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a catalog scheme")
    p.add_argument("kind", choices=["man", "union-subsets", "linear-block",
                                    "rainbow-3ap", "pda-import"])
    p.add_argument("path", nargs="?", help="input file for pda-import")
    p.add_argument("--K", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--generator", help="rows like '101;011'")
    p.add_argument("--strategy", default="greedy",
                   choices=["greedy", "exact", "explicit"])
    p.add_argument("--explicit", help="rainbow AP set JSON file")
    p.add_argument("--budget", type=int)
    p.add_argument("--field", default=gf.GF2, choices=[gf.GF2, gf.GF256])
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="validate a scheme, coloring, or PDA file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="sweep demands and verify decoding")
    p.add_argument("path", help="scheme JSON file")
    p.add_argument("--N", type=int, help="library size (default K)")
    p.add_argument("--policy", default=simulator.EXHAUSTIVE,
                   choices=[simulator.EXHAUSTIVE, simulator.RANDOM,
                            simulator.WORST_CASE_DISTINCT])
    p.add_argument("--count", type=int, default=100,
                   help="demand count for the random policy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--packet-size", type=int, default=gf.DEFAULT_PACKET_SIZE)
    p.add_argument("--field", choices=[gf.GF2, gf.GF256],
                   help="rebuild the scheme over this field")
    p.add_argument("--out-prefix")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mapreduce", help="synthesize and verify a shuffle plan")
    p.add_argument("path", nargs="?", help="universe+coloring JSON file")
    p.add_argument("--cyclic", type=int, help="use the cyclic family of size N")
    p.add_argument("--Q", type=int, help="function count (default: node count)")
    p.add_argument("--value-bytes", type=int, default=mapreduce.DEFAULT_VALUE_BYTES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", choices=[gf.GF2, gf.GF256],
                   help="scheme field (default: the document's, else gf2)")
    p.add_argument("--compare", action="store_true",
                   help="also print the per-group multicast baseline")
    p.add_argument("--out", help="write the plan report JSON here")
    p.set_defaults(func=cmd_mapreduce)

    p = sub.add_parser("bounds", help="evaluate converse bounds")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--M", type=Fraction, help="cache size, e.g. 1/2")
    p.add_argument("--r", type=Fraction, help="computation load")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search-rainbow", help="search a rainbow 3-AP coloring")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--strategy", default="greedy", choices=["greedy", "exact"])
    p.add_argument("--budget", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search_rainbow)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
