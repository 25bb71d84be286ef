"""Command-line interface.

Subcommands:

* ``bianchi hecke --level L [--char C] [--primes ...]`` — eigenvalue table
  for one space, as Markdown (stdout) and JSON (``--out``).
* ``bianchi rigidity classify --series f.json --p 3 [--D --M --mmax]`` —
  classify a two-variable p-adic power series (diagonal / torus translate /
  no translate up to bounds).
* ``bianchi pipeline run --d -2 --p 3 --tame N --seed-level L --depth 2
  [--budget 4h] [--out report.md]`` — finiteness verification; writes the
  Markdown report and a JSON report next to it.

Elements of the ring of integers are written ``a+b*w`` with w = sqrt(d);
characters as exponent vectors ``[e1,...,er]@modulus``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .fields import IQInt, Ideal, parse_iq, format_iq
from .residues import DirichletChar, trivial_char
from . import pipeline as pl
from . import reports


def _parse_budget(text: str) -> float:
    text = text.strip().lower()
    units = {"s": 1, "m": 60, "h": 3600, "d": 86400}
    if text and text[-1] in units:
        return float(text[:-1]) * units[text[-1]]
    return float(text)


def _parse_primes(text: str, d: int) -> tuple[IQInt, ...]:
    return tuple(parse_iq(part, d) for part in text.split(",") if part.strip())


def _cmd_hecke(args) -> int:
    d = args.d
    level = Ideal(parse_iq(args.level, d))
    if args.weight != 0:
        print("error: eigenvalue tables are implemented for weight 0 only",
              file=sys.stderr)
        return 2
    eps = (DirichletChar.decode(args.char, d).lift_to(level)
           if args.char else trivial_char(level))
    if args.primes:
        primes = _parse_primes(args.primes, d)
    else:
        primes = pl.good_prime_elements(d)
    from .fields import primes_above
    u = tuple(pp.gen for pp in primes_above(d, args.p)
              if pp.divides(level)) if args.u else ()
    table, payload = reports.eigen_table(level, eps, primes, u_primes=u)
    print(table)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=1))
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_rigidity_classify(args) -> int:
    from . import rigidity

    text = Path(args.series).read_text()
    phi = rigidity.PSeries2.from_json(
        text, p=args.p,
        D=args.D if args.D is not None else rigidity.DEFAULT_D,
        M=args.M if args.M is not None else rigidity.DEFAULT_M)
    mmax = args.mmax if args.mmax is not None else rigidity.DEFAULT_M_MAX
    result = rigidity.classify(phi, m_max=mmax)
    out = {
        "label": result.label,
        "bounds": result.bounds,
        "points_sampled": result.points_sampled,
    }
    if result.hit is not None:
        out["translate"] = {
            "n": str(result.hit.n_value),
            "n_prec": result.hit.n_prec,
            "xi": list(result.hit.xi),
            "swap": result.hit.swap,
        }
    if result.empirical_min is not None:
        out["empirical_min_valuation"] = str(result.empirical_min)
    print(json.dumps(out, indent=1))
    return 0


def _cmd_pipeline_run(args) -> int:
    d = args.d
    spec = pl.FamilySpec(d=d, p=args.p,
                         tame=Ideal(parse_iq(args.tame, d)),
                         seed_level=Ideal(parse_iq(args.seed_level, d)))
    budget = _parse_budget(args.budget) if args.budget else None
    report = pl.run(spec, depth=args.depth, budget=budget)
    md = reports.report_markdown(report)
    if args.out:
        Path(args.out).write_text(md)
        jpath = Path(args.out).with_suffix(".json")
        jpath.write_text(reports.report_json(report))
        print(f"wrote {args.out} and {jpath}", file=sys.stderr)
    else:
        print(md)
    print(f"verdict: {report.verdict} (evidence depth "
          f"{report.evidence_depth})")
    return 0 if report.verdict != pl.VERDICT_INCONCLUSIVE else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="bianchi",
        description="Bianchi modular forms: dimensions, Hecke eigensystems, "
                    "p-adic rigidity, and finiteness verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hecke", help="eigenvalue table for one space")
    h.add_argument("--d", type=int, default=-2)
    h.add_argument("--p", type=int, default=3)
    h.add_argument("--level", required=True)
    h.add_argument("--char", default=None,
                   help="character as [e1,...,er]@modulus (default trivial)")
    h.add_argument("--weight", type=int, default=0)
    h.add_argument("--primes", default=None,
                   help="comma-separated prime elements (default: norm <= "
                        f"{pl.DEFAULT_PRIME_NORM_BOUND})")
    h.add_argument("--u", action="store_true",
                   help="include U-eigenvalues at primes above p dividing "
                        "the level")
    h.add_argument("--out", default=None, help="JSON payload path")
    h.set_defaults(func=_cmd_hecke)

    r = sub.add_parser("rigidity", help="p-adic power series tools")
    rsub = r.add_subparsers(dest="rigidity_command", required=True)
    rc = rsub.add_parser("classify", help="diagonal / translate / finite")
    rc.add_argument("--series", required=True, help="JSON series file")
    rc.add_argument("--p", type=int, default=3)
    rc.add_argument("--D", type=int, default=None)
    rc.add_argument("--M", type=int, default=None)
    rc.add_argument("--mmax", type=int, default=None)
    rc.set_defaults(func=_cmd_rigidity_classify)

    pr = sub.add_parser("pipeline", help="finiteness verification")
    psub = pr.add_subparsers(dest="pipeline_command", required=True)
    pp = psub.add_parser("run", help="run the full pipeline on one family")
    pp.add_argument("--d", type=int, default=-2)
    pp.add_argument("--p", type=int, default=3)
    pp.add_argument("--tame", required=True)
    pp.add_argument("--seed-level", required=True)
    pp.add_argument("--depth", type=int, default=2)
    pp.add_argument("--budget", default=None, help="e.g. 4h, 30m, 600s")
    pp.add_argument("--out", default=None, help="Markdown report path")
    pp.set_defaults(func=_cmd_pipeline_run)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
