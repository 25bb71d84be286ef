#!/usr/bin/env python3
"""Precompute cohomology ranks for big levels into the shared cache.

Usage:
    python3 scripts/build_h2_cache.py --d -2 --level "9-6*w" \
        [--conductor "3+3*w" ...] [--k 0] [--out src/bianchi/data/h2_cache.json]

For the given level, one Galois-orbit representative per character class
(optionally filtered by conductor) is computed and stored.  Results are
merged into --out (and the env cache) so interrupted runs resume cleanly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bianchi.cache import H2Cache, h2_key  # noqa: E402
from bianchi.cohomology import h2_space  # noqa: E402
from bianchi.fields import Ideal, parse_iq  # noqa: E402
from bianchi.residues import characters  # noqa: E402


def orbit_representatives(level, conductors=None):
    seen = {}
    for ch in characters(level):
        if ch.parity() != 1:
            continue
        if ch.order % 8 == 0:
            # zeta_8 collapses the scalar tower over Q(sqrt -2)
            continue
        if conductors is not None and ch.conductor() not in conductors:
            continue
        key = ch.galois_orbit_key()
        seen.setdefault(key, ch)
    # cheap (small order) classes first so partial runs are most useful
    return sorted(seen.values(), key=lambda c: (c.conductor().norm(), c.order))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=-2)
    ap.add_argument("--level", required=True)
    ap.add_argument("--conductor", action="append", default=None)
    ap.add_argument("--k", type=int, default=0)
    ap.add_argument("--rank-primes", type=int, default=3)
    ap.add_argument("--out", default=None,
                    help="also merge results into this JSON file")
    args = ap.parse_args()

    level = Ideal(parse_iq(args.level, args.d))
    conductors = None
    if args.conductor:
        conductors = {Ideal(parse_iq(c, args.d)) for c in args.conductor}
    cache = H2Cache()
    reps = orbit_representatives(level, conductors)
    print(f"level {level} norm {level.norm()}: {len(reps)} character classes",
          flush=True)
    results = {}
    for i, ch in enumerate(reps):
        key = h2_key(level, ch, args.k)
        hit = cache.get(key)
        if hit is not None:
            print(f"[{i+1}/{len(reps)}] {key} cached -> {hit}", flush=True)
            results[key] = list(hit)
            continue
        t0 = time.time()
        space = h2_space(level, ch, args.k, rank_primes=args.rank_primes)
        cache.put(key, space.dim_e, space.rank_d1)
        results[key] = [space.dim_e, space.rank_d1]
        print(f"[{i+1}/{len(reps)}] {key} -> dim_e={space.dim_e} "
              f"rank={space.rank_d1} h2={space.dim_h2} "
              f"({time.time()-t0:.1f}s)", flush=True)
    if args.out:
        out = Path(args.out)
        disk = {}
        if out.exists():
            with open(out) as fh:
                disk = json.load(fh)
        disk.update(results)
        out.parent.mkdir(parents=True, exist_ok=True)
        tmp = out.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(disk, fh, indent=0, sort_keys=True)
        os.replace(tmp, out)
        print(f"merged {len(results)} entries into {out}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
