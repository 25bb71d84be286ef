"""Persistent cache of computed cohomology ranks.

Rank computations at Gamma_1(p^2)-scale levels take minutes to hours, so
their results (dim E_1^{2,0}, rank d_1) are cached as JSON keyed by
(d, level generator, Galois orbit of the character, weight).  The key uses
the Galois-orbit invariant of the nebentypus: dimensions only depend on the
orbit, so conjugate characters share one entry.

Lookup order: the writable cache directory (``BIANCHI_CACHE_DIR``, default
``~/.cache/bianchi``), then the read-only data file shipped with the
package.  Computed-on-miss results are written back to the writable dir.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .fields import Ideal
from .residues import DirichletChar

ENV_VAR = "BIANCHI_CACHE_DIR"
_DATA_FILE = Path(__file__).parent / "data" / "h2_cache.json"
_CACHE_NAME = "h2_cache.json"


def cache_dir() -> Path:
    root = os.environ.get(ENV_VAR)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "bianchi"


def h2_key(level: Ideal, eps: DirichletChar, k: int) -> str:
    """Canonical cache key; Galois-conjugate characters share a key."""
    if eps.modulus != level:
        eps = eps.lift_to(level)
    (fa, fb), order, exps = eps.galois_orbit_key()
    g = level.gen
    body = ",".join(str(e) for e in exps)
    return f"d{level.d}|L{g.a},{g.b}|f{fa},{fb}|n{order}|e{body}|k{k}"


def _load(path: Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return {}


class H2Cache:
    """Two-layer (writable + packaged) cache of (dim_e, rank_d1) pairs."""

    def __init__(self):
        self._writable = cache_dir() / _CACHE_NAME
        self._mem: dict[str, tuple[int, int]] = {}
        for source in (_DATA_FILE, self._writable):
            for key, val in _load(source).items():
                self._mem[key] = (int(val[0]), int(val[1]))

    def get(self, key: str) -> tuple[int, int] | None:
        return self._mem.get(key)

    def put(self, key: str, dim_e: int, rank_d1: int) -> None:
        self._mem[key] = (dim_e, rank_d1)
        path = self._writable
        path.parent.mkdir(parents=True, exist_ok=True)
        disk = _load(path)
        disk[key] = [dim_e, rank_d1]
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(disk, fh, indent=0, sort_keys=True)
        os.replace(tmp, path)


_singleton: H2Cache | None = None


def shared_cache() -> H2Cache:
    global _singleton
    if _singleton is None:
        _singleton = H2Cache()
    return _singleton


def h2_dims(level: Ideal, eps: DirichletChar, k: int = 0,
            compute: bool = True, rank_primes: int = 3,
            cache: H2Cache | None = None) -> tuple[int, int] | None:
    """(dim E_1^{2,0}, rank d_1) through the cache.

    With ``compute=False`` a miss returns None instead of running the
    (possibly very long) rank computation.
    """
    from .cohomology import h2_space

    if eps.modulus != level:
        eps = eps.lift_to(level)
    if eps.parity() != 1:
        return (0, 0)
    cache = cache or shared_cache()
    key = h2_key(level, eps, k)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not compute:
        return None
    space = h2_space(level, eps, k, rank_primes=rank_primes)
    cache.put(key, space.dim_e, space.rank_d1)
    return (space.dim_e, space.rank_d1)


def h2_dim(level: Ideal, eps: DirichletChar, k: int = 0, **kw) -> int | None:
    out = h2_dims(level, eps, k, **kw)
    if out is None:
        return None
    return out[0] - out[1]


def new_dim(level: Ideal, eps: DirichletChar, k: int = 0,
            compute: bool = True, cache: H2Cache | None = None,
            ledger=None) -> int | None:
    """Dimension of the new subspace, via the degeneracy-map ledger.

    Total dimensions at the level and at every divisor level (down to the
    conductor of eps) are pulled through the cache; the old part is then
    sigma_0-weighted over proper divisors.  Returns None when compute=False
    and some required dimension is missing from the cache.
    """
    from .dimensions import NewformLedger

    if eps.modulus != level:
        eps = eps.lift_to(level)
    if eps.parity() != 1:
        return 0
    if ledger is None:
        ledger = NewformLedger()
    prim = eps.primitive()
    cond = prim.modulus
    for m in sorted(level.divisors(), key=lambda i: i.norm()):
        if not cond.divides(m):
            continue
        key_eps = prim.lift_to(m)
        try:
            ledger.get(m, key_eps, k)
            continue
        except KeyError:
            pass
        dims = h2_dims(m, key_eps, k, compute=compute, cache=cache)
        if dims is None:
            return None
        ledger.add(m, key_eps, k, dims[0] - dims[1])
    return ledger.get(level, eps, k).new
