"""Finiteness-verification driver for ordinary p-adic families.

Given a seed newform of trivial weight (a cuspidal Bianchi eigenform on
``Gamma_0(seed_level)`` with rational integer eigenvalues, ordinary at the
split prime p), the driver

1. probes a nonzero parallel weight at ``Gamma_0(tame)``: a weight k > 0
   with zero cuspidal dimension rules out the diagonal (all-parallel-weight)
   configuration for the family through the seed;
2. scans every level ``t * pi^a * pibar^b`` (t a divisor of the tame level,
   a, b <= depth) together with every even nebentypus of p-power conductor,
   and every cell that could carry an ordinary newform congruent to the
   seed mod p is either shown empty, eliminated with a stored witness, or
   reported as a survivor.

A cell (level M, conductor exponents (s, t)) can carry an ordinary form
only when, at each prime pp above p, the local shape is good (v = 0),
principal series (v = s), or unramified Steinberg (v = 1, s = 0); every
other shape has no unit root.  Ineligible cells need no elimination.

Elimination of an eligible nonzero cell proceeds in layers:

* kernel: intersect the mod-p joint eigenspace for the seed's eigenvalue
  residues (and J-sign) on the integral quotient; an empty joint kernel at
  both primes above p certifies that no congruent eigenform exists.
* eigensystem: compute the joint eigensystems, discard wrong J-sign and
  non-ordinary systems, and for the rest test the congruence exactly: the
  integer-coefficient characteristic polynomial factor attached to the
  system must admit the seed residue as a root mod p, otherwise no Galois
  conjugate of the eigenvalue is congruent to the seed's.

Verdicts: FINITE_CLASSICAL_POINTS when the probe succeeds and every scanned
depth is fully eliminated; DIAGONAL_SUSPECT when the probe finds cuspforms
in every probed weight (base-change/CM flag, not a proof); INCONCLUSIVE
when a survivor remains or the data for an eligible cell is unavailable
within the budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cache import h2_dims
from .cohomology import h2_space
from .dimensions import NewformLedger, eisenstein_dim
from .fields import IQInt, Ideal, format_iq, ideals_norm_up_to, primes_above
from .residues import DirichletChar, characters, proj_line_size, trivial_char
from . import hecke

VERDICT_FINITE = "FINITE_CLASSICAL_POINTS"
VERDICT_DIAGONAL = "DIAGONAL_SUSPECT"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_PRIME_NORM_BOUND = 30
# Spaces with more projective-line classes than this are looked up in the
# cache only; a miss marks the cell unavailable instead of running a
# multi-hour rank computation inside the scan.
DEFAULT_LIVE_LIMIT = 1500


class SpecError(ValueError):
    """The family specification is inconsistent."""


# ---------------------------------------------------------------------------
# family specification and seed identification
# ---------------------------------------------------------------------------

def good_prime_elements(d: int, bound: int = DEFAULT_PRIME_NORM_BOUND
                        ) -> tuple[IQInt, ...]:
    """Canonical generators of the prime ideals of norm <= bound."""
    out = []
    for ideal in ideals_norm_up_to(d, bound):
        fac = ideal.factor()
        if len(fac) == 1 and fac[0][1] == 1:
            out.append(ideal.gen)
    return tuple(out)


@dataclass(frozen=True)
class FamilySpec:
    """An ordinary family, given by its seed newform's level data."""
    d: int
    p: int
    tame: Ideal
    seed_level: Ideal

    def validate(self) -> None:
        pps = primes_above(self.d, self.p)
        if len(pps) != 2:
            raise SpecError(f"{self.p} does not split in Q(sqrt {self.d})")
        if not self.tame.coprime_to(Ideal(IQInt(self.d, self.p))):
            raise SpecError("tame level must be prime to p")
        if not self.tame.divides(self.seed_level):
            raise SpecError("tame level must divide the seed level")
        wild = self.seed_level.quotient(self.tame)
        for q, _ in wild.factor():
            if q not in pps:
                raise SpecError("seed level / tame level must be a product "
                                "of primes above p")

    def p_primes(self) -> tuple[Ideal, Ideal]:
        return primes_above(self.d, self.p)


@dataclass
class SeedIdentity:
    """The seed newform, pinned by its eigenvalue fingerprint mod p."""
    level: Ideal
    j_sign: int
    primes: tuple[IQInt, ...]          # good primes for the fingerprint
    rational: tuple[int, ...]          # integer eigenvalues, same order
    fingerprint: dict                  # prime element -> eigenvalue mod p
    u_primes: tuple[IQInt, ...]
    u_values: tuple[int, ...]
    ordinarity: str

    def to_dict(self) -> dict:
        return {
            "level": format_iq(self.level.gen),
            "j_sign": self.j_sign,
            "eigenvalues": {format_iq(l): a
                            for l, a in zip(self.primes, self.rational)},
            "fingerprint_mod_p": {format_iq(l): a
                                  for l, a in self.fingerprint.items()},
            "u_eigenvalues": {format_iq(l): a
                              for l, a in zip(self.u_primes, self.u_values)},
            "ordinarity": self.ordinarity,
        }


def identify_seed(spec: FamilySpec,
                  primes: tuple[IQInt, ...] | None = None) -> SeedIdentity:
    """Locate the seed: the unique ordinary J-fixed rational newform at
    the seed level with trivial nebentypus."""
    pool = primes if primes is not None else good_prime_elements(spec.d)
    good = tuple(l for l in pool if Ideal(l).coprime_to(spec.seed_level))
    u = tuple(pp.gen for pp in spec.p_primes() if pp.divides(spec.seed_level))
    data = hecke.eigen_data(spec.seed_level, trivial_char(spec.seed_level),
                            good, u_primes=u)
    cands = []
    for s in data.new_systems():
        if s.rational is None or s.j_sign != 1:
            continue
        verdict = hecke.ordinarity(spec.seed_level, trivial_char(
            spec.seed_level), s, good, p=spec.p, u_primes=u)
        if verdict.verdict == "ordinary":
            cands.append(s)
    if len(cands) != 1:
        raise SpecError(f"expected one ordinary J-fixed rational newform at "
                        f"{spec.seed_level}, found {len(cands)}")
    s = cands[0]
    if s.mult != 1:
        raise SpecError("seed eigensystem has multiplicity > 1")
    return SeedIdentity(
        level=spec.seed_level, j_sign=s.j_sign, primes=good,
        rational=tuple(s.rational),
        fingerprint={l: a % spec.p for l, a in zip(good, s.rational)},
        u_primes=u, u_values=tuple(s.u_values),
        ordinarity="ordinary")


# ---------------------------------------------------------------------------
# weight probe
# ---------------------------------------------------------------------------

@dataclass
class WeightProbe:
    dims: dict                       # k -> cuspidal dimension
    first_zero: int | None

    def to_dict(self) -> dict:
        return {"cusp_dims": {str(k): v for k, v in self.dims.items()},
                "first_zero": self.first_zero}


def weight_probe(tame: Ideal, k_list: tuple[int, ...] = (2,)) -> WeightProbe:
    """Cuspidal dimensions at Gamma_0(tame) in parallel weights k > 0.

    Odd k are skipped: with trivial nebentypus the central character
    forces the space to vanish, so they carry no information.
    """
    triv = trivial_char(tame)
    dims: dict = {}
    for k in k_list:
        if k <= 0 or k % 2 == 1:
            continue
        total = h2_dims(tame, triv, k)
        cusp = (total[0] - total[1]) - eisenstein_dim(tame, triv, k)
        dims[k] = cusp
    first = next((k for k, v in dims.items() if v == 0), None)
    return WeightProbe(dims=dims, first_zero=first)


# ---------------------------------------------------------------------------
# depth scan
# ---------------------------------------------------------------------------

@dataclass
class CandidateCell:
    """One (level, nebentypus orbit) cell of the scan."""
    level: Ideal
    conductor: Ideal
    char: DirichletChar | None       # primitive orbit representative
    char_order: int
    orbit_size: int
    eligible: bool
    new_dim: int | None = None       # per orbit representative
    status: str = "pending"          # empty / ineligible / seed / eliminated
    method: str = ""                 #   / survivor / unavailable
    witnesses: list = field(default_factory=list)
    systems: list = field(default_factory=list)
    notes: str = ""

    def resolved(self) -> bool:
        return self.status in ("empty", "ineligible", "seed", "eliminated")

    def to_dict(self) -> dict:
        return {
            "level": format_iq(self.level.gen),
            "level_norm": self.level.norm(),
            "conductor": format_iq(self.conductor.gen),
            "char": self.char.encode() if self.char is not None else "1",
            "char_order": self.char_order,
            "orbit_size": self.orbit_size,
            "eligible": self.eligible,
            "new_dim": self.new_dim,
            "status": self.status,
            "method": self.method,
            "witnesses": self.witnesses,
            "systems": self.systems,
            "notes": self.notes,
        }


@dataclass
class DepthScan:
    depth: int
    cells: list
    complete: bool                   # every eligible nonzero cell resolved
    clean: bool                      # no surviving candidate
    elapsed: float

    def to_dict(self) -> dict:
        return {"depth": self.depth, "complete": self.complete,
                "clean": self.clean, "elapsed": round(self.elapsed, 1),
                "cells": [c.to_dict() for c in self.cells]}


def _even_orbit_reps(cond: Ideal) -> list:
    """(primitive representative, orbit size) per Galois orbit of even
    characters of exact conductor cond.  Orders divisible by 8 are skipped
    (no coherent zeta_8 in the scalar tower)."""
    if cond.is_one():
        return [(None, 1)]
    orbits: dict = {}
    for ch in characters(cond):
        if ch.order % 8 == 0 or ch.parity() != 1:
            continue
        if ch.conductor() != cond:
            continue
        orbits.setdefault(ch.galois_orbit_key(), []).append(ch)
    out = [(chs[0], len(chs)) for chs in orbits.values()]
    out.sort(key=lambda t: (t[0].order, t[0].exps))
    return out


def _eligible_cell(M: Ideal, cond: Ideal, pps) -> bool:
    """Can (M, cond) carry a p-ordinary form?  Per prime above p the local
    shape must be good, principal series, or unramified Steinberg."""
    for pp in pps:
        v = M.valuation(pp)
        c = cond.valuation(pp)
        if not (v == 0 or v == c or (v == 1 and c == 0)):
            return False
    return True


def _new_dim_policy(M: Ideal, cond: Ideal, rep: DirichletChar | None,
                    live_limit: int, deadline: float | None) -> int | None:
    """New-subspace dimension through the cache, refusing to compute
    oversized spaces live.  None = unavailable under the current policy."""
    prim = rep
    ledger = NewformLedger()
    for m in sorted(M.divisors(), key=lambda i: i.norm()):
        if not cond.divides(m):
            continue
        eps_m = prim.lift_to(m) if prim is not None else trivial_char(m)
        try:
            ledger.get(m, eps_m, 0)
            continue
        except KeyError:
            pass
        dims = h2_dims(m, eps_m, compute=False)
        if dims is None:
            if proj_line_size(m) > live_limit:
                return None
            if deadline is not None and time.monotonic() > deadline:
                return None
            dims = h2_dims(m, eps_m, compute=True)
        ledger.add(m, eps_m, 0, dims[0] - dims[1])
    eps_M = prim.lift_to(M) if prim is not None else trivial_char(M)
    return ledger.get(M, eps_M, 0).new


def _cyc_int(c) -> int | None:
    """The value of a CycScalar when it is a rational integer, else None."""
    for q, w in c.coeffs[1:]:
        if q != 0 or w != 0:
            return None
    a, b = c.coeffs[0]
    if b != 0 or a.denominator != 1:
        return None
    return int(a)


def _int_factor_list(coeffs_low_to_high: list) -> list:
    """Irreducible monic factors (low-to-high integer coefficients) of an
    integer polynomial, with multiplicity."""
    from sympy import Poly, Symbol

    x = Symbol("x")
    poly = Poly(list(reversed(coeffs_low_to_high)), x)
    _, facs = poly.factor_list()
    out = []
    for g, e in facs:
        cs = [int(c) for c in reversed(g.all_coeffs())]
        out.append((cs, int(e)))
    return out


def _poly_eval_mod(coeffs_low_to_high, a: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs_low_to_high):
        acc = (acc * a + c) % m
    return acc


def _kernel_eliminate(spec: FamilySpec, seed: SeedIdentity, M: Ideal,
                      eps: DirichletChar, cell: CandidateCell) -> bool:
    """Mod-p joint-kernel elimination on the integral quotient."""
    space = h2_space(M, eps.lift_to(M))
    targets = {l: seed.fingerprint[l] for l in seed.primes
               if Ideal(l).coprime_to(M)}
    witnesses = hecke.congruence_eliminate(space, targets, p=spec.p,
                                           j_sign=seed.j_sign)
    cell.witnesses = [{
        "theta_image": w.theta_image, "possible": w.possible,
        "quotient_dim": w.quotient_dim,
        "kernel_dims": list(w.kernel_dims),
        "primes": [format_iq(l) for l in targets],
        "targets_mod_p": [seed.fingerprint[l] for l in targets],
    } for w in witnesses]
    return all(not w.possible for w in witnesses)


def _eigensystem_scan(spec: FamilySpec, seed: SeedIdentity, M: Ideal,
                      eps: DirichletChar, cell: CandidateCell) -> str:
    """Per-eigensystem elimination; returns the resulting cell status.

    Each new system is discarded for a wrong J-sign, for failing the
    ordinarity criterion, or for an exact mod-p eigenvalue mismatch: the
    irreducible charpoly factor the system belongs to must keep the seed
    residue as a root mod p at every good prime.
    """
    eps = eps.lift_to(M)
    good = tuple(l for l in seed.primes if Ideal(l).coprime_to(M))
    u = tuple(pp.gen for pp in spec.p_primes() if pp.divides(M))
    data = hecke.eigen_data(M, eps, good, u_primes=u)
    space = h2_space(M, eps)
    factors_at: dict = {}

    def factor_candidates(i: int, value: int):
        if i not in factors_at:
            op = hecke.hecke_operator(space, hecke.heilbronn_set(good[i]))
            coeffs = [_cyc_int(c) for c in op.charpoly()]
            factors_at[i] = (None if any(c is None for c in coeffs)
                             else _int_factor_list(coeffs))
        facs = factors_at[i]
        if facs is None:
            return None
        hits = [g for g, _ in facs if _poly_eval_mod(g, value, data.p) == 0]
        if not hits:
            raise hecke.IntegralStructureError(
                f"eigenvalue at {format_iq(good[i])} matches no charpoly "
                f"factor on {M}")
        return hits

    survivors = 0
    seed_copies = 0
    records = []
    for s in data.new_systems():
        rec = {"j_sign": s.j_sign, "mult": s.mult,
               "rational": list(s.rational) if s.rational else None}
        records.append(rec)
        if (M == seed.level and eps.order == 1 and s.rational is not None
                and tuple(s.rational) == seed.rational):
            rec["note"] = "seed"
            seed_copies += s.mult
            if s.mult > 1:
                rec["survivor"] = "seed system with multiplicity > 1"
                survivors += 1
            continue
        if s.j_sign != seed.j_sign:
            rec["eliminated"] = "J-sign"
            continue
        verdict = hecke.ordinarity(M, eps, s, good, p=spec.p, u_primes=u)
        rec["ordinarity"] = verdict.verdict
        if verdict.verdict == "non-ordinary":
            rec["eliminated"] = "non-ordinary"
            continue
        killed = None
        for i, lam in enumerate(good):
            hits = factor_candidates(i, s.values[i])
            if hits is None:
                continue
            a = seed.fingerprint[lam]
            if all(_poly_eval_mod(g, a, spec.p) != 0 for g in hits):
                killed = (format_iq(lam),
                          [g for g in hits if len(g) <= 8])
                break
        if killed is not None:
            rec["eliminated"] = f"eigenvalue mod {spec.p} at {killed[0]}"
            rec["factors"] = killed[1]
            continue
        rec["survivor"] = "not eliminated"
        survivors += 1
    cell.systems = records
    if survivors:
        return "survivor"
    if seed_copies:
        return "seed"
    return "eliminated"


def depth_scan(spec: FamilySpec, depth: int, seed: SeedIdentity,
               live_limit: int = DEFAULT_LIVE_LIMIT,
               deadline: float | None = None) -> DepthScan:
    """Scan all cells at levels t * pi^a * pibar^b (t | tame, a, b <= depth)
    with p-power conductors, eliminating every eligible nonzero cell."""
    t0 = time.monotonic()
    pa, pb = spec.p_primes()
    cells: list[CandidateCell] = []
    levels = []
    for t in spec.tame.divisors():
        for a in range(depth + 1):
            for b in range(depth + 1):
                levels.append((t, a, b,
                               Ideal(t.gen * pa.gen ** a * pb.gen ** b)))
    levels.sort(key=lambda r: (r[3].norm(), r[3].gen.key()))
    for t, a, b, M in levels:
        for s_exp in range(a + 1):
            for t_exp in range(b + 1):
                cond = Ideal(pa.gen ** s_exp * pb.gen ** t_exp)
                for rep, size in _even_orbit_reps(cond):
                    order = rep.order if rep is not None else 1
                    cell = CandidateCell(
                        level=M, conductor=cond, char=rep, char_order=order,
                        orbit_size=size,
                        eligible=_eligible_cell(M, cond, (pa, pb)))
                    cells.append(cell)
                    if deadline is not None and time.monotonic() > deadline:
                        cell.status = "unavailable"
                        cell.notes = "budget exhausted"
                        continue
                    nd = _new_dim_policy(M, cond, rep, live_limit, deadline)
                    cell.new_dim = nd
                    if nd is None:
                        cell.status = "unavailable"
                        cell.notes = "dimension not in cache"
                        continue
                    if nd == 0:
                        cell.status = "empty"
                        continue
                    if not cell.eligible:
                        cell.status = "ineligible"
                        cell.notes = "no p-ordinary forms at this shape"
                        continue
                    _eliminate_cell(spec, seed, cell)
    complete = all(c.resolved() or c.status == "survivor" for c in cells)
    clean = all(c.status != "survivor" for c in cells)
    return DepthScan(depth=depth, cells=cells, complete=complete,
                     clean=clean, elapsed=time.monotonic() - t0)


def _eliminate_cell(spec: FamilySpec, seed: SeedIdentity,
                    cell: CandidateCell) -> None:
    M, rep = cell.level, cell.char
    eps = (rep.lift_to(M) if rep is not None else trivial_char(M))
    if rep is not None:
        # No old copy of the seed can live here (the seed's nebentypus is
        # trivial, old forms keep their primitive character), so an empty
        # joint kernel is decisive.
        if _kernel_eliminate(spec, seed, M, eps, cell):
            cell.status, cell.method = "eliminated", "kernel"
            return
        cell.method = "kernel+eigensystem"
    else:
        cell.method = "eigensystem"
    cell.status = _eigensystem_scan(spec, seed, M, eps, cell)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

@dataclass
class FinitenessReport:
    spec: FamilySpec
    probe: WeightProbe
    seed: SeedIdentity | None
    scans: list
    verdict: str
    evidence_depth: int              # deepest fully verified depth (0 = none)
    elapsed: float
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "d": self.spec.d, "p": self.spec.p,
            "tame": format_iq(self.spec.tame.gen),
            "seed_level": format_iq(self.spec.seed_level.gen),
            "verdict": self.verdict,
            "evidence_depth": self.evidence_depth,
            "elapsed": round(self.elapsed, 1),
            "notes": self.notes,
            "weight_probe": self.probe.to_dict(),
            "seed": self.seed.to_dict() if self.seed else None,
            "scans": [s.to_dict() for s in self.scans],
        }


def run(spec: FamilySpec, depth: int = 2, budget: float | None = None,
        k_list: tuple[int, ...] = (2,),
        live_limit: int = DEFAULT_LIVE_LIMIT) -> FinitenessReport:
    """Probe a nonzero weight, then scan depths 1..depth; see module doc."""
    t0 = time.monotonic()
    deadline = t0 + budget if budget is not None else None
    spec.validate()
    probe = weight_probe(spec.tame, k_list)
    if probe.first_zero is None:
        return FinitenessReport(
            spec=spec, probe=probe, seed=None, scans=[],
            verdict=VERDICT_DIAGONAL, evidence_depth=0,
            elapsed=time.monotonic() - t0,
            notes="cuspforms in every probed weight; the family may be "
                  "base-change/CM (flag only, not a proof)")
    seed = identify_seed(spec)
    scans = []
    evidence = 0
    notes = ""
    verdict = VERDICT_INCONCLUSIVE
    for i in range(1, depth + 1):
        scan = depth_scan(spec, i, seed, live_limit=live_limit,
                          deadline=deadline)
        scans.append(scan)
        if not scan.clean:
            notes = f"surviving candidate at depth {i}"
            break
        if not scan.complete:
            notes = f"depth {i} incomplete (cache/budget); " \
                    f"verified through depth {evidence}"
            break
        evidence = i
    if scans and all(s.clean for s in scans) and evidence >= 1:
        verdict = VERDICT_FINITE
        if not notes:
            notes = f"all candidate cells eliminated through depth {evidence}"
    return FinitenessReport(spec=spec, probe=probe, seed=seed, scans=scans,
                            verdict=verdict, evidence_depth=evidence,
                            elapsed=time.monotonic() - t0, notes=notes)
