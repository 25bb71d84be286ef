"""Closed-form dimension combinatorics for spaces of Bianchi modular forms.

Provides cusp counts for unit-refined congruence subgroups, the Eisenstein
dimension nu_inf(eps) in both its local-factor product form and its divisor
sum form (computed independently and required to agree), Moebius-inversion
consistency checks across nebentypus characters, and the old/new dimension
ledger that splits computed totals into Eisenstein + old + new parts.

Weight convention: k counts the symmetric power of the coefficient module,
so k = 0 is the trivial (constant) coefficient case.  The boundary relation
that removes one Eisenstein dimension applies exactly when the coefficient
module is trivial and the character has conductor (1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fields import IQInt, Ideal, euler_phi, gcd as iq_gcd, sigma0
from .residues import (DirichletChar, Elt, proj_line_size, residue_ring,
                       trivial_char, unit_group)

__all__ = [
    "lambda_factor", "eisenstein_dim", "eisenstein_forms",
    "cusp_count", "cusp_count_brute",
    "cusp_count_prefactor", "full_unit_subgroup", "kernel_subgroup",
    "pm_one_subgroup", "trivial_subgroup", "subgroup_generated",
    "moebius_consistency", "MoebiusReport", "LedgerRow", "NewformLedger",
]


# ---------------------------------------------------------------------------
# local factors and the Eisenstein dimension


def lambda_factor(r: int, s: int, l: int) -> int:
    """Local factor at a prime of norm l with level exponent r and conductor
    exponent s."""
    if s < 0 or r < max(s, 1):
        raise ValueError(f"invalid local exponents r={r}, s={s}")
    if 2 * s > r:
        return 2 * l ** (r - s)
    half, odd = divmod(r, 2)
    if odd:
        return 2 * l ** half
    return l ** half + l ** (half - 1)


def eisenstein_dim(level: Ideal, eps: DirichletChar, k: int = 0) -> int:
    """Dimension of the Eisenstein subspace at the given level, nebentypus
    and symmetric-power weight k.

    Computed by the product of local factors over primes dividing the
    level, and independently by the divisor sum over d | N with
    gcd(d, N/d) dividing N / conductor; the two must agree.
    """
    if eps.modulus != level:
        eps = eps.lift_to(level)
    if eps.parity() != 1:
        return 0
    cond = eps.conductor()
    if level.is_one():
        return 0
    prod, dsum = eisenstein_forms(level, cond)
    assert prod == dsum, (prod, dsum, level, eps)
    delta = 1 if (k == 0 and cond.is_one()) else 0
    return prod - delta


def eisenstein_forms(level: Ideal, cond: Ideal) -> tuple[int, int]:
    """The pre-delta Eisenstein count as (local-factor product, divisor
    sum), parameterized by the conductor ideal alone.

    The two are proved equal; computing both independently is the
    cross-validation used by the test suite.
    """
    if not cond.divides(level):
        raise ValueError("conductor must divide the level")
    prod = 1
    for prime, r in level.factor():
        prod *= lambda_factor(r, cond.valuation(prime), prime.norm())
    dsum = 0
    residual = level.quotient(cond)
    for d in level.divisors():
        g = d.gcd(level.quotient(d))
        if g.divides(residual):
            dsum += euler_phi(g)
    return prod, dsum


# ---------------------------------------------------------------------------
# subgroups of the unit group, given as frozensets of reduced residues


def full_unit_subgroup(level: Ideal) -> frozenset:
    return frozenset(unit_group(level).elements())


def trivial_subgroup(level: Ideal) -> frozenset:
    return frozenset({residue_ring(level).one})


def pm_one_subgroup(level: Ideal) -> frozenset:
    ring = residue_ring(level)
    return frozenset({ring.one, ring.neg(ring.one)})


def kernel_subgroup(eps: DirichletChar) -> frozenset:
    return frozenset(u for u in unit_group(eps.modulus).elements()
                     if eps.value_exp(u) == 0)


def subgroup_generated(level: Ideal, gens) -> frozenset:
    ring = residue_ring(level)
    elems = {ring.one}
    frontier = [ring.reduce(g) if isinstance(g, IQInt) else g for g in gens]
    for g in frontier:
        if not ring.is_unit(g):
            raise ValueError(f"{g} is not a unit modulo {level}")
    while frontier:
        x = frontier.pop()
        for g in list(elems):
            for y in (ring.mul(x, g),):
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
    return frozenset(elems)


def _small_generating_set(level: Ideal, H: frozenset) -> list:
    """Greedy generating set for a subgroup of the units, used to shrink
    orbit-closure neighbor lists."""
    gens: list = []
    span = subgroup_generated(level, gens)
    for h in sorted(H):
        if h in span:
            continue
        gens.append(h)
        span = subgroup_generated(level, gens)
        if len(span) == len(H):
            break
    return gens


def _check_subgroup(level: Ideal, H: frozenset) -> None:
    ring = residue_ring(level)
    if ring.one not in H:
        raise ValueError("subgroup must contain 1")
    for x in H:
        if not ring.is_unit(x):
            raise ValueError(f"{x} is not a unit modulo {level}")
    for x in H:
        for y in H:
            if ring.mul(x, y) not in H:
                raise ValueError("set is not closed under multiplication")


# ---------------------------------------------------------------------------
# cusp counts


def cusp_count(level: Ideal, H: frozenset) -> int:
    """Number of cusps for the congruence subgroup with lower-left entries
    divisible by the level and diagonal entries in H.

    Divisor-sum form: sum over d | N of phi(d) phi(N/d) / |H_d| where H_d
    is the image of H modulo lcm(d, N/d).
    """
    _check_subgroup(level, H)
    ring = residue_ring(level)
    total = 0
    for d in level.divisors():
        nd = d.lcm(level.quotient(d))
        rd = residue_ring(nd)
        hd = {rd.reduce(ring.lift(h)) for h in H}
        term = euler_phi(d) * euler_phi(level.quotient(d))
        if term % len(hd) != 0:
            raise ArithmeticError(
                f"divisor term {term} not divisible by |H_d|={len(hd)}")
        total += term // len(hd)
    return total


def cusp_count_prefactor(level: Ideal, H: frozenset) -> int:
    """The closed form phi(N)/|H| * |P^1(O/N)|.

    Kept only as a cross-report: it counts scaling classes of unimodular
    pairs, which exceeds the cusp count because it ignores the upper
    triangular translations.  See ``cusp_count`` for the trusted value.
    """
    num = euler_phi(level) * proj_line_size(level)
    if num % len(H) != 0:
        raise ArithmeticError("prefactor form not integral")
    return num // len(H)


def cusp_count_brute(level: Ideal, H: frozenset) -> int:
    """Direct orbit enumeration oracle for ``cusp_count``.

    Enumerates pairs (c, d) modulo N generating the unit ideal together
    with N, then counts orbits under scaling by H and the translations
    (c, d) -> (c, d + b c).
    """
    _check_subgroup(level, H)
    ring = residue_ring(level)
    omega = ring.reduce(IQInt(level.d, 0, 1))
    gens = _small_generating_set(level, H)
    elems = ring.elements()
    n = len(elems)
    pos = {e: i for i, e in enumerate(elems)}

    # bitmask of prime divisors of the level containing each residue
    primes = [p for p, _ in level.factor()]
    mask = []
    for e in elems:
        g = iq_gcd(ring.lift(e), level.gen)
        gid = Ideal(g)
        mask.append(sum(1 << i for i, p in enumerate(primes)
                        if p.divides(gid)))

    # permutation tables: scaling by each generator, translation by c, wc
    scale = [[pos[ring.mul(h, e)] for e in elems] for h in gens]
    addc = [[pos[ring.add(e, c)] for e in elems] for c in elems]
    womega = [pos[ring.mul(omega, c)] for c in elems]

    pair_idx = {}
    pairs = []
    for ci in range(n):
        for ei in range(n):
            if mask[ci] & mask[ei]:
                continue
            pair_idx[ci * n + ei] = len(pairs)
            pairs.append(ci * n + ei)
    seen = bytearray(len(pairs))
    orbits = 0
    for start, code in enumerate(pairs):
        if seen[start]:
            continue
        orbits += 1
        stack = [code]
        seen[start] = True
        while stack:
            code = stack.pop()
            ci, ei = divmod(code, n)
            nbrs = [sc[ci] * n + sc[ei] for sc in scale]
            nbrs.append(ci * n + addc[ci][ei])
            nbrs.append(ci * n + addc[womega[ci]][ei])
            for nb in nbrs:
                j = pair_idx[nb]
                if not seen[j]:
                    seen[j] = True
                    stack.append(nb)
    return orbits


# ---------------------------------------------------------------------------
# Moebius-inversion consistency across characters


@dataclass
class MoebiusReport:
    level: Ideal
    eps: DirichletChar
    nebentypus_dim: int         # dim of the eps-eigenspace, computed directly
    moebius_value: int          # the alternating-sum reconstruction
    kernel_dim: int             # dim of the ker(eps)-refined space
    character_sum: int          # sum of dims over characters trivial on ker
    ok: bool


def _moebius(n: int) -> int:
    if n == 1:
        return 1
    mu, m = 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            mu = -mu
        p += 1
    if m > 1:
        mu = -mu
    return mu


def _euler_int(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out *= q - q // p
        p += 1
    if m > 1:
        out *= m - 1
    return out


def _int_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def moebius_consistency(level: Ideal, eps: DirichletChar,
                        dim_fn=None) -> MoebiusReport:
    """Cross-check the nebentypus decomposition of unit-refined spaces.

    Verifies (for trivial coefficients):
      * dim of the eps-eigenspace = 1/phi(n) * sum over componentwise
        divisors delta of n of mu(delta) * dim of the ker(eps^delta)-refined
        space, where n records the order of each component of eps; and
      * the dims of the eigenspaces of all powers of eps sum back to the
        dim of the ker(eps)-refined space.

    dim_fn(level, eps_or_None, subgroup) must return the relevant total
    dimension; it defaults to the cohomology computation.
    """
    if dim_fn is None:
        from .cohomology import h2_space

        def dim_fn(lv, char, subgroup):
            if subgroup is not None:
                return h2_space(lv, trivial_char(lv), 0,
                                subgroup=subgroup).dim_h2
            return h2_space(lv, char, 0).dim_h2

    if eps.modulus != level:
        eps = eps.lift_to(level)
    orders = unit_group(level).orders
    comp_orders = tuple(N // _gcd_int(N, e)
                        for N, e in zip(orders, eps.exps))
    phi_vec = 1
    for n in comp_orders:
        phi_vec *= _euler_int(n)

    group = unit_group(level)
    acc = 0
    for delta in _vector_divisors(comp_orders):
        mu = 1
        for dl in delta:
            mu *= _moebius(dl)
        if mu == 0:
            continue
        # joint kernel of all powered components, not of their product
        pow_exps = tuple((e * dl) % N
                         for e, dl, N in zip(eps.exps, delta, orders))
        kernel = frozenset(
            u for u in group.elements()
            if all((pe * lg) % N == 0
                   for pe, lg, N in zip(pow_exps, group.dlog(u), orders)))
        acc += mu * dim_fn(level, None, kernel)
    if acc % phi_vec != 0:
        raise ArithmeticError("Moebius sum not divisible by phi(n)")
    moebius_value = acc // phi_vec

    direct = dim_fn(level, eps, None)

    # second check: eigenspace dims of powers of eps sum to the
    # ker(eps)-refined dim (the quotient by the kernel is cyclic, generated
    # by eps itself).
    order = eps.order if eps.order else 1
    char_sum = sum(dim_fn(level, eps.galois_twist(m), None)
                   for m in range(order))
    kernel_dim = dim_fn(level, None, kernel_subgroup(eps))

    ok = (direct == moebius_value) and (char_sum == kernel_dim)
    return MoebiusReport(level=level, eps=eps, nebentypus_dim=direct,
                         moebius_value=moebius_value, kernel_dim=kernel_dim,
                         character_sum=char_sum, ok=ok)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _vector_divisors(ns: tuple[int, ...]):
    if not ns:
        yield ()
        return
    for head in _int_divisors(ns[0]):
        for tail in _vector_divisors(ns[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# old/new ledger


@dataclass
class LedgerRow:
    level: Ideal
    eps: DirichletChar          # primitive representative
    k: int
    total: int
    eisenstein: int
    cusp: int
    old: int
    new: int
    provenance: str = "computed"

    def as_tuple(self):
        return (self.total, self.eisenstein, self.cusp, self.old, self.new)


def _row_key(level: Ideal, eps: DirichletChar, k: int):
    prim = eps.primitive()
    return (level.gen.key(), prim.galois_orbit_key(), k)


@dataclass
class NewformLedger:
    """Accumulates computed total dimensions and splits them into
    Eisenstein + old + new, using the degeneracy-map decomposition: the old
    part at level N is the sum over proper divisors M (divisible by the
    conductor) of sigma0(N/M) times the new dimension at M."""

    rows: dict = field(default_factory=dict)

    def add(self, level: Ideal, eps: DirichletChar, k: int,
            total: int, provenance: str = "computed") -> LedgerRow:
        if eps.modulus != level:
            eps = eps.lift_to(level)
        eis = eisenstein_dim(level, eps, k)
        cusp = total - eis
        if cusp < 0:
            raise ArithmeticError(
                f"total {total} below Eisenstein dimension {eis} at {level}")
        cond = eps.conductor()
        old = 0
        for m in level.divisors():
            if m == level or not cond.divides(m):
                continue
            sub = self.rows.get(_row_key(m, eps, k))
            if sub is None:
                raise KeyError(
                    f"missing ledger row at divisor level {m} "
                    f"for conductor {cond}")
            old += sigma0(level.quotient(m)) * sub.new
        new = cusp - old
        if new < 0:
            raise ArithmeticError(
                f"negative new dimension {new} at level {level}")
        row = LedgerRow(level=level, eps=eps.primitive(), k=k, total=total,
                        eisenstein=eis, cusp=cusp, old=old, new=new,
                        provenance=provenance)
        self.rows[_row_key(level, eps, k)] = row
        return row

    def get(self, level: Ideal, eps: DirichletChar, k: int) -> LedgerRow:
        return self.rows[_row_key(level, eps, k)]

    def _sorted_rows(self) -> list[LedgerRow]:
        return [self.rows[key] for key in
                sorted(self.rows,
                       key=lambda t: (self.rows[t].level.norm(), t))]

    def to_csv(self) -> str:
        lines = ["level,character,conductor,k,total,eisenstein,cusp,old,new,"
                 "provenance"]
        for row in self._sorted_rows():
            lines.append(",".join(str(x) for x in (
                row.level.gen, row.eps.encode(),
                row.eps.conductor().gen, row.k, row.total,
                row.eisenstein, row.cusp, row.old, row.new,
                row.provenance)))
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        header = ("| level | character | conductor | k | total | eis | "
                  "cusp | old | new |")
        sep = "|---" * 9 + "|"
        lines = [header, sep]
        for row in self._sorted_rows():
            lines.append("| " + " | ".join(str(x) for x in (
                row.level.gen, row.eps.encode(),
                row.eps.conductor().gen, row.k, row.total,
                row.eisenstein, row.cusp, row.old, row.new)) + " |")
        return "\n".join(lines) + "\n"
