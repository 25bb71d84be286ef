"""Residue rings O_F/n, their unit groups, Dirichlet characters, and
projective lines P^1(O_F/n).

Elements of a residue ring are canonical coordinate pairs obtained by reducing
against a Hermite normal form basis of the lattice n*O_F.  Unit groups are
stored as generator lists with orders; generators are found by a greedy
maximal-order search per CRT factor so that character exponent vectors are
stable across runs.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd as igcd, lcm

from .fields import (
    IQInt, Ideal, canonical_associate, divide_exact, egcd, format_iq, gcd,
    parse_iq, units,
)

Elt = tuple[int, int]  # canonical (a, b) coordinates inside a ResidueRing


class ResidueRing:
    """O_F modulo a nonzero ideal, with canonical representatives."""

    def __init__(self, modulus: Ideal):
        self.modulus = modulus
        self.d = modulus.d
        g = modulus.gen
        # lattice g*O_F in (a, b) coordinates: rows g*1 and g*omega
        from .fields import _basis_params
        t, m = _basis_params(self.d)
        v1 = (g.a, g.b)
        v2 = (-m * g.b, g.a + t * g.b)
        self._hnf = _hnf2(v1, v2)
        d1, c, d2 = self._hnf
        assert d1 * d2 == modulus.norm()
        self.size = modulus.norm()

    def reduce(self, x: IQInt) -> Elt:
        d1, c, d2 = self._hnf
        a, b = x.a, x.b
        k = b // d2
        a -= k * c
        b -= k * d2
        return (a % d1, b)

    def lift(self, e: Elt) -> IQInt:
        return IQInt(self.d, e[0], e[1])

    def elements(self) -> list[Elt]:
        d1, _, d2 = self._hnf
        return [(x, y) for y in range(d2) for x in range(d1)]

    def add(self, x: Elt, y: Elt) -> Elt:
        return self.reduce(IQInt(self.d, x[0] + y[0], x[1] + y[1]))

    def mul(self, x: Elt, y: Elt) -> Elt:
        return self.reduce(self.lift(x) * self.lift(y))

    def neg(self, x: Elt) -> Elt:
        return self.reduce(IQInt(self.d, -x[0], -x[1]))

    @property
    def one(self) -> Elt:
        return self.reduce(IQInt(self.d, 1))

    @property
    def zero(self) -> Elt:
        return (0, 0)

    def is_unit(self, x: Elt) -> bool:
        return gcd(self.lift(x), self.modulus.gen).is_unit()

    def inv(self, x: Elt) -> Elt:
        """Multiplicative inverse; raises on non-units."""
        s, _, g = egcd(self.lift(x), self.modulus.gen)
        if not g.is_unit():
            raise ZeroDivisionError(f"{x} not invertible mod {self.modulus}")
        # s * x = g (a unit of O_F), so x^{-1} = s * g^{-1} = s * conj(g)
        return self.reduce(s * g.conj())

    def pow(self, x: Elt, n: int) -> Elt:
        out = self.one
        if n < 0:
            x, n = self.inv(x), -n
        while n:
            if n & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            n >>= 1
        return out


def _hnf2(v1: tuple[int, int], v2: tuple[int, int]) -> tuple[int, int, int]:
    """HNF basis (d1, 0), (c, d2) of the rank-2 lattice spanned by v1, v2."""
    a1, b1 = v1
    a2, b2 = v2
    # euclid on the second coordinates
    while b2:
        q = b1 // b2
        a1, b1, a2, b2 = a2, b2, a1 - q * a2, b1 - q * b2
    d2 = b1
    if d2 < 0:
        a1, d2 = -a1, -d2
    d1 = abs(a2)
    c = a1 % d1
    return d1, c, d2


@lru_cache(maxsize=None)
def residue_ring(modulus: Ideal) -> ResidueRing:
    return ResidueRing(modulus)


class UnitGroup:
    """(O_F/n)^x as an abelian group with a fixed generator basis.

    gens[i] has order orders[i]; every unit is uniquely prod gens[i]^e_i with
    0 <= e_i < orders[i], and `dlog` inverts that by table lookup.
    """

    def __init__(self, modulus: Ideal):
        self.modulus = modulus
        self.ring = residue_ring(modulus)
        gens: list[Elt] = []
        orders: list[int] = []
        # factor-by-factor: gens of each prime-power part lifted by CRT
        for prime, e, local_gens, local_orders in _local_unit_data(modulus):
            lift = _crt_lift(modulus, Ideal(prime.gen ** e))
            for g, n in zip(local_gens, local_orders):
                gens.append(self.ring.reduce(lift(IQInt(modulus.d, *g))))
                orders.append(n)
        self.gens = gens
        self.orders = orders
        self.order = 1
        for n in orders:
            self.order *= n
        self.exponent = lcm(*orders) if orders else 1
        self._dlog: dict[Elt, tuple[int, ...]] = {}
        self._enumerate()

    def _enumerate(self):
        table = {self.ring.one: ()}
        for g, n in zip(self.gens, self.orders):
            new = {}
            for x, vec in table.items():
                y = x
                for e in range(n):
                    new[y] = vec + (e,)
                    y = self.ring.mul(y, g)
            table = new
        assert len(table) == self.order, "unit generators do not span"
        self._dlog = table

    def dlog(self, x: Elt) -> tuple[int, ...]:
        return self._dlog[x]

    def contains(self, x: Elt) -> bool:
        return x in self._dlog

    def elements(self) -> list[Elt]:
        return list(self._dlog)

    def element_order(self, x: Elt) -> int:
        vec = self._dlog[x]
        return lcm(*(n // igcd(e, n) for e, n in zip(vec, self.orders))) \
            if self.gens else 1


@lru_cache(maxsize=None)
def unit_group(modulus: Ideal) -> UnitGroup:
    return UnitGroup(modulus)


def _local_unit_data(modulus: Ideal):
    """Per prime-power factor of the modulus: (prime, e, gens, orders).

    Generator coordinates are canonical in the local ring O/prime^e.
    Factors ordered by (prime norm, generator key).
    """
    out = []
    for prime, e in modulus.factor():
        gens, orders = _unit_basis(Ideal(prime.gen ** e))
        out.append((prime, e, gens, orders))
    return out


@lru_cache(maxsize=None)
def _unit_basis(q: Ideal) -> tuple[tuple[Elt, ...], tuple[int, ...]]:
    """Generator basis of (O/q)^x for a prime power q, by greedy order search."""
    ring = residue_ring(q)
    elems = [x for x in ring.elements() if ring.is_unit(x)]
    elems.sort()
    order_of = {}
    for x in elems:
        n, y = 1, x
        while y != ring.one:
            y = ring.mul(y, x)
            n += 1
        order_of[x] = n
    total = len(elems)
    gens: list[Elt] = []
    orders: list[int] = []
    span: set[Elt] = {ring.one}
    while len(span) < total:
        # maximal order in the quotient group, smallest representative wins
        best, best_q = None, 1
        for x in elems:
            k, y = 1, x
            while y not in span:
                y = ring.mul(y, x)
                k += 1
            if k > best_q:
                best, best_q = x, k
        # adjust by the span so the absolute order matches the quotient order
        cand = None
        for s in sorted(span):
            y = ring.mul(best, s)
            if order_of[y] == best_q:
                cand = y
                break
        assert cand is not None, "complement lifting failed"
        gens.append(cand)
        orders.append(best_q)
        new_span = set()
        y = ring.one
        for _ in range(best_q):
            new_span.update(ring.mul(y, s) for s in span)
            y = ring.mul(y, cand)
        assert len(new_span) == best_q * len(span)
        span = new_span
    return tuple(gens), tuple(orders)


def _crt_lift(modulus: Ideal, factor: Ideal):
    """Map x mod factor -> x' mod modulus with x' = x mod factor, 1 elsewhere."""
    comp = modulus.quotient(factor)
    if comp.is_one():
        return lambda x: x
    s, t, g = egcd(factor.gen, comp.gen)
    assert g.is_unit()
    u = g.conj()  # g^{-1} for the norm-1 unit g
    e_f = t * comp.gen * u   # 1 mod factor, 0 mod comp
    e_c = s * factor.gen * u  # 0 mod factor, 1 mod comp
    one = IQInt(modulus.d, 1)
    return lambda x: x * e_f + one * e_c


def crt_pair(a: IQInt, ma: Ideal, b: IQInt, mb: Ideal) -> IQInt:
    """x with x = a mod ma and x = b mod mb, for coprime moduli."""
    s, t, g = egcd(ma.gen, mb.gen)
    assert g.is_unit()
    u = g.conj()
    return b * s * ma.gen * u + a * t * mb.gen * u


class DirichletChar:
    """Character of (O_F/N)^x, stored as exponents against the unit basis.

    chi(gens[i]) = zeta_{orders[i]}^{exps[i]}.  Values are reported as
    exponents in mu_n where n = order of chi.
    """

    def __init__(self, modulus: Ideal, exps: tuple[int, ...]):
        self.modulus = modulus
        self.group = unit_group(modulus)
        if len(exps) != len(self.group.gens):
            raise ValueError("exponent vector length mismatch")
        self.exps = tuple(e % n for e, n in zip(exps, self.group.orders))
        self.order = lcm(*(n // igcd(e, n)
                           for e, n in zip(self.exps, self.group.orders))) \
            if self.exps else 1
        self._conductor: Ideal | None = None

    def value_exp(self, x: IQInt | Elt, n: int | None = None) -> int:
        """chi(x) = zeta_n^(returned exponent); n defaults to order of chi."""
        ring = self.group.ring
        e = x if isinstance(x, tuple) else ring.reduce(x)
        vec = self.group.dlog(e)
        L = self.group.exponent
        total = sum(c * v * (L // m)
                    for c, v, m in zip(self.exps, vec, self.group.orders)) % L
        n = self.order if n is None else n
        num = total * n
        assert num % L == 0, "value outside mu_n"
        return (num // L) % n

    def is_trivial_at(self, x: IQInt | Elt) -> bool:
        return self.value_exp(x) == 0

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        e = self.value_exp(IQInt(self.modulus.d, -1), 2 * self.order)
        assert e % self.order == 0
        return 1 if e == 0 else -1

    def mul(self, other: "DirichletChar") -> "DirichletChar":
        assert other.modulus == self.modulus
        return DirichletChar(self.modulus, tuple(
            a + b for a, b in zip(self.exps, other.exps)))

    def inverse(self) -> "DirichletChar":
        return DirichletChar(self.modulus, tuple(-e for e in self.exps))

    def galois_twist(self, k: int) -> "DirichletChar":
        """chi^k, the zeta -> zeta^k conjugate when gcd(k, order) = 1."""
        return DirichletChar(self.modulus, tuple(k * e for e in self.exps))

    def conductor(self) -> Ideal:
        if self._conductor is None:
            self._conductor = self._compute_conductor()
        return self._conductor

    def _compute_conductor(self) -> Ideal:
        ring = self.group.ring
        for f in self.modulus.divisors():
            fring = residue_ring(f)
            ok = True
            for x in self.group.elements():
                if fring.reduce(ring.lift(x)) == fring.one:
                    if self.value_exp(x) != 0:
                        ok = False
                        break
            if ok:
                return f
        raise AssertionError("no conductor found")

    def lift_to(self, M: Ideal) -> "DirichletChar":
        """The character mod M (a multiple of the modulus) inducing chi."""
        assert self.modulus.divides(M)
        G = unit_group(M)
        ring_small = self.group.ring
        exps = []
        n = self.order
        L = lcm(n, *G.orders)
        for g, m in zip(G.gens, G.orders):
            E = self.value_exp(ring_small.reduce(G.ring.lift(g)), L)
            assert (E * m) % L == 0
            exps.append((E * m // L) % m)
        return DirichletChar(M, tuple(exps))

    def primitive(self) -> "DirichletChar":
        """The primitive character mod the conductor inducing chi."""
        f = self.conductor()
        if f == self.modulus:
            return self
        Gf = unit_group(f)
        fring = Gf.ring
        ring = self.group.ring
        n = self.order
        # complement: primes of the modulus not dividing f
        comp = IQInt(self.modulus.d, 1)
        for p, e in self.modulus.factor():
            if not p.divides(f):
                comp = comp * p.gen ** e
        comp_ideal = Ideal(comp)
        one = IQInt(self.modulus.d, 1)
        exps = []
        for g, m in zip(Gf.gens, Gf.orders):
            # lift g to a unit mod the full modulus: g at f, 1 at the rest
            x = crt_pair(fring.lift(g), f, one, comp_ideal)
            L = lcm(n, m)
            E = self.value_exp(ring.reduce(x), L)
            assert (E * m) % L == 0
            exps.append((E * m // L) % m)
        return DirichletChar(f, tuple(exps))

    def orbit_key(self):
        """Canonical key identifying chi up to modulus (primitive data)."""
        prim = self.primitive()
        return (prim.modulus.gen.key(), prim.order, prim.exps)

    def galois_orbit_key(self):
        """Canonical key identifying the Galois orbit of chi."""
        n = self.order
        return min(self.galois_twist(k).orbit_key()
                   for k in range(1, n + 1) if igcd(k, n) == 1)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DirichletChar)
                and self.modulus == other.modulus and self.exps == other.exps)

    def __hash__(self) -> int:
        return hash((self.modulus, self.exps))

    def encode(self) -> str:
        body = ",".join(str(e) for e in self.exps)
        return f"[{body}]@{format_iq(self.modulus.gen)}"

    @staticmethod
    def decode(s: str, d: int) -> "DirichletChar":
        body, _, mod = s.strip().partition("@")
        body = body.strip().lstrip("[").rstrip("]")
        exps = tuple(int(x) for x in body.split(",")) if body else ()
        return DirichletChar(Ideal(parse_iq(mod, d)), exps)

    def __repr__(self) -> str:
        return f"DirichletChar({self.encode()})"


def trivial_char(modulus: Ideal) -> DirichletChar:
    return DirichletChar(modulus, tuple(0 for _ in unit_group(modulus).gens))


def characters(modulus: Ideal) -> list[DirichletChar]:
    """All characters of (O_F/modulus)^x."""
    G = unit_group(modulus)
    out = [()]
    for n in G.orders:
        out = [vec + (e,) for vec in out for e in range(n)]
    return [DirichletChar(modulus, tuple(vec)) for vec in out]


class ProjLine:
    """P^1(O_F/N) with canonical per-prime-power point forms.

    A point is indexed by its tuple of local indices; `normalize` maps any
    unimodular pair (c, d) to the index of its scaling orbit, or None when the
    pair fails unimodularity at some prime.
    """

    def __init__(self, N: Ideal):
        self.N = N
        self.d = N.d
        self.ring = residue_ring(N)
        self._locals = []
        for prime, e in N.factor():
            q = Ideal(prime.gen ** e)
            self._locals.append(_LocalProj(prime, q))
        self._radix = [len(loc.points) for loc in self._locals]
        self.size = 1
        for r in self._radix:
            self.size *= r
        # CRT lifts into O/N per factor
        self._lifts = [_crt_lift(N, loc.q) for loc in self._locals]

    def __len__(self) -> int:
        return self.size

    def normalize(self, c: IQInt, d: IQInt) -> int | None:
        idx = 0
        for loc, r in zip(self._locals, self._radix):
            li = loc.normalize(c, d)
            if li is None:
                return None
            idx = idx * r + li
        return idx

    def _local_indices(self, index: int) -> list[int]:
        locs = []
        for r in reversed(self._radix):
            locs.append(index % r)
            index //= r
        locs.reverse()
        return locs

    def unit_ratio(self, c: IQInt, d: IQInt, index: int) -> Elt:
        """The unit u of O/N with (c, d) = u * lift(index), as a ring Elt."""
        locs = self._local_indices(index)
        u = IQInt(self.d, 1)
        for loc, li, lift in zip(self._locals, locs, self._lifts):
            ring = loc.ring
            lc, ld = loc.points[li]
            if ring.is_unit(ld):
                uq = ring.mul(ring.reduce(d), ring.inv(ld))
            else:
                uq = ring.mul(ring.reduce(c), ring.inv(lc))
            u = u * lift(ring.lift(uq))
        return self.ring.reduce(u)

    def lift(self, index: int) -> tuple[IQInt, IQInt]:
        """A unimodular pair (c, d) over O_F representing the point."""
        locs = self._local_indices(index)
        c = IQInt(self.d, 0)
        d = IQInt(self.d, 0)
        one = IQInt(self.d, 1)
        for loc, li, lift in zip(self._locals, locs, self._lifts):
            lc, ld = loc.points[li]
            # lift maps x mod q to (x mod q, 1 mod complement); for the c
            # component we want (lc mod q, 0 elsewhere) = lift(lc) - lift(0)
            c = c + lift(loc.ring.lift(lc)) - lift(IQInt(self.d, 0))
            d = d + lift(loc.ring.lift(ld)) - lift(IQInt(self.d, 0))
        c = self.ring.lift(self.ring.reduce(c))
        d = self.ring.lift(self.ring.reduce(d))
        assert self.normalize(c, d) == index
        return c, d

    def points(self) -> list[tuple[IQInt, IQInt]]:
        return [self.lift(i) for i in range(self.size)]


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


class _LocalProj:
    """P^1(O/q) for a prime power q = prime^e."""

    def __init__(self, prime: Ideal, q: Ideal):
        self.prime = prime
        self.q = q
        self.ring = residue_ring(q)
        ring = self.ring
        pts: list[tuple[Elt, Elt]] = []
        self._index: dict[tuple[Elt, Elt], int] = {}
        one = ring.one
        for c in ring.elements():
            pts.append((c, one))
        for dd in ring.elements():
            if not ring.is_unit(dd):
                pts.append((one, dd))
        for i, pt in enumerate(pts):
            self._index[pt] = i
        self.points = pts

    def normalize(self, c: IQInt, d: IQInt) -> int | None:
        ring = self.ring
        cc, dd = ring.reduce(c), ring.reduce(d)
        if ring.is_unit(dd):
            return self._index[(ring.mul(cc, ring.inv(dd)), ring.one)]
        if ring.is_unit(cc):
            return self._index[(ring.one, ring.mul(dd, ring.inv(cc)))]
        return None


@lru_cache(maxsize=None)
def proj_line(N: Ideal) -> ProjLine:
    return ProjLine(N)


def proj_line_size(N: Ideal) -> int:
    """Euler-product count N(N) * prod (1 + 1/N(p))."""
    out = N.norm()
    for p, _ in N.factor():
        q = p.norm()
        out = out // q * (q + 1)
    return out
