"""Exact arithmetic in O_F = Z[omega] for the Euclidean imaginary quadratic fields.

Supported discriminant parameters d (squarefree, negative): -1, -2, -3, -7, -11.
For d = 2, 3 mod 4 the integral basis element is omega = sqrt(d), otherwise
omega = (1 + sqrt(d))/2.  Every ideal is principal (class number one) and is
stored by a canonical generator.
"""

from __future__ import annotations

from functools import lru_cache

from sympy import factorint
from sympy.ntheory.residue_ntheory import sqrt_mod

SUPPORTED_D = (-1, -2, -3, -7, -11)


def _basis_params(d: int) -> tuple[int, int]:
    """(trace t, norm m) of omega, so omega^2 = t*omega - m."""
    if d % 4 == 1:
        return 1, (1 - d) // 4
    return 0, -d


class IQInt:
    """a + b*omega with arbitrary-precision integer coordinates."""

    __slots__ = ("d", "a", "b")

    def __init__(self, d: int, a: int, b: int = 0):
        if d not in SUPPORTED_D:
            raise ValueError(f"unsupported field d={d}")
        self.d = d
        self.a = a
        self.b = b

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "IQInt") -> "IQInt":
        return IQInt(self.d, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "IQInt") -> "IQInt":
        return IQInt(self.d, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "IQInt":
        return IQInt(self.d, -self.a, -self.b)

    def __mul__(self, other: "IQInt") -> "IQInt":
        t, m = _basis_params(self.d)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        bb = b1 * b2
        return IQInt(self.d, a1 * a2 - m * bb, a1 * b2 + a2 * b1 + t * bb)

    def __pow__(self, n: int) -> "IQInt":
        if n < 0:
            raise ValueError("negative power")
        out = IQInt(self.d, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "IQInt":
        t, _ = _basis_params(self.d)
        return IQInt(self.d, self.a + t * self.b, -self.b)

    def norm(self) -> int:
        t, m = _basis_params(self.d)
        return self.a * self.a + t * self.a * self.b + m * self.b * self.b

    def trace(self) -> int:
        t, _ = _basis_params(self.d)
        return 2 * self.a + t * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IQInt)
            and self.d == other.d
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self) -> int:
        return hash((self.d, self.a, self.b))

    def key(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __repr__(self) -> str:
        return f"IQInt({self.d}, {self.a}, {self.b})"

    def __str__(self) -> str:
        return format_iq(self)


def iq(d: int, a: int, b: int = 0) -> IQInt:
    return IQInt(d, a, b)


def omega(d: int) -> IQInt:
    return IQInt(d, 0, 1)


@lru_cache(maxsize=None)
def units(d: int) -> tuple[IQInt, ...]:
    """The unit group of O_F, in a fixed order starting with 1."""
    if d == -1:
        coords = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    elif d == -3:
        # powers of the sixth root of unity omega = (1+sqrt(-3))/2
        coords = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    else:
        coords = [(1, 0), (-1, 0)]
    return tuple(IQInt(d, a, b) for a, b in coords)


def canonical_associate(x: IQInt) -> IQInt:
    """Deterministic representative of the unit orbit of x (largest (a, b) key)."""
    if x.is_zero():
        return x
    return max((x * u for u in units(x.d)), key=IQInt.key)


def _round_half_down(n: int, d: int) -> int:
    """Nearest integer to n/d with ties toward -infinity; d > 0."""
    return (2 * n + d - 1) // (2 * d)


_FALLBACK_OFFSETS = [
    (0, 0), (1, 0), (-1, 0), (0, 1), (0, -1),
    (1, 1), (1, -1), (-1, 1), (-1, -1),
]


def euclid_divmod(a: IQInt, b: IQInt) -> tuple[IQInt, IQInt]:
    """q, r with a = q*b + r and norm(r) < norm(b).

    Quotient coordinates round a/b to the nearest integers, ties toward
    -infinity.  For d = -7, -11 the rounded box corner can reach norm(b), so a
    fixed offset list restores the Euclidean bound deterministically.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero in O_F")
    nb = b.norm()
    num = a * b.conj()
    q = IQInt(a.d, _round_half_down(num.a, nb), _round_half_down(num.b, nb))
    r = a - q * b
    if r.norm() < nb:
        return q, r
    for da, db in _FALLBACK_OFFSETS:
        q2 = IQInt(a.d, q.a + da, q.b + db)
        r2 = a - q2 * b
        if r2.norm() < nb:
            return q2, r2
    raise ArithmeticError(f"euclidean division failed for {a} / {b}")


def gcd(a: IQInt, b: IQInt) -> IQInt:
    while not b.is_zero():
        _, r = euclid_divmod(a, b)
        a, b = b, r
    return canonical_associate(a)


def egcd(a: IQInt, b: IQInt) -> tuple[IQInt, IQInt, IQInt]:
    """(s, t, g) with s*a + t*b = g = gcd(a, b) (canonical associate)."""
    d = a.d
    one, zero = IQInt(d, 1), IQInt(d, 0)
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = euclid_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    g = canonical_associate(r0)
    # fix the unit: g = u * r0
    u = divide_exact(g, r0) if not r0.is_zero() else one
    return s0 * u, t0 * u, g


def divide_exact(a: IQInt, b: IQInt) -> IQInt | None:
    """a / b when b divides a exactly, else None."""
    if b.is_zero():
        return None
    nb = b.norm()
    num = a * b.conj()
    if num.a % nb or num.b % nb:
        return None
    return IQInt(a.d, num.a // nb, num.b // nb)


# -- textual encoding ------------------------------------------------------

def format_iq(x: IQInt) -> str:
    """Encode as "a+b*w" with decimal integers (the CLI/cache format)."""
    sign = "+" if x.b >= 0 else "-"
    return f"{x.a}{sign}{abs(x.b)}*w"


def parse_iq(s: str, d: int) -> IQInt:
    """Parse "a+b*w" (also bare integers or "w", "-w", "3*w")."""
    s = s.strip().replace(" ", "")
    if "w" not in s:
        return IQInt(d, int(s))
    head, _, _ = s.partition("w")
    head = head[:-1] if head.endswith("*") else head
    # split head into the integer part and the coefficient of w
    cut = max(head.rfind("+", 1), head.rfind("-", 1))
    if cut <= 0:
        a_str, b_str = "0", head or "+"
    else:
        a_str, b_str = head[:cut], head[cut] + head[cut + 1:]
    if b_str in ("", "+"):
        b = 1
    elif b_str == "-":
        b = -1
    else:
        b = int(b_str)
    a = int(a_str) if a_str not in ("", "+", "-") else 0
    return IQInt(d, a, b)


# -- ideals ----------------------------------------------------------------

class Ideal:
    """A nonzero (principal) ideal of O_F, held by its canonical generator."""

    __slots__ = ("gen", "_factors")

    def __init__(self, gen: IQInt):
        if gen.is_zero():
            raise ValueError("zero ideal")
        self.gen = canonical_associate(gen)
        self._factors = None

    @property
    def d(self) -> int:
        return self.gen.d

    def norm(self) -> int:
        return self.gen.norm()

    def is_one(self) -> bool:
        return self.norm() == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and self.gen == other.gen

    def __hash__(self) -> int:
        return hash(("Ideal", self.gen))

    def __repr__(self) -> str:
        return f"Ideal({format_iq(self.gen)})"

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.gen * other.gen)

    def divides(self, other: "Ideal") -> bool:
        return divide_exact(other.gen, self.gen) is not None

    def quotient(self, other: "Ideal") -> "Ideal":
        q = divide_exact(self.gen, other.gen)
        if q is None:
            raise ValueError(f"{other} does not divide {self}")
        return Ideal(q)

    def gcd(self, other: "Ideal") -> "Ideal":
        return Ideal(gcd(self.gen, other.gen))

    def lcm(self, other: "Ideal") -> "Ideal":
        g = gcd(self.gen, other.gen)
        return Ideal(divide_exact(self.gen * other.gen, g))

    def factor(self) -> list[tuple["Ideal", int]]:
        """Prime factorization, sorted by (norm, generator key)."""
        if self._factors is None:
            self._factors = _factor_ideal(self)
        return list(self._factors)

    def valuation(self, prime: "Ideal") -> int:
        v = 0
        x = self.gen
        while True:
            q = divide_exact(x, prime.gen)
            if q is None:
                return v
            x = q
            v += 1

    def divisors(self) -> list["Ideal"]:
        """All ideal divisors (canonical generators), sorted by (norm, key)."""
        divs = [IQInt(self.d, 1)]
        for p, e in self.factor():
            divs = [g * p.gen ** i for g in divs for i in range(e + 1)]
        out = sorted((Ideal(g) for g in divs), key=lambda i: (i.norm(), i.gen.key()))
        return out

    def coprime_to(self, other: "Ideal") -> bool:
        return self.gcd(other).is_one()


@lru_cache(maxsize=None)
def primes_above(d: int, p: int) -> tuple[Ideal, ...]:
    """The primes of O_F above the rational prime p, in canonical order."""
    t, m = _basis_params(d)
    # roots of x^2 - t*x + m mod p
    disc = t * t - 4 * m  # = d or 4d
    if p == 2:
        roots = [r for r in (0, 1) if (r * r - t * r + m) % 2 == 0]
    else:
        s = sqrt_mod(disc % p, p, all_roots=True)
        inv2 = pow(2, -1, p)
        roots = sorted({(t + r) * inv2 % p for r in s}) if s else []
    if not roots:
        return (Ideal(IQInt(d, p)),)
    ps = {Ideal(gcd(IQInt(d, p), IQInt(d, -r, 1))) for r in roots}
    return tuple(sorted(ps, key=lambda i: i.gen.key()))


def _factor_ideal(n: Ideal) -> list[tuple[Ideal, int]]:
    d = n.d
    x = n.gen
    out = []
    for p in sorted(factorint(n.norm())):
        for pr in primes_above(d, p):
            e = 0
            while True:
                q = divide_exact(x, pr.gen)
                if q is None:
                    break
                x, e = q, e + 1
            if e:
                out.append((pr, e))
    assert x.is_unit(), "factorization must exhaust the generator"
    out.sort(key=lambda pe: (pe[0].norm(), pe[0].gen.key()))
    return out


def ideal_from_factors(d: int, factors) -> Ideal:
    g = IQInt(d, 1)
    for p, e in factors:
        g = g * p.gen ** e
    return Ideal(g)


def euler_phi(n: Ideal) -> int:
    """|(O_F/n)^x|."""
    out = 1
    for p, e in n.factor():
        q = p.norm()
        out *= q ** e - q ** (e - 1)
    return out


def sigma0(n: Ideal) -> int:
    """Number of ideal divisors."""
    out = 1
    for _, e in n.factor():
        out *= e + 1
    return out


def ideals_norm_up_to(d: int, bound: int) -> list[Ideal]:
    """All nonzero ideals of norm <= bound, sorted by (norm, key).

    Class number one: every ideal is principal, so scanning generators in a
    box large enough for the positive-definite norm form is exhaustive.
    """
    box = 2 * int(bound ** 0.5) + 2
    seen: dict = {}
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            g = IQInt(d, a, b)
            if g.is_zero() or g.norm() > bound:
                continue
            ideal = Ideal(g)
            seen.setdefault((ideal.norm(), ideal.gen.key()), ideal)
    return [seen[k] for k in sorted(seen)]
