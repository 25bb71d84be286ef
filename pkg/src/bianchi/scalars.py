"""Exact scalars in the tower Q < Q(omega) < Q(omega, zeta_n).

An element is a polynomial in zeta_n of degree < phi(n) whose coefficients
live in Q(omega) = Q(sqrt d), stored as pairs of Fractions against the basis
(1, omega).  Everything is reduced eagerly modulo the n-th cyclotomic
polynomial, so equality is coefficient equality.

The tower is only a field when x^2 - d stays irreducible over Q(zeta_n),
i.e. when the discriminant of Q(sqrt d) does not divide n; the context
constructor rejects the degenerate case.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import cyclotomic_poly, isprime, primitive_root
from sympy.ntheory.residue_ntheory import sqrt_mod

from .fields import IQInt, _basis_params

QW = tuple[Fraction, Fraction]  # a + b*omega

_ZERO = (Fraction(0), Fraction(0))
_ONE = (Fraction(1), Fraction(0))


def _field_disc(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


class CycCtx:
    """Reduction data for Q(omega, zeta_n)."""

    def __init__(self, d: int, n: int):
        if n % abs(_field_disc(d)) == 0:
            raise ValueError(
                f"Q(sqrt {d}) embeds in Q(zeta_{n}); tower not a field")
        self.d = d
        self.n = n
        self.t, self.m = _basis_params(d)
        coeffs = cyclotomic_poly(n).as_poly().all_coeffs()  # highest first
        self.phi = len(coeffs) - 1
        self.cyclo = [int(c) for c in reversed(coeffs)]  # c0..c_phi
        # zeta^j for j in [phi, 2*phi-2] as integer vectors on 1..zeta^{phi-1},
        # plus zeta^phi itself (needed when phi = 1)
        self._highpow: list[list[int]] = []
        cur = [-c for c in self.cyclo[:-1]]  # zeta^phi
        self._highpow.append(list(cur))
        for _ in range(max(self.phi - 2, 0)):
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(self.phi):
                cur[i] -= top * self.cyclo[i]
            self._highpow.append(list(cur))
        # zeta^j for all j in [0, n): used by Galois maps and embeddings
        self._allpow: list[list[Fraction]] = []
        vec = [Fraction(1)] + [Fraction(0)] * (self.phi - 1)
        for _ in range(max(n, 1)):
            self._allpow.append(list(vec))
            vec = self._shift_reduce(vec)

    def _shift_reduce(self, vec):
        out = [Fraction(0)] * self.phi
        for i, c in enumerate(vec):
            if c == 0:
                continue
            j = i + 1
            if j < self.phi:
                out[j] += c
            else:
                for k, hv in enumerate(self._highpow[j - self.phi]):
                    out[k] += c * hv
        return out

    def __repr__(self) -> str:
        return f"CycCtx(d={self.d}, n={self.n})"


@lru_cache(maxsize=None)
def cyc_ctx(d: int, n: int) -> CycCtx:
    return CycCtx(d, n)


def _qw_add(x: QW, y: QW) -> QW:
    return (x[0] + y[0], x[1] + y[1])


def _qw_neg(x: QW) -> QW:
    return (-x[0], -x[1])


def _qw_mul(x: QW, y: QW, t: int, m: int) -> QW:
    bb = x[1] * y[1]
    return (x[0] * y[0] - m * bb, x[0] * y[1] + x[1] * y[0] + t * bb)


class CycScalar:
    """Element of Q(omega, zeta_n); immutable."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CycCtx, coeffs):
        self.ctx = ctx
        cs = tuple(coeffs)
        assert len(cs) == ctx.phi
        self.coeffs = cs

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(ctx: CycCtx) -> "CycScalar":
        return CycScalar(ctx, [_ZERO] * ctx.phi)

    @staticmethod
    def one(ctx: CycCtx) -> "CycScalar":
        return CycScalar(ctx, [_ONE] + [_ZERO] * (ctx.phi - 1))

    @staticmethod
    def from_rational(ctx: CycCtx, q) -> "CycScalar":
        return CycScalar(ctx, [(Fraction(q), Fraction(0))]
                         + [_ZERO] * (ctx.phi - 1))

    @staticmethod
    def from_iq(ctx: CycCtx, x: IQInt) -> "CycScalar":
        assert x.d == ctx.d
        return CycScalar(ctx, [(Fraction(x.a), Fraction(x.b))]
                         + [_ZERO] * (ctx.phi - 1))

    @staticmethod
    def zeta(ctx: CycCtx, power: int = 1) -> "CycScalar":
        vec = ctx._allpow[power % ctx.n]
        return CycScalar(ctx, [(c, Fraction(0)) for c in vec])

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "CycScalar") -> "CycScalar":
        return CycScalar(self.ctx, [_qw_add(a, b)
                                    for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "CycScalar") -> "CycScalar":
        return self + (-other)

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.ctx, [_qw_neg(a) for a in self.coeffs])

    def __mul__(self, other: "CycScalar") -> "CycScalar":
        ctx = self.ctx
        phi, t, m = ctx.phi, ctx.t, ctx.m
        prod = [_ZERO] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a == _ZERO:
                continue
            for j, b in enumerate(other.coeffs):
                if b == _ZERO:
                    continue
                prod[i + j] = _qw_add(prod[i + j], _qw_mul(a, b, t, m))
        out = list(prod[:phi])
        for j in range(phi, 2 * phi - 1):
            c = prod[j]
            if c == _ZERO:
                continue
            for k, hv in enumerate(ctx._highpow[j - phi]):
                if hv:
                    out[k] = _qw_add(out[k], (c[0] * hv, c[1] * hv))
        return CycScalar(ctx, out)

    def scale(self, q) -> "CycScalar":
        f = Fraction(q)
        return CycScalar(self.ctx, [(a * f, b * f) for a, b in self.coeffs])

    def is_zero(self) -> bool:
        return all(c == _ZERO for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CycScalar) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    # -- Galois maps -------------------------------------------------------

    def conj_field(self) -> "CycScalar":
        """omega -> t - omega (complex conjugation on Q(sqrt d))."""
        t = self.ctx.t
        return CycScalar(self.ctx,
                         [(a + t * b, -b) for a, b in self.coeffs])

    def zeta_map(self, k: int) -> "CycScalar":
        """zeta -> zeta^k (a field map when gcd(k, n) = 1)."""
        ctx = self.ctx
        out = [_ZERO] * ctx.phi
        for i, c in enumerate(self.coeffs):
            if c == _ZERO:
                continue
            for j, hv in enumerate(ctx._allpow[(i * k) % ctx.n]):
                if hv:
                    out[j] = _qw_add(out[j], (c[0] * hv, c[1] * hv))
        return CycScalar(ctx, out)

    # -- Q-linear realization ---------------------------------------------

    def qvector(self) -> list[Fraction]:
        """Coordinates on the Q-basis zeta^i, omega*zeta^i (i < phi)."""
        out = []
        for a, b in self.coeffs:
            out.append(a)
            out.append(b)
        return out

    @staticmethod
    def from_qvector(ctx: CycCtx, vec) -> "CycScalar":
        cs = [(Fraction(vec[2 * i]), Fraction(vec[2 * i + 1]))
              for i in range(ctx.phi)]
        return CycScalar(ctx, cs)

    def inverse(self) -> "CycScalar":
        """Field inverse by solving the multiplication linear system."""
        ctx = self.ctx
        dim = 2 * ctx.phi
        basis = []
        for i in range(ctx.phi):
            for w in (0, 1):
                coeffs = [_ZERO] * ctx.phi
                coeffs[i] = (Fraction(1 - w), Fraction(w))
                basis.append(CycScalar(ctx, coeffs))
        cols = [(self * e).qvector() for e in basis]
        rhs = [Fraction(0)] * dim
        rhs[0] = Fraction(1)
        sol = _solve_fraction(cols, rhs)
        if sol is None:
            raise ZeroDivisionError("inverse of zero (or ring not a field)")
        out = CycScalar.zero(ctx)
        for c, e in zip(sol, basis):
            out = out + e.scale(c)
        return out

    def __truediv__(self, other: "CycScalar") -> "CycScalar":
        return self * other.inverse()

    # -- reductions / encodings --------------------------------------------

    def denominator(self) -> int:
        out = 1
        for a, b in self.coeffs:
            out = out * a.denominator // _igcd(out, a.denominator)
            out = out * b.denominator // _igcd(out, b.denominator)
        return out

    def embed_mod(self, emb: "ModEmbedding") -> int:
        p, z, w = emb.p, emb.z, emb.w
        total = 0
        zp = 1
        for a, b in self.coeffs:
            if a != 0 or b != 0:
                c = (_frac_mod(a, p) + _frac_mod(b, p) * w) % p
                total = (total + c * zp) % p
            zp = (zp * z) % p
        return total

    def encode(self) -> str:
        body = ",".join(f"{a}~{b}" for a, b in self.coeffs)
        return f"{body}@{self.ctx.n},{self.ctx.d}"

    @staticmethod
    def decode(s: str) -> "CycScalar":
        body, _, tail = s.rpartition("@")
        n_str, d_str = tail.split(",")
        ctx = cyc_ctx(int(d_str), int(n_str))
        cs = []
        for part in body.split(","):
            a, _, b = part.partition("~")
            cs.append((Fraction(a), Fraction(b)))
        return CycScalar(ctx, cs)

    def __repr__(self) -> str:
        return f"CycScalar({self.encode()})"


def _igcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _frac_mod(f: Fraction, p: int) -> int:
    den = f.denominator % p
    if den == 0:
        raise ZeroDivisionError(f"denominator of {f} not invertible mod {p}")
    return f.numerator % p * pow(den, -1, p) % p


def _solve_fraction(cols, rhs):
    """Solve sum_j x_j cols[j] = rhs over Q; None if singular."""
    dim = len(rhs)
    ncols = len(cols)
    A = [[cols[j][i] for j in range(ncols)] + [rhs[i]] for i in range(dim)]
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, dim) if A[i][c] != 0), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(dim):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    for i in range(r, dim):
        if A[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv):
        sol[c] = A[i][ncols]
    return sol


class ModEmbedding:
    """Ring map Q(omega, zeta_n) -> F_p for a split word-size prime p.

    Requires p = 1 mod n and the discriminant of Q(sqrt d) a square mod p;
    z is a primitive n-th root of unity mod p and w a root of the minimal
    polynomial of omega.
    """

    def __init__(self, ctx: CycCtx, p: int, z: int, w: int):
        self.ctx = ctx
        self.p = p
        self.z = z
        self.w = w
        assert (w * w - ctx.t * w + ctx.m) % p == 0
        if ctx.n > 1:
            assert pow(z, ctx.n, p) == 1
            assert all(pow(z, ctx.n // q, p) != 1
                       for q in _prime_divs(ctx.n))

    def __repr__(self) -> str:
        return f"ModEmbedding(p={self.p}, z={self.z}, w={self.w})"


def _prime_divs(n: int):
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def find_embeddings(ctx: CycCtx, count: int, start: int = 1 << 21,
                    all_conjugates: bool = False) -> list[ModEmbedding]:
    """Split primes p = 1 mod n with sqrt(d) in F_p, plus embedding data.

    With all_conjugates, every choice of (z-power coprime to n, both square
    roots) is returned per prime: the full set of embeddings into F_p.
    """
    d, n = ctx.d, ctx.n
    disc = _field_disc(d)
    out = []
    p = start + (n - start % n) + 1 if n > 1 else start + 1
    while len(out) < count:
        while True:
            p += n if n > 1 else 1
            if not isprime(p):
                continue
            if n > 1 and p % n != 1:
                continue
            s = sqrt_mod(disc % p, p)
            if s is not None:
                break
        w_roots = sorted({(ctx.t + r) * pow(2, -1, p) % p
                          for r in (s, p - s)})
        if n > 1:
            g = primitive_root(p)
            z0 = pow(g, (p - 1) // n, p)
            zs = ([pow(z0, k, p) for k in range(1, n) if _igcd(k, n) == 1]
                  if all_conjugates else [z0])
        else:
            zs = [1]
        ws = w_roots if all_conjugates else w_roots[:1]
        for z in zs:
            for w in ws:
                out.append(ModEmbedding(ctx, p, z, w))
        if not all_conjugates:
            out = out[:count]
    return out
