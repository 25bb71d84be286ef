"""Two-variable p-adic power series: classical points, subtorus translates.

The objects here live in O[[X, Y]] for the valuation ring O of a p-adic
field.  The decidable questions about such a series phi are:

  * its valuation at a classical point ((1+p)^k zeta - 1, (1+p)^k zeta' - 1)
    with zeta, zeta' p-power roots of unity;
  * whether it vanishes on the diagonal X = Y;
  * whether it vanishes on a translate xi (X+1)^N = (Y+1) of a formal
    subtorus, for xi a p-power root of unity and N a p-adic integer.

Everything is computed in the quotient model Z_p[zeta_{p^m}] =
Z_p[lambda]/(g(lambda)) with lambda = zeta - 1 and g Eisenstein, so
valuations come straight off the Newton polygon: on the power basis of
lambda the candidate valuations v_p(c_i) + i/deg are pairwise distinct
modulo 1, hence the minimum is always uniquely attained and exact.

Precision is tracked pessimistically.  A reported zero at finite
precision is always labelled with the precision it holds to; exact
(infinite-precision) coefficients are supported with M = None.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

DEFAULT_D = 32
DEFAULT_M = 60
DEFAULT_M_MAX = 3


def _vp(n: int, p: int) -> int | None:
    """p-adic valuation of an integer; None for 0."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _inv_mod(a: int, q: int) -> int:
    return pow(a, -1, q)


# ---------------------------------------------------------------------------
# p-adic integers with tracked absolute precision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p known modulo p^prec (prec = None means exact)."""

    p: int
    value: int
    prec: int | None = None

    def __post_init__(self):
        if self.prec is not None:
            object.__setattr__(self, "value",
                               self.value % self.p ** self.prec)

    def _meet(self, other: "PadicInt") -> int | None:
        assert self.p == other.p
        if self.prec is None:
            return other.prec
        if other.prec is None:
            return self.prec
        return min(self.prec, other.prec)

    def __add__(self, other):
        return PadicInt(self.p, self.value + other.value, self._meet(other))

    def __sub__(self, other):
        return PadicInt(self.p, self.value - other.value, self._meet(other))

    def __mul__(self, other):
        return PadicInt(self.p, self.value * other.value, self._meet(other))

    def __neg__(self):
        return PadicInt(self.p, -self.value, self.prec)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def valuation(self) -> "Valuation":
        v = _vp(self.value, self.p)
        if v is None:
            if self.prec is None:
                return Valuation("exact", math.inf)
            return Valuation("ge", Fraction(self.prec))
        return Valuation("exact", Fraction(v))


@dataclass(frozen=True)
class Valuation:
    """Either an exact valuation or a lower bound forced by precision."""

    kind: str                    # "exact" or "ge"
    value: Fraction | float      # math.inf for an exact zero

    def __repr__(self):
        if self.kind == "exact":
            return f"v = {self.value}"
        return f"v >= {self.value}"


# ---------------------------------------------------------------------------
# Z_p[zeta_{p^m}] on the power basis of lambda = zeta - 1
# ---------------------------------------------------------------------------

def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyc_ring(p: int, m: int) -> "CycRing":
    return CycRing(p, m)


class CycRing:
    """Z_p[lambda] / (g(lambda)), g the minimal polynomial of zeta_{p^m}-1.

    Elements are tuples of deg = phi(p^m) integer coordinates.  g is
    Eisenstein at p, so v(lambda) = 1/deg and the Newton polygon on this
    basis is exact.
    """

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.deg = 1 if m == 0 else (p - 1) * p ** (m - 1)
        # Phi_{p^m}(x) = sum_i x^{i p^{m-1}}, then substitute x -> x + 1
        if m == 0:
            g = [0, 1]
        else:
            phi = [0] * ((p - 1) * p ** (m - 1) + 1)
            for i in range(p):
                phi[i * p ** (m - 1)] = 1
            g = [0]
            xp1 = [1]
            for c in phi:
                if c:
                    g = [a + c * b for a, b in
                         zip(g + [0] * (len(xp1) - len(g)),
                             xp1 + [0] * (len(g) - len(xp1)))]
                xp1 = _poly_mul(xp1, [1, 1])
            assert g[-1] == 1 and len(g) == self.deg + 1
            assert g[0] % p == 0 and g[0] % (p * p) != 0, \
                "lambda minimal polynomial must be Eisenstein"
        self._g = g

    # -- element constructors ------------------------------------------------

    def zero(self) -> tuple:
        return (0,) * self.deg

    def from_int(self, c: int, M: int | None = None) -> tuple:
        c = c if M is None else c % self.p ** M
        return (c,) + (0,) * (self.deg - 1)

    def lam(self) -> tuple:
        if self.deg == 1:
            return self.zero()
        return (0, 1) + (0,) * (self.deg - 2)

    def zeta_pow(self, e: int, M: int | None = None) -> tuple:
        """(lambda + 1)^e, i.e. zeta^e."""
        base = self.reduce([1, 1], M)
        out = self.from_int(1, M)
        e %= self.p ** self.m if self.m else 1
        while e:
            if e & 1:
                out = self.mul(out, base, M)
            base = self.mul(base, base, M)
            e >>= 1
        return out

    # -- arithmetic -----------------------------------------------------------

    def reduce(self, coeffs: list[int], M: int | None = None) -> tuple:
        r = list(coeffs) + [0] * max(0, self.deg - len(coeffs))
        for k in range(len(r) - 1, self.deg - 1, -1):
            c = r[k]
            if c:
                r[k] = 0
                base = k - self.deg
                for i in range(self.deg):
                    r[base + i] -= c * self._g[i]
        r = r[:self.deg]
        if M is not None:
            q = self.p ** M
            r = [c % q for c in r]
        return tuple(r)

    def add(self, a: tuple, b: tuple, M: int | None = None) -> tuple:
        if M is None:
            return tuple(x + y for x, y in zip(a, b))
        q = self.p ** M
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a: tuple, b: tuple, M: int | None = None) -> tuple:
        if M is None:
            return tuple(x - y for x, y in zip(a, b))
        q = self.p ** M
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a: tuple, M: int | None = None) -> tuple:
        if M is None:
            return tuple(-x for x in a)
        q = self.p ** M
        return tuple((-x) % q for x in a)

    def scale(self, c: int, a: tuple, M: int | None = None) -> tuple:
        if M is None:
            return tuple(c * x for x in a)
        q = self.p ** M
        return tuple((c * x) % q for x in a)

    def mul(self, a: tuple, b: tuple, M: int | None = None) -> tuple:
        if not any(a) or not any(b):
            return self.zero()
        return self.reduce(_poly_mul(list(a), list(b)), M)

    def is_zero(self, a: tuple) -> bool:
        return not any(a)

    # -- valuation via the Newton polygon --------------------------------------

    def val(self, a: tuple, M: int | None = None) -> Valuation:
        best = None
        for i, c in enumerate(a):
            v = _vp(c, self.p)
            if v is None:
                continue
            cand = Fraction(v) + Fraction(i, self.deg)
            if best is None or cand < best:
                best = cand
        if best is None:
            if M is None:
                return Valuation("exact", math.inf)
            return Valuation("ge", Fraction(M))
        # with canonical coordinates below p^M every nonzero coordinate has
        # v_p < M, so the minimum beats every precision bound: exact
        return Valuation("exact", best)


# ---------------------------------------------------------------------------
# classical points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalPoint:
    """((1+p)^k zeta - 1, (1+p)^k zeta' - 1), zeta = zeta_{p^m}^a."""

    p: int
    k: int
    zeta: tuple[int, int]        # (m, a)
    zeta2: tuple[int, int]

    def __post_init__(self):
        assert self.k >= 0, "weights are non-negative integers here"


# ---------------------------------------------------------------------------
# truncated two-variable series
# ---------------------------------------------------------------------------

@dataclass
class PSeries2:
    """Element of Z_p[[X, Y]] modulo (total degree > D, p^M).

    M = None keeps exact integer coefficients; all ring operations
    truncate to total degree D and reduce modulo p^M when M is finite.
    """

    p: int
    D: int = DEFAULT_D
    M: int | None = DEFAULT_M
    coeffs: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = self._normal(self.coeffs)

    def _normal(self, coeffs):
        q = None if self.M is None else self.p ** self.M
        out = {}
        for (i, j), c in coeffs.items():
            if i + j > self.D:
                continue
            if q is not None:
                c %= q
            if c:
                out[(i, j)] = c
        return out

    def coeff(self, i: int, j: int) -> PadicInt:
        return PadicInt(self.p, self.coeffs.get((i, j), 0), self.M)

    def is_zero(self) -> bool:
        return not self.coeffs

    def swap(self) -> "PSeries2":
        return PSeries2(self.p, self.D, self.M,
                        {(j, i): c for (i, j), c in self.coeffs.items()})

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return PSeries2(self.p, self.D, self._meet(other), out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) - c
        return PSeries2(self.p, self.D, self._meet(other), out)

    def __mul__(self, other):
        out = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i + j <= self.D:
                    out[(i, j)] = out.get((i, j), 0) + c1 * c2
        return PSeries2(self.p, self.D, self._meet(other), out)

    def _meet(self, other):
        assert self.p == other.p and self.D == other.D
        if self.M is None:
            return other.M
        if other.M is None:
            return self.M
        return min(self.M, other.M)

    def diagonal_is_zero(self) -> bool:
        """Does phi(X, X) vanish identically (to working precision)?"""
        diag = {}
        for (i, j), c in self.coeffs.items():
            diag[i + j] = diag.get(i + j, 0) + c
        q = None if self.M is None else self.p ** self.M
        return all((c if q is None else c % q) == 0 for c in diag.values())

    # -- JSON I/O: {"i,j": "coefficient"} --------------------------------------

    def to_json(self) -> str:
        return json.dumps({f"{i},{j}": str(c)
                           for (i, j), c in sorted(self.coeffs.items())})

    @classmethod
    def from_json(cls, text: str, p: int, D: int = DEFAULT_D,
                  M: int | None = DEFAULT_M) -> "PSeries2":
        raw = json.loads(text)
        coeffs = {}
        for key, c in raw.items():
            i, j = (int(t) for t in key.split(","))
            coeffs[(i, j)] = int(c)
        return cls(p, D, M, coeffs)


def monomial(p: int, i: int, j: int, c: int = 1, D: int = DEFAULT_D,
             M: int | None = DEFAULT_M) -> PSeries2:
    return PSeries2(p, D, M, {(i, j): c})


def torus_factor(p: int, N: int, D: int = DEFAULT_D,
                 M: int | None = DEFAULT_M) -> PSeries2:
    """(X+1)^N - (Y+1) for an integer N >= 0."""
    coeffs = {(t, 0): math.comb(N, t) for t in range(0, min(N, D) + 1)}
    coeffs[(0, 1)] = coeffs.get((0, 1), 0) - 1
    coeffs[(0, 0)] = coeffs.get((0, 0), 0) - 1
    return PSeries2(p, D, M, coeffs)


def norm_torus_factor(p: int, N: int, m: int, D: int = DEFAULT_D,
                      M: int | None = DEFAULT_M) -> PSeries2:
    """prod over xi in mu_{p^m} of (xi (X+1)^N - (Y+1)), over Z_p.

    This is (X+1)^{N p^m} - (Y+1)^{p^m}: a series with rational
    coefficients that vanishes on every translate xi (X+1)^N = Y+1.
    """
    q = p ** m
    coeffs = {(t, 0): math.comb(N * q, t) for t in range(0, min(N * q, D) + 1)}
    for t in range(0, q + 1):
        coeffs[(0, t)] = coeffs.get((0, t), 0) - math.comb(q, t)
    return PSeries2(p, D, M, coeffs)


# ---------------------------------------------------------------------------
# evaluation at classical points
# ---------------------------------------------------------------------------

def eval_special(phi: PSeries2, pt: ClassicalPoint) -> Valuation:
    """Valuation of phi at the classical point, via the Newton polygon.

    Exhausted precision yields an explicit lower bound, never a
    fabricated zero.
    """
    p = phi.p
    assert pt.p == p
    m1, a1 = pt.zeta
    m2, a2 = pt.zeta2
    mm = max(m1, m2)
    ring = cyc_ring(p, mm)
    M = phi.M
    u = (1 + p) ** pt.k if M is None else pow(1 + p, pt.k, p ** M)
    one = ring.from_int(1, M)
    x = ring.sub(ring.scale(u, ring.zeta_pow(a1 * p ** (mm - m1), M), M),
                 one, M)
    y = ring.sub(ring.scale(u, ring.zeta_pow(a2 * p ** (mm - m2), M), M),
                 one, M)
    xpow = [one]
    ypow = [one]
    for _ in range(phi.D):
        xpow.append(ring.mul(xpow[-1], x, M))
        ypow.append(ring.mul(ypow[-1], y, M))
    acc = ring.zero()
    for (i, j), c in phi.coeffs.items():
        acc = ring.add(acc, ring.scale(c, ring.mul(xpow[i], ypow[j], M), M),
                       M)
    return ring.val(acc, M)


# ---------------------------------------------------------------------------
# recentering X -> (1+p)^K (X+1) - 1
# ---------------------------------------------------------------------------

def _one_plus_p_to(K: int | PadicInt, p: int, M: int) -> int:
    """(1+p)^K mod p^M for an integer or p-adic integer exponent.

    For p-adic K the binomial series sum_i C(K, i) p^i converges; the
    term valuations grow like i - v_p(i!), and knowing K mod p^M pins
    the sum mod p^M (the error multiplies terms divisible by p^i).
    """
    q = p ** M
    if isinstance(K, int):
        if K >= 0:
            return pow(1 + p, K, q)
        return _inv_mod(pow(1 + p, -K, q), q)
    assert K.p == p
    kv = K.value
    acc = 1
    num = 1
    for i in range(1, M + 1):
        # C(K, i) p^i: v_p >= i - v_p(i!) >= i (p-2)/(p-1) > 0, and the
        # falling factorial mod p^{M + i} pins the term mod p^M
        f = math.factorial(i)
        vf = _vp(f, p) or 0
        num = num * (kv - (i - 1)) % (q * p ** vf)
        term = num * p ** i
        assert term % p ** vf == 0
        term = term // p ** vf * _inv_mod(f // p ** vf, q)
        acc = (acc + term) % q
    return acc


def recenter(phi: PSeries2, K: int | PadicInt) -> PSeries2:
    """phi((1+p)^K (X+1) - 1, (1+p)^K (Y+1) - 1).

    An affine substitution X -> uX + (u-1) with u = (1+p)^K a unit, so no
    precision is lost beyond the ambient p^M.
    """
    p, D, M = phi.p, phi.D, phi.M
    if M is None and isinstance(K, int) and K >= 0:
        u = (1 + p) ** K
    else:
        Mw = M if M is not None else DEFAULT_M
        u = _one_plus_p_to(K, p, Mw)
        if M is None:
            phi = PSeries2(p, D, Mw, phi.coeffs)
            M = Mw
    c = u - 1
    # (uX + c)^n expanded once per needed exponent
    expo: dict[int, list[int]] = {}
    for n in range(D + 1):
        expo[n] = [math.comb(n, t) * u ** t * c ** (n - t)
                   for t in range(n + 1)]
    out: dict[tuple[int, int], int] = {}
    for (i, j), co in phi.coeffs.items():
        ei, ej = expo[i], expo[j]
        for t1, b1 in enumerate(ei):
            if b1 == 0:
                continue
            for t2, b2 in enumerate(ej):
                if b2 == 0:
                    continue
                key = (t1, t2)
                out[key] = out.get(key, 0) + co * b1 * b2
    return PSeries2(p, D, M, out)


# ---------------------------------------------------------------------------
# substitution Y -> xi (X+1)^N - 1
# ---------------------------------------------------------------------------

@dataclass
class HSeries:
    """A univariate series over Z_p[zeta_{p^m}], with tracked precision."""

    ring: CycRing
    coeffs: list[tuple]
    prec: int | None

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return i
        return None


def binomial_column(N: int | PadicInt, D: int, p: int,
                    M: int | None) -> tuple[list[int], int | None]:
    """[C(N, t) for t <= D] and the precision it holds to.

    Integer N: exact power-series coefficients of (X+1)^N, so no loss.
    p-adic N known mod p^M: the falling factorial is determined mod p^M
    and dividing by t! costs v_p(t!) digits, so the column is returned at
    precision M - v_p(D!).
    """
    if isinstance(N, int):
        if N >= 0:
            col = [math.comb(N, t) for t in range(D + 1)]
        else:
            col = [(-1) ** t * math.comb(-N + t - 1, t) for t in range(D + 1)]
        return col, M
    assert M is not None, "p-adic exponent needs finite working precision"
    loss = _vp(math.factorial(D), p) or 0
    prec = M - loss
    assert prec > 0, "degree bound exhausts the precision budget"
    col = [1]
    num = 1
    qn = p ** M
    for t in range(1, D + 1):
        num = num * (N.value - (t - 1)) % qn
        f = math.factorial(t)
        vf = _vp(f, p) or 0
        # C(N, t) is a p-adic integer, so the canonical falling-factorial
        # representative is divisible by the p-part of t!
        assert num % p ** vf == 0
        col.append(num // p ** vf * _inv_mod(f // p ** vf, qn) % p ** prec)
    return col, prec


def torus_substitute(phi: PSeries2, N: int | PadicInt,
                     xi: tuple[int, int] = (0, 0)) -> HSeries:
    """H(X) = phi(X, xi (X+1)^N - 1), xi = zeta_{p^m}^a given as (m, a).

    H is returned to degree D over Z_p[zeta_{p^m}]; its is_zero test is a
    statement at the returned precision.
    """
    p, D, M = phi.p, phi.D, phi.M
    m, a = xi
    ring = cyc_ring(p, m)
    col, prec = binomial_column(N, D, p, M)
    Mw = prec
    xi_el = ring.zeta_pow(a, Mw)
    # S = xi (X+1)^N - 1 to degree D
    S = [ring.scale(col[t], xi_el, Mw) for t in range(D + 1)]
    S[0] = ring.sub(S[0], ring.from_int(1, Mw), Mw)
    # phi as a polynomial in Y: row[j][i] = c_{ij}
    rows: dict[int, dict[int, int]] = {}
    jmax = 0
    for (i, j), c in phi.coeffs.items():
        rows.setdefault(j, {})[i] = c
        jmax = max(jmax, j)
    zero = ring.zero()
    acc = [zero] * (D + 1)

    def add_row(vec, row, degcap):
        for i, c in row.items():
            if i <= degcap:
                vec[i] = ring.add(vec[i], ring.from_int(c, Mw), Mw)
        return vec

    for j in range(jmax, -1, -1):
        # acc = acc * S + phi_j(X), truncated at degree D
        if any(not ring.is_zero(c) for c in acc):
            new = [zero] * (D + 1)
            for i1, c1 in enumerate(acc):
                if ring.is_zero(c1):
                    continue
                for i2, c2 in enumerate(S):
                    i = i1 + i2
                    if i > D:
                        break
                    if ring.is_zero(c2):
                        continue
                    new[i] = ring.add(new[i], ring.mul(c1, c2, Mw), Mw)
            acc = new
        if j in rows:
            acc = add_row(acc, rows[j], D)
    return HSeries(ring=ring, coeffs=acc, prec=Mw)


# ---------------------------------------------------------------------------
# translate detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranslateHit:
    n_value: int                 # N mod p^prec (balanced small lift if exact)
    n_prec: int | None           # None when N was verified as an exact integer
    xi: tuple[int, int]          # (m, a): xi = zeta_{p^m}^a
    swap: bool                   # True: the roles of X and Y were exchanged


def _solve_linear_n(phi: PSeries2, ring: CycRing, xi_el: tuple,
                    M: int) -> tuple[int, int] | None:
    """Solve the degree-1 coefficient equation A + B N = 0 for scalar N.

    Modulo X^2 the substituted variable is (xi - 1) + xi N X, so the
    degree-1 coefficient of H is linear in N.  Returns (N, prec) with N
    determined mod p^prec; a p-power in the leading scalar is divided
    out, costing precision but not correctness (the caller certifies any
    candidate by a full substitution).
    """
    p = phi.p
    q = p ** M
    s0 = ring.sub(xi_el, ring.from_int(1, M), M)
    s0pow = [ring.from_int(1, M)]
    for _ in range(phi.D):
        s0pow.append(ring.mul(s0pow[-1], s0, M))
    A = ring.zero()
    B = ring.zero()
    for (i, j), c in phi.coeffs.items():
        if i == 1:
            A = ring.add(A, ring.scale(c, s0pow[j], M), M)
        if i == 0 and j >= 1:
            B = ring.add(B, ring.scale(c * j, ring.mul(s0pow[j - 1],
                                                       xi_el, M), M), M)
    if ring.is_zero(B):
        return None
    # N is a p-adic scalar: coordinate-wise B_i N = -A_i; pivot on the
    # coordinate of least valuation and check the rest for consistency
    pivot = min((i for i in range(ring.deg) if B[i]),
                key=lambda i: _vp(B[i], p))
    e = _vp(B[pivot], p)
    if e >= M or A[pivot] % p ** e != 0:
        return None
    prec = M - e
    qn = p ** prec
    n = (-A[pivot] // p ** e) * _inv_mod(B[pivot] // p ** e, qn) % qn
    for i in range(ring.deg):
        if (B[i] * n + A[i]) % qn != 0:
            return None
    return n, prec


def _filter_xi(phi: PSeries2, ring: CycRing, xi_el: tuple, M: int) -> bool:
    """Necessary condition independent of N: H(0) = phi(0, xi - 1) = 0."""
    s0 = ring.sub(xi_el, ring.from_int(1, M), M)
    acc = ring.zero()
    power = ring.from_int(1, M)
    for j in range(phi.D + 1):
        c = phi.coeffs.get((0, j), 0)
        if c:
            acc = ring.add(acc, ring.scale(c, power, M), M)
        power = ring.mul(power, s0, M)
    return ring.is_zero(acc)


def _balanced_small(n: int, q: int, bound: int) -> int | None:
    r = n % q
    if r > q // 2:
        r -= q
    return r if abs(r) <= bound else None


def detect_translate(phi: PSeries2, m_max: int = DEFAULT_M_MAX
                     ) -> TranslateHit | None:
    """Search for (N, xi) with phi divisible by xi (X+1)^N - (Y+1).

    Both coordinate orders are tried.  Candidate xi range over mu_{p^m}
    for m <= m_max; N is solved from the lowest-degree coefficient
    equations and certified by a full torus_substitute.  Absence is a
    valid answer at the stated (D, M, m_max) bounds.
    """
    p = phi.p
    assert not phi.is_zero(), "translate detection needs a nonzero series"
    M = phi.M if phi.M is not None else DEFAULT_M
    work = PSeries2(p, phi.D, M, phi.coeffs) if phi.M is None else phi
    for swap in (False, True):
        psi = work.swap() if swap else work
        for m in range(0, m_max + 1):
            ring = cyc_ring(p, m)
            exps = [0] if m == 0 else [a for a in range(1, p ** m)
                                       if a % p != 0]
            for a in exps:
                xi_el = ring.zeta_pow(a, M)
                if not _filter_xi(psi, ring, xi_el, M):
                    continue
                sol = _solve_linear_n(psi, ring, xi_el, M)
                if sol is None:
                    continue
                n, n_prec = sol
                # exact-integer fast path: small balanced lift
                small = _balanced_small(n, p ** n_prec, 4 * phi.D)
                if small is not None and \
                        torus_substitute(psi, small, (m, a)).is_zero():
                    return TranslateHit(small, None, (m, a), swap)
                H = torus_substitute(psi, PadicInt(p, n, n_prec), (m, a))
                if H.is_zero():
                    prec = min(H.prec, n_prec)
                    return TranslateHit(n % p ** prec, prec, (m, a), swap)
    return None


# ---------------------------------------------------------------------------
# the trichotomy classifier
# ---------------------------------------------------------------------------

@dataclass
class Classification:
    label: str                   # DIAGONAL / TORUS_TRANSLATE /
                                 # NO_TRANSLATE_UP_TO_BOUNDS
    hit: TranslateHit | None
    bounds: tuple[int, int, int]          # (D, M, m_max)
    empirical_min: Fraction | float | None = None
    points_sampled: int = 0


def classify(phi: PSeries2, m_max: int = DEFAULT_M_MAX,
             point_budget: int = 24) -> Classification:
    """DIAGONAL / TORUS_TRANSLATE / NO_TRANSLATE_UP_TO_BOUNDS for phi.

    In the last case the minimum valuation of phi over sampled torsion
    classical points is reported as empirical evidence (it is not a
    rigorous lower bound for the whole torsion family).
    """
    p = phi.p
    assert phi.coeffs.get((0, 0), 0) == 0, \
        "classify expects a series through the origin"
    M = phi.M if phi.M is not None else DEFAULT_M
    if phi.diagonal_is_zero():
        return Classification("DIAGONAL", None, (phi.D, M, m_max))
    hit = detect_translate(phi, m_max)
    if hit is not None:
        return Classification("TORUS_TRANSLATE", hit, (phi.D, M, m_max))
    # sample torsion points P_{0, zeta, zeta'} for the empirical minimum
    sampled = 0
    vmin: Fraction | float | None = None
    for m1, a1, m2, a2 in _torsion_samples(p, min(m_max, 2)):
        if sampled >= point_budget:
            break
        val = eval_special(phi, ClassicalPoint(p, 0, (m1, a1), (m2, a2)))
        sampled += 1
        if val.kind == "exact":
            if vmin is None or val.value < vmin:
                vmin = val.value
    return Classification("NO_TRANSLATE_UP_TO_BOUNDS", None,
                          (phi.D, M, m_max), empirical_min=vmin,
                          points_sampled=sampled)


def _torsion_samples(p: int, m_cap: int):
    pts = []
    for m1 in range(0, m_cap + 1):
        for a1 in range(p ** m1):
            if m1 and a1 % p == 0:
                continue
            for m2 in range(0, m_cap + 1):
                for a2 in range(p ** m2):
                    if m2 and a2 % p == 0:
                        continue
                    pts.append((m1, a1, m2, a2))
    return pts
