"""Hecke operators on the computed cohomology spaces.

T_l for primes l coprime to the level acts on E_1^{2,0} = M + M through
Heilbronn matrices built from the Euclidean continued-fraction algorithm,
block-diagonally (the same action on both copies of the induced module M).
The operator must map im(d_1) into itself -- this is checked numerically on
every space and failure is a hard error, since it would mean the cell
incidence data is wrong.  The quotient by im(d_1) is H^2, where
characteristic polynomials (exact, via CRT over split primes) and joint
eigensystem data are extracted.

U_pi for pi dividing the level uses only the N(pi) upper-triangular coset
matrices; symbols whose transported row fails unimodularity are dropped.

The involution J = diag(-1, 1) acts on coset rows by (c, d) -> (-c, d) and
splits H^2 into plus/minus parts; newforms fixed by J are the ones visible
to PGL_2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd, isqrt, lcm

import numpy as np
from sympy import isprime, primitive_root
from sympy.ntheory.residue_ntheory import sqrt_mod

from . import modmat
from .cells import cell_domain, mat_inv
from .cohomology import CohSpace, h2_space, triples_to_modmat
from .fields import IQInt, Ideal, euclid_divmod, sigma0
from .matrices import charpoly_crt
from .residues import (DirichletChar, characters, residue_ring, trivial_char,
                       unit_group)
from .scalars import CycScalar, ModEmbedding, _field_disc

Mat2 = tuple[IQInt, IQInt, IQInt, IQInt]


class ImagePreservationError(RuntimeError):
    """The Hecke action failed to preserve im(d_1): incidence-data bug."""


class IntegralStructureError(RuntimeError):
    """mod-p reduction of the quotient structure is not well defined."""


# ---------------------------------------------------------------------------
# Heilbronn matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeilbronnSet:
    lam: IQInt
    mats: tuple[Mat2, ...]       # full continued-fraction closure (for T)
    skeleton: tuple[Mat2, ...]   # the N(lam)+1 coset representatives


def _mat_det(m: Mat2) -> IQInt:
    return m[0] * m[3] - m[1] * m[2]


@lru_cache(maxsize=None)
def heilbronn_set(lam: IQInt) -> HeilbronnSet:
    """Heilbronn matrices of determinant lam for a prime element lam.

    Continued-fraction chains over the canonical residues mod lam, with the
    Euclidean nearest-rounding of euclid_divmod as the fixed tie-break,
    plus the diagonal seed (1, 0; 0, lam).
    """
    d = lam.d
    ideal = Ideal(lam)
    factors = ideal.factor()
    if len(factors) != 1 or factors[0][1] != 1:
        raise ValueError(f"{lam} does not generate a prime ideal")
    one, zero = IQInt(d, 1), IQInt(d, 0)
    ring = residue_ring(ideal)
    mats: list[Mat2] = [(one, zero, zero, lam)]
    for e in ring.elements():
        # reduce the representative to the small Euclidean residue
        _, r = euclid_divmod(ring.lift(e), lam)
        x1, x2 = lam, -r
        y1, y2 = zero, one
        a, b = -lam, r
        mats.append((x1, x2, y1, y2))
        while not b.is_zero():
            q, c = euclid_divmod(a, b)
            a, b = -b, c
            x1, x2 = x2, q * x2 - x1
            y1, y2 = y2, q * y2 - y1
            mats.append((x1, x2, y1, y2))
    for m in mats:
        assert _mat_det(m) == lam, "Heilbronn chain lost the determinant"
    skeleton = [(one, ring.lift(e), zero, lam) for e in ring.elements()]
    skeleton.append((lam, zero, zero, one))
    assert len(skeleton) == ideal.norm() + 1
    return HeilbronnSet(lam=lam, mats=tuple(mats), skeleton=tuple(skeleton))


# ---------------------------------------------------------------------------
# operators on E_1^{2,0} and their quotient matrices
# ---------------------------------------------------------------------------

@dataclass
class HeckeOperator:
    """A Hecke-type operator, stored as its blocks on E = M + M.

    block[x] is a list of (y, zeta-exponent) pairs: the operator sends the
    coordinate at coset x to the twisted sum over cosets y.  The second
    2-cell carries the conjugate block2 (the block conjugated by the action
    of the cell-gluing element G), which is what makes the pair preserve
    im(d_1).
    """
    space: CohSpace
    label: str
    lam: IQInt | None
    block: list[list[tuple[int, int]]]
    block2: list[list[tuple[int, int]]]
    _mods: dict = field(default_factory=dict, repr=False)

    def block_matrix(self, emb: ModEmbedding, second: bool = False
                     ) -> np.ndarray:
        key = (emb.p, emb.z, emb.w, second)
        cached = self._mods.get(key)
        if cached is not None:
            return cached
        n = self.space.module.n
        p = emb.p
        dim = self.space.module.dim
        A = np.zeros((dim, dim))
        zpow = [pow(emb.z, e, p) for e in range(n)] if n > 1 else [1]
        for x, terms in enumerate(self.block2 if second else self.block):
            for y, e in terms:
                A[x, y] = (A[x, y] + zpow[e % n]) % p
        self._mods[key] = A
        return A

    def quotient_matrix(self, emb: ModEmbedding) -> np.ndarray:
        """Matrix on the H^2 basis (free coordinates of the im(d_1) echelon).

        Raises ImagePreservationError when the operator does not map
        im(d_1) into itself modulo emb.p.
        """
        ech = _space_echelon(self.space, emb)
        B = (self.block_matrix(emb), self.block_matrix(emb, second=True))
        p = emb.p
        TD = _apply_block(B, ech.D, p)
        if ech.pivots:
            red = modmat.reduce_rows_mod(TD.T, ech.pivots, ech.E, p)
        else:
            red = TD.T
        if red.any():
            raise ImagePreservationError(
                f"{self.label} does not preserve im(d_1) mod {p} on "
                f"{self.space.level} / {self.space.eps.encode()}")
        cols = _apply_block_cols(B, ech.free, p)
        red = modmat.reduce_rows_mod(cols.T, ech.pivots, ech.E, p) \
            if ech.pivots else cols.T
        return red[:, ech.free].T % p

    def charpoly(self) -> list[CycScalar]:
        """Exact characteristic polynomial on H^2 (low-to-high, monic)."""
        ctx = self.space.module.ctx
        h = self.space.dim_h2
        if h == 0:
            return [CycScalar.one(ctx)]
        norm = self.lam.norm() if self.lam is not None else 2
        bound = (2 * (norm + 1)) ** h * (1 << (2 * max(ctx.n, 2)))
        return charpoly_crt(ctx, h, lambda e: [
            int(c) for c in modmat.charpoly_mod(self.quotient_matrix(e), e.p)
        ], bound)


@dataclass
class _EchelonData:
    D: np.ndarray          # d1 matrix mod p, shape (2 dim, ncols)
    pivots: list[int]
    E: np.ndarray          # echelon of the row space of im(d1)
    free: list[int]        # non-pivot coordinates: the H^2 basis


def _apply_block(B, V: np.ndarray, p: int) -> np.ndarray:
    """Apply diag(B1, B2) to the columns of V (shape (2 dim, *))."""
    B1, B2 = B
    dim = B1.shape[0]
    top = modmat.matmul_mod(B1, V[:dim], p)
    bot = modmat.matmul_mod(B2, V[dim:], p)
    return np.concatenate([top, bot])


def _apply_block_cols(B, cols: list[int], p: int) -> np.ndarray:
    """Images of the basis vectors e_c, c in cols, under diag(B1, B2)."""
    B1, B2 = B
    dim = B1.shape[0]
    out = np.zeros((2 * dim, len(cols)))
    for j, c in enumerate(cols):
        if c < dim:
            out[:dim, j] = B1[:, c]
        else:
            out[dim:, j] = B2[:, c - dim]
    return out % p


def _space_echelon(space: CohSpace, emb: ModEmbedding) -> _EchelonData:
    key = (emb.p, emb.z, emb.w)
    cached = space._echelons.get(key)
    if cached is not None:
        return cached
    D = triples_to_modmat(space.d1_triples, space.d1_shape, emb)
    r, pivots, E = modmat.echelon_mod(D.T, emb.p)
    if r != space.rank_d1:
        raise ArithmeticError(
            f"rank of d1 mod {emb.p} is {r}, expected {space.rank_d1}: "
            "unlucky prime")
    pivset = set(pivots)
    free = [c for c in range(space.d1_shape[0]) if c not in pivset]
    data = _EchelonData(D=D, pivots=list(pivots), E=E, free=free)
    space._echelons[key] = data
    return data


def _row_block(space: CohSpace, mats, drop_bad: bool
               ) -> list[list[tuple[int, int]]]:
    """Transport each coset row through the adjugates of the matrices.

    The module's group action carries row(x) to row(x) g^{-1}; the Hecke
    analogue transports by lam h^{-1} = adj(h).  For coset x with
    representative row (c, d), each matrix contributes eps(u) e_y where
    (c, d) adj(h) = u * rep(y).  Non-unimodular images are dropped when
    drop_bad is set (the U_pi case), otherwise they are an error.
    """
    module = space.module
    P = module.P
    eps = module.eps
    n = module.n
    adj = [(dd, -b, -c, a) for a, b, c, dd in mats]
    block: list[list[tuple[int, int]]] = []
    for x in range(module.dim):
        rc, rd = P.lift(x)
        terms: list[tuple[int, int]] = []
        for a, b, c, d in adj:
            nc = rc * a + rd * c
            nd = rc * b + rd * d
            y = P.normalize(nc, nd)
            if y is None:
                if drop_bad:
                    continue
                raise ArithmeticError(
                    "row transport lost unimodularity for a good prime")
            u = P.unit_ratio(nc, nd, y)
            terms.append((y, eps.value_exp(u, n)))
        block.append(terms)
    return block


def _conjugate_block(space: CohSpace, block) -> list[list[tuple[int, int]]]:
    """The block conjugated by the action of the cell-gluing element G:
    R(G^{-1}) B R(G), computed sparsely."""
    module = space.module
    dom = cell_domain(module.d)
    aG = module.act(dom.G)
    aGi = module.act(mat_inv(dom.G))
    n = module.n
    out: list[list[tuple[int, int]]] = []
    for x in range(module.dim):
        base = aGi.expo[x]
        terms = [(aG.target[y0], (e0 + base + aG.expo[y0]) % max(n, 1))
                 for y0, e0 in block[aGi.target[x]]]
        out.append(terms)
    return out


def hecke_operator(space: CohSpace, hset: HeilbronnSet) -> HeckeOperator:
    """T_l (l coprime to the level) or U_pi (pi dividing the level)."""
    assert space.module is not None and space.k == 0, \
        "Hecke implemented on trivial-weight spaces"
    lam = hset.lam
    lam_ideal = Ideal(lam)
    if lam_ideal.coprime_to(space.level):
        block = _row_block(space, hset.mats, drop_bad=False)
        label = f"T_{lam}"
    else:
        # U_pi: the same Heilbronn family, with symbols whose transported
        # row fails unimodularity dropped
        block = _row_block(space, hset.mats, drop_bad=True)
        label = f"U_{lam}"
    return HeckeOperator(space=space, label=label, lam=lam, block=block,
                         block2=_conjugate_block(space, block))


def j_operator(space: CohSpace) -> HeckeOperator:
    """The involution induced by conjugation with J = diag(-1, 1)."""
    d = space.level.d
    one, zero = IQInt(d, 1), IQInt(d, 0)
    jmat = (-one, zero, zero, one)
    block = _row_block(space, [jmat], drop_bad=False)
    return HeckeOperator(space=space, label="J", lam=None, block=block,
                         block2=_conjugate_block(space, block))


def j_split(space: CohSpace, emb: ModEmbedding | None = None
            ) -> tuple[int, int]:
    """(dim plus part, dim minus part) of H^2 under J."""
    if space.dim_h2 == 0:
        return (0, 0)
    if emb is None:
        emb = default_tower(space.level.d).embedding(space.module.ctx.n)
    J = j_operator(space).quotient_matrix(emb)
    p = emb.p
    h = J.shape[0]
    if (modmat.matmul_mod(J, J, p) != np.eye(h)).any():
        raise ArithmeticError("J does not square to the identity on H^2")
    plus = modmat.kernel_mod((J - np.eye(h)) % p, p).shape[0]
    minus = modmat.kernel_mod((J + np.eye(h)) % p, p).shape[0]
    assert plus + minus == h, "J is not semisimple mod p"
    return plus, minus


# ---------------------------------------------------------------------------
# compatible embeddings across levels (one prime p, one primitive root)
# ---------------------------------------------------------------------------

class EmbeddingTower:
    """Reductions of Q(zeta_m, omega) -> F_p, compatible across all m | p-1.

    zeta_m is always g^((p-1)/m) for one fixed primitive root g, so values
    of characters of different orders land in one F_p coherently.
    """

    def __init__(self, d: int, p: int, conj: int = 0):
        self.d = d
        self.p = p
        disc = _field_disc(d)
        s = sqrt_mod(disc % p, p)
        if s is None:
            raise ValueError(f"{p} is inert in the quadratic field")
        t = 0 if d % 4 != 1 else 1
        roots = sorted({(t + r) * pow(2, -1, p) % p for r in (s, p - s)})
        self.w = roots[conj % 2]
        self.g = primitive_root(p)

    def zeta(self, m: int) -> int:
        assert (self.p - 1) % m == 0
        return pow(self.g, (self.p - 1) // m, self.p)

    def embedding(self, n: int, ctx=None) -> ModEmbedding:
        from .scalars import cyc_ctx
        ctx = ctx or cyc_ctx(self.d, n)
        return ModEmbedding(ctx, self.p, self.zeta(max(n, 1)), self.w)


def find_tower(d: int, multiple: int, start: int = 1 << 21,
               conj: int = 0) -> EmbeddingTower:
    """A tower at the first usable prime p = 1 mod multiple after start."""
    disc = _field_disc(d)
    p = start + multiple - (start % multiple) + 1
    while True:
        if isprime(p) and sqrt_mod(disc % p, p) is not None:
            return EmbeddingTower(d, p, conj)
        p += multiple


@lru_cache(maxsize=None)
def default_tower(d: int, multiple: int = 720720,
                  index: int = 0, conj: int = 0) -> EmbeddingTower:
    """Shared towers; the multiple covers all character orders we meet."""
    tower = find_tower(d, multiple, start=(1 << 21) + index * 500000,
                       conj=conj)
    return tower


# ---------------------------------------------------------------------------
# joint eigensystems
# ---------------------------------------------------------------------------

@dataclass
class EigenSystem:
    values: tuple[int, ...]       # a_l mod p, in prime-list order
    j_sign: int                   # +1 / -1
    mult: int                     # generalized joint eigenspace dimension
    kind: str = "?"               # eisenstein / old / new
    rational: tuple[int, ...] | None = None  # balanced-lift eigenvalues
    u_values: tuple[int, ...] = ()           # balanced lifts of U-eigenvalues

    def key(self) -> tuple:
        return (self.values, self.j_sign)


@dataclass
class EigenData:
    level: Ideal
    eps: DirichletChar
    primes: tuple[IQInt, ...]
    p: int                         # the working reduction prime
    systems: list[EigenSystem]
    charpolys: dict = field(default_factory=dict)

    def new_systems(self) -> list[EigenSystem]:
        return [s for s in self.systems if s.kind == "new"]

    def count(self, kind: str) -> int:
        return sum(s.mult for s in self.systems if s.kind == kind)


def _mat_roots(A: np.ndarray, p: int) -> list[tuple[int, int]]:
    """(root, multiplicity) of the charpoly of A; error if it fails to split."""
    from sympy import GF, Poly, Symbol
    coeffs = modmat.charpoly_mod(A, p)   # low-to-high
    x = Symbol("x")
    poly = Poly(list(reversed([int(c) for c in coeffs])), x, modulus=p,
                symmetric=False)
    roots = poly.ground_roots()
    out = [(int(r) % p, m) for r, m in roots.items()]
    if sum(m for _, m in out) != A.shape[0]:
        raise _NonSplitError
    return out


class _NonSplitError(Exception):
    pass


def _restrict(op: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    """Matrix of op on the invariant subspace with basis the rows of V."""
    k = V.shape[0]
    img = modmat.matmul_mod(V, op.T % p, p)   # rows: op applied to basis rows
    A = np.zeros((k, k))
    # solve X V = img  =>  V^T X^T = img^T, column by column
    r, pivots, E = modmat.echelon_mod(
        np.concatenate([V.T, img.T], axis=1), p)
    if any(c >= k for c in pivots):
        raise ArithmeticError("subspace not invariant under the operator")
    n = V.shape[1]
    for j in range(k):
        x = np.zeros(k)
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            rest = modmat.dot_mod(E[i, :k], x, p)
            x[c] = (E[i, k + j] - rest) % p
        A[:, j] = x
    return A


def _gen_kernel(A: np.ndarray, a: int, mult: int, p: int) -> np.ndarray:
    """Basis rows of ker (A - a)^mult."""
    M = (A - a * np.eye(A.shape[0])) % p
    P = np.eye(A.shape[0])
    for _ in range(mult):
        P = modmat.matmul_mod(M, P, p)
    return modmat.kernel_mod(P, p)


def joint_eigensystems(ops: list[np.ndarray], j_op: np.ndarray | None,
                       p: int) -> list[tuple[tuple[int, ...], int, int]]:
    """(value tuple, j_sign, multiplicity) per joint generalized eigenspace."""
    h = ops[0].shape[0] if ops else 0
    if h == 0:
        return []
    chain = ([("J", j_op)] if j_op is not None else []) + \
        [(i, op) for i, op in enumerate(ops)]
    spaces = [(np.eye(h), {})]
    for tag, op in chain:
        nxt = []
        for V, vals in spaces:
            A = _restrict(op, V, p)
            for a, mult in _mat_roots(A, p):
                K = _gen_kernel(A, a, mult, p)
                if K.shape[0] == 0:
                    continue
                W = modmat.matmul_mod(K, V, p)
                nxt.append((W, {**vals, tag: a}))
        spaces = nxt
    out = []
    for V, vals in spaces:
        tup = tuple(vals[i] for i in range(len(ops)))
        if j_op is not None:
            j = vals["J"]
            sign = 1 if j == 1 else (-1 if j == p - 1 else 0)
            if sign == 0:
                raise ArithmeticError("J eigenvalue is not +-1")
        else:
            sign = 0
        out.append((tup, sign, V.shape[0]))
    return out


# ---------------------------------------------------------------------------
# Eisenstein eigensystem prediction and old/new bookkeeping
# ---------------------------------------------------------------------------

def eisenstein_values(level: Ideal, eps: DirichletChar,
                      primes: tuple[IQInt, ...],
                      tower: EmbeddingTower) -> list[tuple[int, ...]]:
    """Predicted Eisenstein eigensystem tuples mod tower.p.

    Ordered pairs (chi1, chi2) of primitive characters with chi1 chi2
    inducing eps and f(chi1) f(chi2) | level give a_l = chi1(l) + chi2(l)
    N(l); the list is de-duplicated (the same value tuple may arise from
    several pairs, and cohomological multiplicities are not predicted here).
    """
    if eps.modulus != level:
        eps = eps.lift_to(level)
    p = tower.p
    prim = eps.primitive()
    seen = set()
    for f1 in level.divisors():
        for chi1 in characters(f1):
            if chi1.conductor() != f1:
                continue
            for f2 in level.quotient(f1).divisors():
                for chi2 in characters(f2):
                    if chi2.conductor() != f2:
                        continue
                    prod = chi1.lift_to(level).mul(chi2.lift_to(level))
                    if prod.primitive() != prim:
                        continue
                    tup = []
                    for lam in primes:
                        n1, n2 = chi1.order, chi2.order
                        v1 = pow(tower.zeta(n1),
                                 chi1.value_exp(_red(chi1, lam), n1), p)
                        v2 = pow(tower.zeta(n2),
                                 chi2.value_exp(_red(chi2, lam), n2), p)
                        tup.append((v1 + v2 * lam.norm()) % p)
                    seen.add(tuple(tup))
    return sorted(seen)


def _red(chi: DirichletChar, x: IQInt):
    return chi.group.ring.reduce(x)


def eigen_data(level: Ideal, eps: DirichletChar,
               primes: tuple[IQInt, ...],
               tower: EmbeddingTower | None = None,
               with_j: bool = True,
               u_primes: tuple[IQInt, ...] = (),
               _spaces: dict | None = None,
               _depth: int = 0) -> EigenData:
    """Joint eigensystems at the level, classified Eisenstein / old / new.

    Old systems are identified recursively: cuspidal systems at proper
    divisor levels (with the character restricted wherever its conductor
    allows) reappear at this level, each with multiplicity sigma_0 of the
    level quotient.
    """
    d = level.d
    if eps.modulus != level:
        eps = eps.lift_to(level)
    for lam in primes:
        assert Ideal(lam).coprime_to(level), \
            "eigensystem primes must avoid the level"
    if tower is None:
        tower = default_tower(d)
    cache = _spaces if _spaces is not None else {}
    key = (level.gen.key(), eps.orbit_key())
    if key in cache:
        return cache[key]
    for pi in u_primes:
        assert Ideal(pi).divides(level), "U primes must divide the level"
    systems = _computed_systems(level, eps, primes, tower, with_j, u_primes)
    # classify: Eisenstein by predicted values, old by recursion
    eis = set(eisenstein_values(level, eps, primes, tower))
    old_counts: dict[tuple, int] = {}
    cond = eps.conductor()
    for M in level.divisors():
        if M == level or not cond.divides(M):
            continue
        sub = eigen_data(M, eps.primitive().lift_to(M), primes, tower,
                         with_j=False, _spaces=cache, _depth=_depth + 1)
        mult = sigma0(level.quotient(M))
        for s in sub.new_systems():
            old_counts[s.values] = old_counts.get(s.values, 0) \
                + mult * s.mult
    for s in systems:
        if s.values in eis:
            s.kind = "eisenstein"
        elif old_counts.get(s.values, 0) > 0:
            s.kind = "old"
            old_counts[s.values] -= s.mult
        else:
            s.kind = "new"
    data = EigenData(level=level, eps=eps, primes=tuple(primes), p=tower.p,
                     systems=systems)
    cache[key] = data
    return data


def _computed_systems(level, eps, primes, tower, with_j,
                      u_primes=()) -> list[EigenSystem]:
    space = h2_space(level, eps)
    if space.dim_h2 == 0:
        return []
    emb = tower.embedding(space.module.ctx.n)
    ops = [hecke_operator(space, heilbronn_set(lam)).quotient_matrix(emb)
           for lam in list(primes) + list(u_primes)]
    j_mat = j_operator(space).quotient_matrix(emb) if with_j else None
    try:
        raw = joint_eigensystems(ops, j_mat, tower.p)
    except _NonSplitError:
        # eigenvalues not in F_p at this prime: move to the next tower
        nxt = default_tower(level.d, index=_next_index(tower))
        return _computed_systems(level, eps, primes, nxt, with_j, u_primes)
    k = len(primes)
    p = tower.p
    out = [EigenSystem(values=tup[:k], j_sign=sign, mult=mult,
                       u_values=tuple(_balanced(v, p) for v in tup[k:]))
           for tup, sign, mult in raw]
    out.sort(key=lambda s: (s.values, s.j_sign))
    _attach_rational(out, primes, tower.p)
    return out


def _balanced(v: int, p: int) -> int:
    return v if v <= p // 2 else v - p


_tower_indices: dict[int, int] = {}


def _next_index(tower: EmbeddingTower) -> int:
    idx = _tower_indices.get(tower.p, 0) + 1
    _tower_indices[tower.p] = idx
    return idx


def _attach_rational(systems: list[EigenSystem], primes, p: int) -> None:
    """Mark systems whose eigenvalues lift to small balanced integers.

    The lift is certified against a second, independent reduction prime by
    the callers that need it; here the Hecke bound |a| <= N(l) + 1 plus a
    huge p already makes false positives vanishingly unlikely.
    """
    for s in systems:
        lifts = []
        for lam, v in zip(primes, s.values):
            a = v if v <= p // 2 else v - p
            if abs(a) > lam.norm() + 1:
                lifts = None
                break
            lifts.append(a)
        if lifts is not None:
            s.rational = tuple(lifts)


# ---------------------------------------------------------------------------
# exact rational eigenvalues and polynomial checks
# ---------------------------------------------------------------------------

def rational_root_multiplicity(poly: list[CycScalar], a: int) -> int:
    """Multiplicity of the integer root a in an exact polynomial."""
    ctx = poly[0].ctx
    mult = 0
    cur = list(poly)
    while len(cur) > 1:
        rem, quo = _synth_div(cur, Fraction(a), ctx)
        if not rem.is_zero():
            return mult
        mult += 1
        cur = quo
    return mult


def _synth_div(poly: list[CycScalar], a: Fraction, ctx):
    """poly = (x - a) q + r by synthetic division; returns (r, q)."""
    acc = CycScalar.zero(ctx)
    quo: list[CycScalar] = []
    for c in reversed(poly):
        acc = c + acc.scale(a)
        quo.append(acc)
    rem = quo.pop()
    quo.reverse()
    return rem, quo


def divides_exactly(divisor_int_coeffs: list[int],
                    poly: list[CycScalar]) -> bool:
    """Does the monic integer polynomial divide the exact polynomial?"""
    ctx = poly[0].ctx
    div = [CycScalar.from_rational(ctx, c) for c in divisor_int_coeffs]
    assert div[-1] == CycScalar.one(ctx), "divisor must be monic"
    rem = list(poly)
    k = len(div) - 1
    while len(rem) - 1 >= k:
        lead = rem[-1]
        shift = len(rem) - 1 - k
        for i in range(k + 1):
            rem[shift + i] = rem[shift + i] - lead * div[i]
        assert rem[-1].is_zero()
        rem.pop()
    return all(c.is_zero() for c in rem)


def ramanujan_violators(poly: list[CycScalar], lam: IQInt,
                        tol: float = 1e-6) -> int:
    """Number of roots violating |a| <= 2 sqrt(N(lam)), numerically.

    Eisenstein eigenvalues sit near N(lam) + 1, far above the cuspidal
    bound, so float root-finding is decisive here.
    """
    coeffs = [complex(_to_complex(c)) for c in poly]
    roots = np.roots(list(reversed(coeffs)))
    bound = 2.0 * (lam.norm() ** 0.5)
    out = 0
    for r in roots:
        if abs(r) > bound * (1 + tol) + tol:
            out += 1
    return out


def _to_complex(c: CycScalar) -> complex:
    ctx = c.ctx
    zeta = np.exp(2j * np.pi / ctx.n) if ctx.n > 1 else 1.0
    if ctx.d % 4 == 1:
        w = (1 + 1j * (abs(ctx.d) ** 0.5)) / 2
    else:
        w = 1j * (abs(ctx.d) ** 0.5)
    out = 0j
    for i, (qa, qb) in enumerate(c.coeffs):
        out += (float(qa) + float(qb) * w) * zeta ** i
    return out


def small_cyclotomic_lift(value: int, p: int, zeta3: int,
                          bound: int) -> tuple[int, int] | None:
    """(x, y) with x + y zeta_3 = value mod p and |x|, |y| <= bound."""
    hits = []
    for y in range(-bound, bound + 1):
        x = (value - y * zeta3) % p
        if x > p // 2:
            x -= p
        if abs(x) <= bound:
            hits.append((x, y))
    if len(hits) == 1:
        return hits[0]
    return None


# ---------------------------------------------------------------------------
# ordinarity at p
# ---------------------------------------------------------------------------

@dataclass
class OrdinarityVerdict:
    level: Ideal
    verdict: str                 # "ordinary" / "non-ordinary" / "undetermined"
    detail: dict


def ordinarity(level: Ideal, eps: DirichletChar, system: EigenSystem,
               primes: tuple[IQInt, ...], p: int = 3,
               u_primes: tuple[IQInt, ...] = ()) -> OrdinarityVerdict:
    """Decision procedure for ordinarity of a trivial-weight newform at p.

    Per prime pp above p: v = v_pp(level), f = v_pp(conductor of eps).
      - v = 0: good prime; ordinary iff a_pp is a unit mod the prime above
        p (the Hecke polynomial x^2 - a x + N(pp) eps(pp) has a unit root
        iff a is a unit, since N(pp) = p).  Needs a_pp among the computed
        rational eigenvalues.
      - v = 1, f = 0: unramified twist of Steinberg (weight 0); the
        U-eigenvalue is a unit; when supplied it must be +-1.
      - v = f >= 1: principal-series case with character of exact
        conductor pp^v: ordinary.
      - anything else: non-ordinary.
    """
    from .fields import primes_above
    if eps.modulus != level:
        eps = eps.lift_to(level)
    cond = eps.conductor()
    detail: dict = {}
    verdict = "ordinary"
    for pp in primes_above(level.d, p):
        v = level.valuation(pp)
        f = cond.valuation(pp)
        tag = str(pp.gen)
        if v == 0:
            idx = next((i for i, lam in enumerate(primes)
                        if Ideal(lam) == pp), None)
            if idx is None or system.rational is None:
                detail[tag] = "good prime, eigenvalue unavailable"
                verdict = _meet(verdict, "undetermined")
                continue
            a = system.rational[idx]
            detail[tag] = f"good prime, a = {a}"
            if a % p == 0:
                verdict = "non-ordinary"
        elif v == 1 and f == 0:
            ua = next((system.u_values[i] for i, u in enumerate(u_primes)
                       if Ideal(u) == pp and i < len(system.u_values)), None)
            if ua is not None and ua not in (1, -1):
                detail[tag] = f"Steinberg with U-eigenvalue {ua}"
                verdict = "non-ordinary"
            else:
                detail[tag] = "Steinberg (unramified quadratic twist)"
        elif v >= 1 and f == v:
            detail[tag] = f"principal series, conductor pp^{v}"
        else:
            detail[tag] = f"v = {v}, conductor exponent {f}: no unit root"
            verdict = "non-ordinary"
    return OrdinarityVerdict(level=level, verdict=verdict, detail=detail)


def _meet(a: str, b: str) -> str:
    if "non-ordinary" in (a, b):
        return "non-ordinary"
    if "undetermined" in (a, b):
        return "undetermined"
    return "ordinary"


# ---------------------------------------------------------------------------
# congruence elimination mod a prime above p
# ---------------------------------------------------------------------------

def _scalar_mod_small(s: CycScalar, p: int, theta_img: int) -> int:
    """Reduce a cyclotomic integer modulo the prime above p with
    zeta_{p^k} -> 1 and theta -> theta_img.

    Only orders n = 2^a p^b with a <= 1 are supported (all nebentypus
    orders that can carry ordinary forms at p).
    """
    n = s.ctx.n
    m = n
    while m % p == 0:
        m //= p
    if m not in (1, 2):
        raise IntegralStructureError(
            f"no reduction of zeta_{n} into F_{p} implemented")
    out = 0
    for i, (qa, qb) in enumerate(s.coeffs):
        if qa.denominator % p == 0 or qb.denominator % p == 0:
            raise IntegralStructureError("denominator divisible by p")
        zi = 1 if m == 1 else pow(-1, (i * (n // m)) % m)
        # zeta^i = zeta_m^{i mod ...} * zeta_{p^b}^{...} -> zeta_m part only
        zi = _zeta_image(n, i, p)
        ca = int(qa * qa.denominator) * pow(int(qa.denominator), -1, p)
        cb = int(qb * qb.denominator) * pow(int(qb.denominator), -1, p)
        out = (out + zi * (ca + cb * theta_img)) % p
    return out % p


def _zeta_image(n: int, i: int, p: int) -> int:
    """Image of zeta_n^i under zeta_{p^k} -> 1, zeta_2 -> -1."""
    m = n
    pk = 1
    while m % p == 0:
        m //= p
        pk *= p
    if m == 1:
        return 1
    # zeta_n = zeta_m^a zeta_{pk}^b with a = n/m-inverse structure; since
    # m in {1, 2}, zeta_n^i maps to (-1)^(i * pk^{-1} mod m) ... for m = 2
    # the 2-part of zeta_n^i is zeta_2^(i * (n/2 odd part...))
    assert m == 2
    # zeta_n^i has 2-part zeta_2^j where j = i * pk_inv mod 2, pk odd
    j = (i * pow(pk, -1, 2)) % 2
    return -1 if j else 1


def _theta_images(d: int, p: int) -> list[int]:
    """Images of omega under the primes above p (empty if p is inert)."""
    t = 0 if d % 4 != 1 else 1
    m = -d if d % 4 != 1 else (1 - d) // 4
    return [r for r in range(p) if (r * r - t * r + m) % p == 0]


@dataclass
class EliminationWitness:
    possible: bool
    quotient_dim: int
    kernel_dims: list[int]       # surviving dimension after each prime
    theta_image: int


def congruence_eliminate(space: CohSpace, targets: dict,
                         p: int = 3, j_sign: int | None = None
                         ) -> list[EliminationWitness]:
    """Intersect ker(T_l - a_l) mod every prime above p on the integral
    quotient of the space.

    targets maps prime elements lam (coprime to the level) to target
    residues a_l in F_p.  With j_sign the kernel is first cut down to the
    corresponding eigenspace of the involution J.  One witness per prime
    above p (i.e. per choice of theta image); the congruence is possible
    iff some witness survives.
    """
    out = []
    for theta_img in _theta_images(space.level.d, p):
        out.append(_eliminate_one(space, targets, p, theta_img, j_sign))
    if not out:
        raise IntegralStructureError(f"{p} is inert; no split reduction")
    return out


def _eliminate_one(space: CohSpace, targets: dict, p: int,
                   theta_img: int, j_sign: int | None = None
                   ) -> EliminationWitness:
    D = _d1_mod_small(space, p, theta_img)
    r, pivots, E = modmat.echelon_mod(D.T, p)
    pivset = set(pivots)
    free = [c for c in range(space.d1_shape[0]) if c not in pivset]
    h = len(free)
    basis = np.eye(h)
    dims = []
    chain = []
    if j_sign is not None:
        chain.append((j_operator(space), j_sign))
    chain.extend((hecke_operator(space, heilbronn_set(lam)), a)
                 for lam, a in targets.items())
    for op, a in chain:
        B = (_block_mod_small(op.space, op.block, p, theta_img),
             _block_mod_small(op.space, op.block2, p, theta_img))
        # check preservation mod p (integral structure requirement)
        TD = _apply_block(B, D, p)
        red = modmat.reduce_rows_mod(TD.T, pivots, E, p) if pivots else TD.T
        if red.any():
            raise IntegralStructureError(
                f"{op.label} fails to preserve im(d1) mod {p}")
        cols = _apply_block_cols(B, free, p)
        redc = modmat.reduce_rows_mod(cols.T, pivots, E, p) \
            if pivots else cols.T
        Q = redc[:, free].T % p
        A = _restrict(Q, basis, p)
        K = modmat.kernel_mod((A - (a % p) * np.eye(A.shape[0])) % p, p)
        basis = modmat.matmul_mod(K, basis, p) if K.shape[0] else \
            np.zeros((0, h))
        dims.append(basis.shape[0])
        if basis.shape[0] == 0:
            break
    return EliminationWitness(possible=basis.shape[0] > 0,
                              quotient_dim=h, kernel_dims=dims,
                              theta_image=theta_img)


def _d1_mod_small(space: CohSpace, p: int, theta_img: int) -> np.ndarray:
    A = np.zeros(space.d1_shape)
    for r, c, v in space.d1_triples:
        A[r, c] = (A[r, c] + _scalar_mod_small(v, p, theta_img)) % p
    return A


def _block_mod_small(space: CohSpace, block, p: int,
                     theta_img: int) -> np.ndarray:
    module = space.module
    n = module.n
    dim = module.dim
    A = np.zeros((dim, dim))
    zimg = [_zeta_image(n, e, p) % p for e in range(n)] if n > 1 else [1]
    for x, terms in enumerate(block):
        for y, e in terms:
            A[x, y] = (A[x, y] + zimg[e % n]) % p
    return A
