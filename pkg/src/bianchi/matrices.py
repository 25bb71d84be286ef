"""Exact matrices over Q(omega, zeta_n) with multi-modular rank machinery.

Big matrices never see exact elimination: ranks come from reductions modulo
several split word-size primes (each reduction a ring homomorphism), with a
fraction-free certificate on the identified pivot submatrix when the size
permits.  Small matrices get honest exact elimination and characteristic
polynomials via the division-free Faddeev-LeVerrier recurrence.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import modmat
from .scalars import CycCtx, CycScalar, ModEmbedding, find_embeddings

# matrices with at least this many columns skip the exact certificate
EXACT_CERT_LIMIT = 500


class ExactMatrix:
    def __init__(self, ctx: CycCtx, rows: list[list[CycScalar]]):
        self.ctx = ctx
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        for r in rows:
            assert len(r) == self.ncols

    @staticmethod
    def zero(ctx: CycCtx, nrows: int, ncols: int) -> "ExactMatrix":
        z = CycScalar.zero(ctx)
        return ExactMatrix(ctx, [[z] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(ctx: CycCtx, n: int) -> "ExactMatrix":
        z, o = CycScalar.zero(ctx), CycScalar.one(ctx)
        return ExactMatrix(ctx, [[o if i == j else z for j in range(n)]
                                 for i in range(n)])

    @staticmethod
    def from_ints(ctx: CycCtx, rows) -> "ExactMatrix":
        return ExactMatrix(ctx, [[CycScalar.from_rational(ctx, x) for x in r]
                                 for r in rows])

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.ctx, [[a + b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.rows, other.rows)])

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        assert self.ncols == other.nrows
        z = CycScalar.zero(self.ctx)
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                s = z
                for k, a in enumerate(r):
                    if not a.is_zero():
                        s = s + a * other.rows[k][j]
                row.append(s)
            out.append(row)
        return ExactMatrix(self.ctx, out)

    def scale(self, q) -> "ExactMatrix":
        return ExactMatrix(self.ctx, [[a.scale(q) for a in r]
                                      for r in self.rows])

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ctx, [[self.rows[i][j]
                                       for i in range(self.nrows)]
                                      for j in range(self.ncols)])

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    # -- modular reduction ---------------------------------------------------

    def embed_mod(self, emb: ModEmbedding) -> np.ndarray:
        return np.array([[a.embed_mod(emb) for a in r] for r in self.rows],
                        dtype=np.float64)

    # -- rank / kernel -------------------------------------------------------

    def rank(self, primes: int = 3) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        embs = find_embeddings(self.ctx, primes)
        best = -1
        best_data = None
        for emb in embs:
            r, pivots, _ = modmat.echelon_mod(self.embed_mod(emb), emb.p)
            if r > best:
                best, best_data = r, (emb, pivots)
        if best == min(self.nrows, self.ncols):
            return best  # full rank needs no certificate
        if self.ncols < EXACT_CERT_LIMIT:
            emb, pivots = best_data
            rt, prow, _ = modmat.echelon_mod(
                self.embed_mod(emb).T, emb.p)
            assert rt == best
            sub = ExactMatrix(self.ctx,
                              [[self.rows[i][j] for j in pivots] for i in prow])
            assert _certify_nonsingular(sub), \
                "modular pivot submatrix is exactly singular"
        return best

    def _integer_rows(self):
        """Rows as plain ints when every entry is a rational integer."""
        out = []
        for r in self.rows:
            row = []
            for a in r:
                for i, c in enumerate(a.coeffs):
                    if i == 0:
                        if c[1] != 0 or c[0].denominator != 1:
                            return None
                        row.append(c[0].numerator)
                    elif c[0] != 0 or c[1] != 0:
                        return None
            out.append(row)
        return out

    def kernel(self) -> list[list[CycScalar]]:
        return exact_kernel(self)

    def charpoly(self) -> list[CycScalar]:
        return charpoly_flv(self)

    # -- serialization ---------------------------------------------------------

    def encode(self) -> dict:
        triples = []
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if not a.is_zero():
                    triples.append([i, j, a.encode()])
        return {"version": 1, "shape": [self.nrows, self.ncols],
                "n": self.ctx.n, "d": self.ctx.d, "entries": triples}

    @staticmethod
    def decode(data: dict) -> "ExactMatrix":
        from .scalars import cyc_ctx
        ctx = cyc_ctx(data["d"], data["n"])
        m, n = data["shape"]
        out = ExactMatrix.zero(ctx, m, n)
        for i, j, s in data["entries"]:
            out.rows[i][j] = CycScalar.decode(s)
        return out


def _certify_nonsingular(M: ExactMatrix) -> bool:
    """Exact nonsingularity of a square matrix.

    Integer matrices get fraction-free Bareiss; anything else falls back to
    field elimination, which is only attempted at moderate size (larger
    non-integer pivot submatrices rely on the multi-prime agreement alone).
    """
    ints = M._integer_rows()
    if ints is not None:
        return _bareiss_det(ints) != 0
    if M.nrows <= 64:
        return exact_rank(M) == M.nrows
    return True


def _bareiss_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    A = [r[:] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if A[i][k]), None)
            if pr is None:
                return 0
            A[k], A[pr] = A[pr], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def exact_rank(M: ExactMatrix) -> int:
    """Gaussian elimination with exact field inverses; small matrices only."""
    rows = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(r + 1, nr):
            f = rows[i][c]
            if not f.is_zero():
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == nr:
            break
    return r


def exact_kernel(M: ExactMatrix) -> list[list[CycScalar]]:
    """Right kernel basis over the scalar field; small matrices only."""
    ctx = M.ctx
    rows = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    z, o = CycScalar.zero(ctx), CycScalar.one(ctx)
    free = [c for c in range(nc) if c not in pivots]
    out = []
    for c in free:
        v = [z] * nc
        v[c] = o
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][c]
        out.append(v)
    return out


def charpoly_flv(M: ExactMatrix) -> list[CycScalar]:
    """det(xI - M) by Faddeev-LeVerrier; coefficients low-to-high, monic."""
    assert M.nrows == M.ncols
    n = M.nrows
    ctx = M.ctx
    one = CycScalar.one(ctx)
    if n == 0:
        return [one]
    out = [None] * (n + 1)
    out[n] = one
    Mk = ExactMatrix.identity(ctx, n)
    ck = one
    for k in range(1, n + 1):
        Mk = M * Mk
        tr = CycScalar.zero(ctx)
        for i in range(n):
            tr = tr + Mk.rows[i][i]
        ck = tr.scale(Fraction(-1, k))
        out[n - k] = ck
        if k < n:
            for i in range(n):
                Mk.rows[i][i] = Mk.rows[i][i] + ck
    return out


def charpoly_crt(ctx: CycCtx, dim: int,
                 modcharpoly, coeff_bound: int,
                 start_prime: int = 1 << 21) -> list[CycScalar]:
    """Exact characteristic polynomial from modular images.

    modcharpoly(emb) must return the charpoly mod emb.p (low-to-high ints)
    of the operator under that embedding.  For each split prime all
    2*phi(n) embeddings are used to solve for the power-basis integer
    coordinates of each coefficient; coordinates are CRT-combined across
    primes with a balanced lift until they clear coeff_bound and stabilize.
    """
    phi = ctx.phi
    nun = 2 * phi
    residues: list[list[int]] = []  # per prime: flattened coords of all coeffs
    moduli: list[int] = []
    start = start_prime
    prev_lift = None
    while True:
        embs = find_embeddings(ctx, 1, start=start, all_conjugates=True)
        p = embs[0].p
        embs = [e for e in embs if e.p == p]
        assert len(embs) == nun, "prime does not split completely"
        start = p
        values = [modcharpoly(e) for e in embs]
        # solve: coeff = sum_i (a_i + b_i*w) z^i at each embedding
        A = [[0] * nun for _ in range(nun)]
        for r, e in enumerate(embs):
            zp = 1
            for i in range(phi):
                A[r][2 * i] = zp
                A[r][2 * i + 1] = zp * e.w % p
                zp = zp * e.z % p
        coords = []
        for ci in range(dim + 1):
            rhs = [v[ci] if ci < len(v) else 0 for v in values]
            coords.extend(_solve_int_mod(A, rhs, p))
        residues.append(coords)
        moduli.append(p)
        # combined CRT + balanced lift
        Mtot = 1
        for q in moduli:
            Mtot *= q
        lift = []
        for idx in range(len(coords)):
            x, mcur = 0, 1
            for res, q in zip(residues, moduli):
                # x' = x mod mcur, res[idx] mod q
                t = (res[idx] - x) * pow(mcur, -1, q) % q
                x += mcur * t
                mcur *= q
            if x > Mtot // 2:
                x -= Mtot
            lift.append(x)
        if lift == prev_lift and all(abs(x) < coeff_bound for x in lift) \
                and Mtot > 4 * coeff_bound:
            break
        prev_lift = lift
    out = []
    for ci in range(dim + 1):
        cs = []
        for i in range(phi):
            cs.append((Fraction(lift[ci * nun + 2 * i]),
                       Fraction(lift[ci * nun + 2 * i + 1])))
        out.append(CycScalar(ctx, cs))
    return out


def _solve_int_mod(A, b, p):
    """Solve the square system A x = b mod p with exact integers."""
    n = len(b)
    M = [row[:] + [bb % p] for row, bb in zip(A, b)]
    for c in range(n):
        pr = next(i for i in range(c, n) if M[i][c] % p)
        M[c], M[pr] = M[pr], M[c]
        inv = pow(M[c][c], -1, p)
        M[c] = [x * inv % p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]
