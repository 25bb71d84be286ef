"""Dense linear algebra over GF(p) for word-size p, built on numpy.

Matrices are float64 arrays with entries in [0, p).  All products are kept
exact by bounding the inner accumulation: with blocks of 64 and p < 2^23,
partial sums stay below 2^53.  This makes elimination of several-thousand
row matrices take seconds instead of hours.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 1 << 23
_BLOCK = 64


def as_modmat(rows, p: int) -> np.ndarray:
    A = np.array(rows, dtype=np.float64)
    return np.mod(A, p)


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """A @ B mod p with exact float64 accumulation."""
    assert p < MAX_PRIME
    m, k = A.shape
    k2, n = B.shape
    assert k == k2
    C = np.zeros((m, n))
    for s in range(0, k, _BLOCK):
        e = min(s + _BLOCK, k)
        C += A[:, s:e] @ B[s:e, :]
        np.mod(C, p, out=C)
    return C


def echelon_mod(A: np.ndarray, p: int, block: int = _BLOCK):
    """Row echelon form mod p with normalized pivots.

    Returns (rank, pivots, E) where E is the rank x ncols echelon matrix:
    E[i] has a 1 in column pivots[i] and zeros in earlier columns and in
    all other pivot columns of smaller index rows... (leading-zero echelon,
    not full RREF; enough for canonical reduction since later rows vanish
    on earlier pivot columns).

    Blocked right-looking elimination: panels of `block` columns are
    factored with rank-1 updates, then the trailing columns get one exact
    matmul update per panel.
    """
    assert p < MAX_PRIME
    A = np.mod(np.array(A, dtype=np.float64), p)
    m, n = A.shape
    r = 0
    pivots: list[int] = []
    cb = 0
    while cb < n and r < m:
        ce = min(cb + block, n)
        r0 = r
        L = np.zeros((m - r0, ce - cb))
        invs: list[int] = []
        panel_cols: list[int] = []
        for c in range(cb, ce):
            col = A[r:m, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            pr = r + int(nz[0])
            if pr != r:
                A[[r, pr], cb:ce] = A[[pr, r], cb:ce]
                if ce < n:
                    A[[r, pr], ce:] = A[[pr, r], ce:]
                L[[r - r0, pr - r0], :] = L[[pr - r0, r - r0], :]
            inv = pow(int(A[r, c]), -1, p)
            A[r, cb:ce] = np.mod(A[r, cb:ce] * inv, p)
            f = A[r + 1:m, c].copy()
            if f.any():
                A[r + 1:m, cb:ce] = np.mod(
                    A[r + 1:m, cb:ce] - np.outer(f, A[r, cb:ce]), p)
            k = len(panel_cols)
            L[r + 1 - r0:, k] = f
            invs.append(inv)
            panel_cols.append(c)
            pivots.append(c)
            r += 1
        kp = len(panel_cols)
        if ce < n and kp:
            # forward-substitute the pivot rows' trailing parts, then one
            # exact matmul update for everything below
            U = A[r0:r0 + kp, ce:]
            for i in range(kp):
                if i:
                    U[i] = np.mod(U[i] - L[i, :i] @ U[:i], p)
                U[i] = np.mod(U[i] * invs[i], p)
            if r0 + kp < m:
                below = A[r0 + kp:m, ce:]
                below -= matmul_mod(L[kp:, :kp], U, p)
                np.mod(below, p, out=below)
        cb = ce
    return r, pivots, A[:r, :]


def rank_streaming(batches, width: int, p: int,
                   chunk: int = 2048) -> tuple[int, list[int]]:
    """Rank of a matrix supplied as an iterable of row batches.

    Keeps a single (rank x width) reduced-row-echelon buffer so peak memory
    is one width x width array instead of the full matrix plus its echelon.
    Each batch is reduced against the accumulated pivots with one exact
    matmul, echelonized on its own, and merged back.
    """
    assert p < MAX_PRIME
    E = np.zeros((width, width))
    pivots: list[int] = []
    r = 0
    for V in batches:
        V = np.mod(np.array(V, dtype=np.float64), p)
        if r:
            piv = np.array(pivots, dtype=np.intp)
            C = V[:, piv]
            if C.any():
                V -= matmul_mod(C, E[:r], p)
                np.mod(V, p, out=V)
        rb, pb, Eb = echelon_mod(V, p)
        if rb == 0:
            continue
        Eb = Eb.copy()
        # full RREF among the new rows
        for i in range(rb - 1, -1, -1):
            for j in range(i + 1, rb):
                f = Eb[i, pb[j]]
                if f:
                    Eb[i] = np.mod(Eb[i] - f * Eb[j], p)
        # clear the new pivot columns out of the old rows, chunked so the
        # temporaries stay small
        if r:
            pbi = np.array(pb, dtype=np.intp)
            for s in range(0, r, chunk):
                e = min(s + chunk, r)
                sub = E[s:e][:, pbi].copy()
                if sub.any():
                    E[s:e] -= matmul_mod(sub, Eb, p)
                    np.mod(E[s:e], p, out=E[s:e])
        E[r:r + rb] = Eb
        pivots.extend(pb)
        r += rb
        if r == width:
            break
    return r, pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    r, _, _ = echelon_mod(A, p)
    return r


def reduce_rows_mod(V: np.ndarray, pivots, E: np.ndarray, p: int) -> np.ndarray:
    """Canonical representatives of the rows of V modulo rowspace(E).

    E must be the echelon output of echelon_mod; the result vanishes on all
    pivot columns.
    """
    V = np.mod(np.array(V, dtype=np.float64), p)
    for i, c in enumerate(pivots):
        f = V[:, c].copy()
        if f.any():
            V -= np.outer(f, E[i])
            np.mod(V, p, out=V)
    return V


def dot_mod(a: np.ndarray, b: np.ndarray, p: int) -> int:
    total = 0
    for s in range(0, a.size, _BLOCK):
        total = (total + a[s:s + _BLOCK] @ b[s:s + _BLOCK]) % p
    return int(total)


def kernel_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, rows of the returned matrix."""
    m, n = A.shape
    r, pivots, E = echelon_mod(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return np.zeros((0, n))
    out = np.zeros((len(free), n))
    for idx, c in enumerate(free):
        v = out[idx]
        v[c] = 1
        # E[i, pivots[i]] = 1; solve E[i] . v = 0 for v[pivots[i]], last first
        for i in range(r - 1, -1, -1):
            rest = dot_mod(E[i], v, p)
            v[pivots[i]] = (-rest) % p
    return out


def solve_mod(A: np.ndarray, b: np.ndarray, p: int):
    """One solution x of A x = b mod p, or None."""
    m, n = A.shape
    aug = np.concatenate([np.array(A, dtype=np.float64),
                          np.array(b, dtype=np.float64).reshape(m, 1)], axis=1)
    r, pivots, E = echelon_mod(aug, p)
    if n in pivots:
        return None
    x = np.zeros(n)
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        rest = dot_mod(E[i, :n], x, p)
        x[c] = (E[i, n] - rest) % p
    return x


def charpoly_mod(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial mod p (coefficients low-to-high, monic).

    Hessenberg reduction then the standard recurrence; fine for the small
    quotient matrices this is used on.
    """
    A = np.mod(np.array(A, dtype=np.float64), p).astype(object)
    n = A.shape[0]
    H = [[int(A[i, j]) for j in range(n)] for i in range(n)]
    for c in range(n - 2):
        pr = next((i for i in range(c + 1, n) if H[i][c] % p), None)
        if pr is None:
            continue
        if pr != c + 1:
            H[pr], H[c + 1] = H[c + 1], H[pr]
            for i in range(n):
                H[i][pr], H[i][c + 1] = H[i][c + 1], H[i][pr]
        inv = pow(H[c + 1][c], -1, p)
        for i in range(c + 2, n):
            f = H[i][c] * inv % p
            if f:
                for j in range(n):
                    H[i][j] = (H[i][j] - f * H[c + 1][j]) % p
                for j in range(n):
                    H[j][c + 1] = (H[j][c + 1] + f * H[j][i]) % p
    # p_k(x) = charpoly of leading k x k Hessenberg block
    polys = [[1]]
    for k in range(1, n + 1):
        # p_k = (x - H[k-1][k-1]) p_{k-1} - sum_i (prod subdiag) H[i][k-1] p_i
        prev = polys[k - 1]
        cur = [0] + prev
        a = H[k - 1][k - 1]
        cur = [(ci - a * pi) % p for ci, pi in
               zip(cur, prev + [0])]
        beta = 1
        for i in range(k - 2, -1, -1):
            beta = beta * H[i + 1][i] % p
            coef = beta * H[i][k - 1] % p
            if coef:
                pi_poly = polys[i]
                cur = [(c0 - coef * (pi_poly[j] if j < len(pi_poly) else 0)) % p
                       for j, c0 in enumerate(cur)]
        polys.append(cur)
    return [c % p for c in polys[n]] if n else [1]
