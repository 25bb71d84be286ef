"""Polynomial coefficient modules V_{k,k} = Sym^k tensor conj-Sym^k.

Basis: monomials X^i Y^(k-i) (x) Xb^j Yb^(k-j), indexed by (i, j) with
0 <= i, j <= k, flattened as i*(k+1)+j.  A matrix gamma acts on the first
factor through the row substitution (X, Y) -> (X, Y)*gamma and on the second
factor through the complex conjugate of gamma, making the action a left
group homomorphism (so it can serve as the fiber action of induced modules).
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .cells import Mat2
from .fields import IQInt
from .scalars import CycCtx, CycScalar


def weight_dim(k: int) -> int:
    return (k + 1) ** 2


def _sym_columns(ctx: CycCtx, k: int, a, b, c, d) -> list[list[CycScalar]]:
    """Column j = coefficients of (aX+cY)^j (bX+dY)^(k-j) on X^i Y^(k-i)."""
    zero = CycScalar.zero(ctx)
    cols = []
    for j in range(k + 1):
        # (aX+cY)^j = sum_s C(j,s) a^s c^(j-s) X^s Y^(j-s)
        # (bX+dY)^(k-j) = sum_t C(k-j,t) b^t d^(k-j-t) X^t Y^(k-j-t)
        col = [zero] * (k + 1)
        for s in range(j + 1):
            ca = _pow(ctx, a, s) * _pow(ctx, c, j - s)
            ca = ca.scale(comb(j, s))
            for t in range(k - j + 1):
                cb = _pow(ctx, b, t) * _pow(ctx, d, k - j - t)
                cb = cb.scale(comb(k - j, t))
                i = s + t  # X-degree of the product
                col[i] = col[i] + ca * cb
        cols.append(col)
    return cols


def _pow(ctx: CycCtx, x: CycScalar, n: int) -> CycScalar:
    out = CycScalar.one(ctx)
    for _ in range(n):
        out = out * x
    return out


def weight_action(ctx: CycCtx, k: int, gamma: Mat2) -> list[list[CycScalar]]:
    """Matrix of gamma on V_{k,k}; identity-sized [[1]] when k = 0."""
    key = (id(ctx), k, tuple(m.key() for m in gamma))
    cached = _cache.get(key)
    if cached is not None:
        return cached
    a, b, c, d = (CycScalar.from_iq(ctx, m) for m in gamma)
    ab, bb, cb, db = (CycScalar.from_iq(ctx, m.conj()) for m in gamma)
    first = _sym_columns(ctx, k, a, b, c, d)
    second = _sym_columns(ctx, k, ab, bb, cb, db)
    w = weight_dim(k)
    out = [[None] * w for _ in range(w)]
    for i1 in range(k + 1):
        for j1 in range(k + 1):
            r = i1 * (k + 1) + j1
            for i2 in range(k + 1):
                for j2 in range(k + 1):
                    out[r][i2 * (k + 1) + j2] = first[i2][i1] * second[j2][j1]
    _cache[key] = out
    return out


_cache: dict = {}


def mat_apply(mat: list[list[CycScalar]], vec: list[CycScalar]):
    out = []
    for row in mat:
        s = None
        for a, v in zip(row, vec):
            term = a * v
            s = term if s is None else s + term
        out.append(s)
    return out


def mat_compose(m1, m2):
    n = len(m1)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = None
            for t in range(n):
                term = m1[i][t] * m2[t][j]
                s = term if s is None else s + term
            out[i][j] = s
    return out
