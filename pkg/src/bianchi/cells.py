"""Fundamental cellular domain data for SL_2(O_F) acting on hyperbolic
3-space, per supported field.

Only d = -2 ships populated: 2 two-cells whose stabilizers are {+-Id} and 6
edges with finite cyclic stabilizers.  The first differential of the
equivariant spectral sequence on this domain is

    (m_1,...,m_6) -> (-m_1 + m_2 - m_4 + m_5,  -m_2*G^{-1} - m_3 + m_4 + m_6)

with the twisting matrix G below.  The incidence data (signs and the single
G twist) is taken as complete; if dimension validation ever fails, these
signs are the first thing to suspect, since no independent source for them
is wired in.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fields import IQInt

Mat2 = tuple[IQInt, IQInt, IQInt, IQInt]  # row-major (a, b, c, d)


@dataclass(frozen=True)
class CellDomain:
    d: int
    n_two_cells: int
    edge_gens: tuple[Mat2, ...]
    edge_orders: tuple[int, ...]
    G: Mat2


def mat2(d: int, entries) -> Mat2:
    out = []
    for e in entries:
        if isinstance(e, IQInt):
            out.append(e)
        elif isinstance(e, tuple):
            out.append(IQInt(d, *e))
        else:
            out.append(IQInt(d, e))
    return tuple(out)


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_inv(x: Mat2) -> Mat2:
    """Inverse of a determinant-one matrix."""
    a, b, c, d = x
    return (d, -b, -c, a)


def mat_det(x: Mat2) -> IQInt:
    a, b, c, d = x
    return a * d - b * c


def mat_neg(x: Mat2) -> Mat2:
    return tuple(-e for e in x)


def mat_order(x: Mat2, bound: int = 24) -> int:
    ident = (IQInt(x[0].d, 1), IQInt(x[0].d, 0),
             IQInt(x[0].d, 0), IQInt(x[0].d, 1))
    y = x
    for n in range(1, bound + 1):
        if y == ident:
            return n
        y = mat_mul(y, x)
    raise ValueError("order exceeds bound")


@lru_cache(maxsize=None)
def cell_domain(d: int) -> CellDomain:
    if d != -2:
        raise NotImplementedError(
            f"fundamental domain data not shipped for d={d}; "
            "plug in edge stabilizers and incidence to extend")
    # theta = omega = sqrt(-2); all generators have determinant 1
    gens = (
        mat2(d, [0, -1, 1, 0]),                       # order 4
        mat2(d, [-1, 0, 0, -1]),                      # order 2 (-Id)
        mat2(d, [(0, -1), 1, 1, (0, 1)]),             # order 4
        mat2(d, [-1, (0, -1), (0, -1), 1]),           # order 4
        mat2(d, [1, 1, -1, 0]),                       # order 6
        mat2(d, [(1, 1), (-1, 1), -1, (0, -1)]),      # order 6
    )
    orders = (4, 2, 4, 4, 6, 6)
    G = mat2(d, [-1, (0, 1), 0, -1])
    dom = CellDomain(d=d, n_two_cells=2, edge_gens=gens,
                     edge_orders=orders, G=G)
    _validate(dom)
    return dom


def _validate(dom: CellDomain) -> None:
    one = IQInt(dom.d, 1)
    neg_id = mat2(dom.d, [-1, 0, 0, -1])
    for g, n in zip(dom.edge_gens, dom.edge_orders):
        assert mat_det(g) == one, f"generator {g} not in SL_2"
        assert mat_order(g) == n, f"generator {g} has wrong order"
        # -Id lies in every edge stabilizer
        assert mat_order(neg_id) == 2
        half = g
        for _ in range(n // 2 - 1):
            half = mat_mul(half, g)
        assert half == neg_id, f"<{g}> does not contain -Id"
    assert mat_det(dom.G) == one
