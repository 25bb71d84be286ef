"""H^2 of SL_2(O_F) with induced coefficients, via the equivariant spectral
sequence on the fundamental cellular domain.

dim H^2 = dim E_1^{2,0} - rank d_1^{1,0}, where E_1^{2,0} is two copies of
M^{<-Id>} (the two 2-cells both have stabilizer {+-Id}) and the domain of
d_1 is the direct sum of the six edge-fixed modules M^{Gamma_i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import modmat
from .cells import cell_domain, mat_inv
from .fields import Ideal
from .induced import InducedModule
from .residues import DirichletChar
from .scalars import CycScalar, find_embeddings

Triple = tuple[int, int, CycScalar]


@dataclass
class CohSpace:
    level: Ideal
    eps: DirichletChar
    k: int
    module: InducedModule | None
    dim_e: int                      # dim E_1^{2,0}
    rank_d1: int
    dim_h2: int
    d1_triples: list[Triple] = field(default_factory=list, repr=False)
    d1_shape: tuple[int, int] = (0, 0)
    # lazily filled per-embedding echelon data of im(d1), keyed by prime
    _echelons: dict = field(default_factory=dict, repr=False)

    def is_zero(self) -> bool:
        return self.dim_e == 0


def _vec_entries(vec: dict, wdim: int, base: int):
    for coset, vals in vec.items():
        for comp, v in enumerate(vals):
            if not v.is_zero():
                yield base + coset * wdim + comp, v


def d1_triples(module: InducedModule) -> tuple[list[Triple], tuple[int, int]]:
    """Sparse matrix of d_1: direct sum of edge-fixed modules -> M + M.

    Columns run over the concatenated fixed bases in edge order; the row
    space is two copies of M stacked (rows [0, dim) and [dim, 2 dim)).
    """
    dom = cell_domain(module.d)
    g_inv_action = module.act(mat_inv(dom.G))
    dim = module.dim
    wdim = module.wdim
    triples: list[Triple] = []
    col = 0
    # d1: (m1..m6) -> (-m1 + m2 - m4 + m5, -m2*G^{-1} - m3 + m4 + m6)
    terms = {
        1: [(0, -1), (dim, None)],   # m1: -m1 in first slot
        2: [(0, +1), (dim, "G")],    # m2: +m2 first, -m2*G^{-1} second
        3: [(dim, -1)],
        4: [(0, -1), (dim, +1)],
        5: [(0, +1)],
        6: [(dim, +1)],
    }
    for i, (gen, order) in enumerate(zip(dom.edge_gens, dom.edge_orders),
                                     start=1):
        basis = module.fixed_subspace(gen, order)
        for vec in basis:
            for base, what in terms[i]:
                if what is None:
                    continue
                if what == "G":
                    img = module.apply(g_inv_action, vec)
                    for r, v in _vec_entries(img, wdim, base):
                        triples.append((r, col, -v))
                else:
                    for r, v in _vec_entries(vec, wdim, base):
                        triples.append((r, col,
                                        v if what == 1 else -v))
            col += 1
    return triples, (2 * dim, col)


def triples_to_modmat(triples, shape, emb) -> np.ndarray:
    A = np.zeros(shape)
    p = emb.p
    for r, c, v in triples:
        A[r, c] = (A[r, c] + v.embed_mod(emb)) % p
    return A


# above this many rows the dense matrix plus its echelon would not fit in
# memory; stream column batches against a single RREF buffer instead
STREAM_ROWS = 12000


def _rank_one_emb(triples, shape, emb, bycol=None) -> int:
    if shape[0] < STREAM_ROWS:
        return modmat.rank_mod(triples_to_modmat(triples, shape, emb), emb.p)
    nrows, ncols = shape
    p = emb.p
    if bycol is None:
        bycol = _triples_by_col(triples, ncols)
    emb_cache: dict = {}

    def batches(size=1024):
        for s in range(0, ncols, size):
            e = min(s + size, ncols)
            V = np.zeros((e - s, nrows))
            for j in range(s, e):
                for r, v in bycol[j]:
                    m = emb_cache.get(v)
                    if m is None:
                        m = emb_cache[v] = v.embed_mod(emb)
                    V[j - s, r] = (V[j - s, r] + m) % p
            yield V

    r, _ = modmat.rank_streaming(batches(), nrows, p)
    return r


def _triples_by_col(triples, ncols):
    bycol: list[list] = [[] for _ in range(ncols)]
    for r, c, v in triples:
        bycol[c].append((r, v))
    return bycol


def rank_of_triples(triples, shape, ctx, primes: int = 3) -> int:
    """Multi-modular rank with agreement across primes.

    Reductions modulo split primes never raise the rank, so the maximum of
    agreeing values is reported; disagreement pulls in more primes.
    """
    if shape[0] == 0 or shape[1] == 0 or not triples:
        return 0
    bycol = _triples_by_col(triples, shape[1]) if shape[0] >= STREAM_ROWS \
        else None
    embs = find_embeddings(ctx, primes)
    ranks = [_rank_one_emb(triples, shape, e, bycol) for e in embs]
    best = max(ranks)
    agree = ranks.count(best)
    extra = 0
    while agree < 2 and extra < 5:
        embs2 = find_embeddings(ctx, 1, start=embs[-1].p + extra + 1)
        r = _rank_one_emb(triples, shape, embs2[0], bycol)
        best = max(best, r)
        agree = (1 if r == best else 0) + ranks.count(best)
        extra += 1
    return best


def h2_space(level: Ideal, eps: DirichletChar, k: int = 0,
             rank_primes: int = 3,
             subgroup: frozenset | None = None) -> CohSpace:
    """The cohomology space for Gamma_0(level) with nebentypus eps.

    eps may be given modulo any divisor of the level; it is lifted.  A
    parity-violating character returns the zero space immediately.

    With ``subgroup`` set (trivial eps, k = 0 only), the coefficient module
    is induced from the unit-refined coset space instead; -Id then permutes
    cosets, so E_1^{2,0} is two copies of the -Id-fixed part.
    """
    if eps.modulus != level:
        eps = eps.lift_to(level)
    if subgroup is None and eps.parity() != 1:
        return CohSpace(level=level, eps=eps, k=k, module=None,
                        dim_e=0, rank_d1=0, dim_h2=0)
    module = InducedModule(level, eps, k, subgroup=subgroup)
    triples, shape = d1_triples(module)
    rank = rank_of_triples(triples, shape, module.ctx, primes=rank_primes)
    if subgroup is None:
        dim_e = 2 * module.dim
    else:
        minus_id = cell_domain(module.d).edge_gens[1]
        dim_e = 2 * len(module.fixed_subspace(minus_id, 2))
    return CohSpace(level=level, eps=eps, k=k, module=module,
                    dim_e=dim_e, rank_d1=rank, dim_h2=dim_e - rank,
                    d1_triples=triples, d1_shape=shape)
