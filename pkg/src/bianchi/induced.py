"""Induced coefficient modules for congruence subgroups of SL_2(O_F).

M = Ind_{Gamma_0(L)}^{SL_2(O)} (V_{k,k} tensor eps), realized as W-valued
functions on the coset space Gamma_0(L)\\SL_2(O) = P^1(O/L).  A group
element g acts by block permutation: coset x goes to y with the bottom row
of x carried by g^{-1}, and the fiber picks up eps(u) times the weight
action of the Gamma_0(L)-cocycle, where u is the unit relating the carried
row to the canonical representative of y.

For trivial weight the cocycle needs no matrix lifts at all: the unit u is
computed from the rows alone.  Nontrivial weight triggers explicit
SL_2(O)-lifts of the coset representatives.

The optional subgroup H refines the cosets to Gamma_H(L)\\SL_2(O) =
{unimodular rows}/H with trivial fiber character (used by the Moebius
cross-checks); H = full unit group with a character is the standard setup.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cells import Mat2, mat_inv
from .fields import IQInt, Ideal, egcd, gcd
from .residues import DirichletChar, Elt, proj_line, unit_group
from .scalars import CycCtx, CycScalar, cyc_ctx
from .weights import mat_apply, weight_action, weight_dim


@dataclass
class ActionData:
    """One group element acting on the induced module."""
    target: list[int]          # coset x -> coset y
    expo: list[int]            # exponent of zeta_n (the eps(u) cocycle value)
    blocks: list | None        # k > 0: per-coset weight matrices, else None


class InducedModule:
    def __init__(self, level: Ideal, eps: DirichletChar, k: int = 0,
                 subgroup: frozenset | None = None):
        assert eps.modulus == level, "character must be given modulo the level"
        self.level = level
        self.d = level.d
        self.eps = eps
        self.k = k
        self.n = eps.order
        self.ctx = cyc_ctx(self.d, self.n)
        self.P = proj_line(level)
        self.ring = unit_group(level).ring
        if subgroup is not None:
            assert k == 0 and eps.order == 1, \
                "subgroup refinement implemented for trivial coefficients only"
            self._classes = _unit_classes(level, subgroup)
        else:
            self._classes = None
        self.n_proj = len(self.P)
        self.n_cosets = self.n_proj * (len(self._classes[1])
                                       if self._classes else 1)
        self.wdim = weight_dim(k)
        self.dim = self.n_cosets * self.wdim
        self._reps = [self.P.lift(i) for i in range(self.n_proj)]
        self._mats: list[Mat2] | None = None
        self._action_cache: dict = {}

    # -- coset representative matrices (only needed for k > 0) -------------

    def rep_matrix(self, x: int) -> Mat2:
        if self._mats is None:
            self._mats = [self._build_rep(i) for i in range(self.n_proj)]
        return self._mats[x]

    def _build_rep(self, x: int) -> Mat2:
        c, d = self._reps[x]
        c0, d0 = _coprime_lift(c, d, self.level)
        s, t, g = egcd(c0, d0)
        assert g.is_unit()
        u = g.conj()  # g^{-1}
        a, b = t * u, -(s * u)
        assert (a * d0 - b * c0).is_one()
        return (a, b, c0, d0)

    # -- the action ---------------------------------------------------------

    def act(self, g: Mat2) -> ActionData:
        key = tuple(m.key() for m in g)
        cached = self._action_cache.get(key)
        if cached is not None:
            return cached
        out = self._compute_action(g)
        self._action_cache[key] = out
        return out

    def _compute_action(self, g: Mat2) -> ActionData:
        gi = mat_inv(g)
        a, b, c, d = gi
        P = self.P
        n = self.n
        target: list[int] = []
        expo: list[int] = []
        blocks = [] if self.k > 0 else None
        unit_ratios: list[Elt] = []
        ys: list[int] = []
        for x in range(self.n_proj):
            rc, rd = self._reps[x]
            nc = rc * a + rd * c
            nd = rc * b + rd * d
            y = P.normalize(nc, nd)
            assert y is not None, "group action broke unimodularity"
            u = P.unit_ratio(nc, nd, y)
            ys.append(y)
            unit_ratios.append(u)
        if self._classes is None:
            for x in range(self.n_proj):
                target.append(ys[x])
                expo.append(self.eps.value_exp(unit_ratios[x], n))
                if self.k > 0:
                    gamma0 = self._cocycle_matrix(x, gi, ys[x])
                    blocks.append(weight_action(self.ctx, self.k, gamma0))
        else:
            class_index, reps = self._classes
            ncls = len(reps)
            ring = self.ring
            for x in range(self.n_proj):
                for t in range(ncls):
                    # the pair reps[t]*row(x) is carried to (reps[t]*u)*row(y)
                    tu = ring.mul(reps[t], unit_ratios[x])
                    target.append(ys[x] * ncls + class_index[tu])
                    expo.append(0)
        return ActionData(target=target, expo=expo, blocks=blocks)

    def _cocycle_matrix(self, x: int, gi: Mat2, y: int) -> Mat2:
        from .cells import mat_mul
        gamma0 = mat_mul(mat_mul(self.rep_matrix(x), gi),
                         mat_inv(self.rep_matrix(y)))
        # bottom-left entry lies in the level ideal
        assert gamma0[2].is_zero() or self.level.divides(Ideal(gamma0[2]))
        return gamma0

    # -- vectors -------------------------------------------------------------

    def apply(self, action: ActionData, vec: dict) -> dict:
        """Right action on a sparse vector {coset: [w scalars]}."""
        inv = self._inverse_targets(action)
        out = {}
        for ycoset, val in vec.items():
            for x in inv.get(ycoset, ()):
                e = action.expo[x]
                scal = CycScalar.zeta(self.ctx, e)
                if action.blocks is None:
                    out[x] = [scal * val[0]]
                else:
                    w = mat_apply(action.blocks[x], val)
                    out[x] = [scal * v for v in w]
        return out

    def _inverse_targets(self, action: ActionData) -> dict:
        key = id(action)
        inv = getattr(action, "_inv", None)
        if inv is None:
            inv = {}
            for x, y in enumerate(action.target):
                inv.setdefault(y, []).append(x)
            action.__dict__["_inv"] = inv
        return inv

    # -- fixed subspaces -------------------------------------------------------

    def fixed_subspace(self, g: Mat2, order: int) -> list[dict]:
        """Basis of M^<g> as sparse vectors {coset: [w scalars]}.

        Orbit-by-orbit: an orbit of the coset permutation contributes the
        kernel of (cocycle product around the orbit) - identity.
        """
        from .matrices import ExactMatrix, exact_kernel
        act = self.act(g)
        n = self.n
        seen = [False] * self.n_cosets
        out: list[dict] = []
        one = CycScalar.one(self.ctx)
        for x0 in range(self.n_cosets):
            if seen[x0]:
                continue
            orbit = [x0]
            seen[x0] = True
            x = act.target[x0]
            while x != x0:
                seen[x] = True
                orbit.append(x)
                x = act.target[x]
            # f_{x_j} = block_{x_j} f_{x_{j+1}}, indices mod orbit length
            if act.blocks is None:
                total = sum(act.expo[x] for x in orbit) % n
                if total != 0:
                    continue
                vec = {}
                acc = 0
                val = one
                for j, x in enumerate(orbit):
                    vec[x] = [CycScalar.zeta(self.ctx, -acc)]
                    acc = (acc + act.expo[x]) % n
                out.append(vec)
            else:
                prod = None
                for x in orbit:
                    m = _scaled_block(self, act, x)
                    prod = m if prod is None else _mat_mul_blocks(prod, m)
                w = self.wdim
                rows = [[prod[i][j] - (one if i == j else CycScalar.zero(self.ctx))
                         for j in range(w)] for i in range(w)]
                kern = exact_kernel(ExactMatrix(self.ctx, rows))
                for kv in kern:
                    vec = {orbit[0]: list(kv)}
                    cur = list(kv)
                    # f_{x_{j+1}} determined from f_{x_j}: propagate backwards
                    for j in range(len(orbit) - 1, 0, -1):
                        # f_{x_j} = block_{x_j} ... block_{x_{m-1}} f_{x_0}
                        m = None
                        for xx in orbit[j:]:
                            bm = _scaled_block(self, act, xx)
                            m = bm if m is None else _mat_mul_blocks(m, bm)
                        vec[orbit[j]] = mat_apply(m, list(kv))
                    out.append(vec)
        return out

    def parity_scalar(self) -> int:
        """eps(-1): the scalar by which -Id acts."""
        return self.eps.parity() if self._classes is None else 1


def _scaled_block(mod: InducedModule, act: ActionData, x: int):
    scal = CycScalar.zeta(mod.ctx, act.expo[x])
    return [[scal * e for e in row] for row in act.blocks[x]]


def _mat_mul_blocks(m1, m2):
    from .weights import mat_compose
    return mat_compose(m1, m2)


def _coprime_lift(c: IQInt, d: IQInt, level: Ideal) -> tuple[IQInt, IQInt]:
    """(c', d') = (c, d) mod level with gcd(c', d') a unit."""
    if gcd(c, d).is_unit():
        return c, d
    L = level.gen
    dd = level.d
    for bound in range(1, 8):
        for za in range(-bound, bound + 1):
            for zb in range(-bound, bound + 1):
                c2 = c + L * IQInt(dd, za, zb)
                if gcd(c2, d).is_unit():
                    return c2, d
    raise AssertionError(f"no coprime lift for ({c}, {d}) mod {level}")


def _unit_classes(level: Ideal, subgroup: frozenset):
    """Partition of (O/level)^x into cosets of the subgroup.

    Returns (class_index, reps): class_index maps each unit Elt to its coset
    id; reps[t] is a representative Elt of coset t.
    """
    G = unit_group(level)
    ring = G.ring
    for h in subgroup:
        assert G.contains(h)
    class_index: dict[Elt, int] = {}
    reps: list[Elt] = []
    for x in sorted(G.elements()):
        if x in class_index:
            continue
        t = len(reps)
        reps.append(x)
        for h in subgroup:
            class_index[ring.mul(x, h)] = t
    return class_index, reps


def _class_rep(classes, t: int) -> Elt:
    return classes[1][t]
