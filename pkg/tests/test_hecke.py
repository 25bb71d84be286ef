"""Hecke operators on H^2: Heilbronn sets, eigensystems, and ordinarity.

The rational newform at the norm-51 level is the central oracle: its
eigenvalues must equal the point-count traces of the elliptic curve

    y^2 + theta*x*y + y = x^3 + (theta - 1)*x^2 - theta*x

of conductor (7 + theta), computed here from scratch over each residue
field.  That match pins the Heilbronn transport, the block orientation
on M + M, and the nebentypus sign all at once.
"""

import pytest
from hypothesis import given, settings, strategies as st

from bianchi import hecke
from bianchi.cohomology import h2_space
from bianchi.dimensions import eisenstein_dim
from bianchi.fields import IQInt, Ideal
from bianchi.residues import characters, residue_ring, trivial_char
from bianchi.scalars import CycScalar

D = -2


def iq(a, b=0):
    return IQInt(D, a, b)


THETA = iq(0, 1)
PI = iq(1, 1)          # 1 + theta, one prime above 3
PIB = iq(1, -1)        # 1 - theta, the other prime above 3
N51 = Ideal(iq(7, 1))  # (3 - 2 theta)(1 + theta), norm 51

# Split primes of small norm, coprime to N51, in norm order:
# norms 2, 3, 11, 11, 17, 19, 19.
GOOD_PRIMES = (THETA, PIB, iq(3, 1), iq(3, -1), iq(3, 2), iq(1, 3), iq(1, -3))

# hecke.default_tower(D) is cached, so every test shares one reduction prime
TOWER = hecke.default_tower(D)


# ---------------------------------------------------------------------------
# elliptic curve oracle: brute-force point counts over residue fields


def _curve_trace(lam):
    """a(lam) = N(lam) + 1 - #E(O/lam) for the conductor-(7+theta) curve."""
    ring = residue_ring(Ideal(lam))
    lifts = [ring.lift(e) for e in ring.elements()]
    one = iq(1)
    count = 1  # point at infinity
    for x in lifts:
        for y in lifts:
            expr = (y * y + THETA * x * y + y
                    - x * x * x - (THETA - one) * x * x + THETA * x)
            if ring.reduce(expr) == ring.zero:
                count += 1
    return Ideal(lam).norm() + 1 - count


# ---------------------------------------------------------------------------
# Heilbronn sets


SMALL_PRIMES = [THETA, PI, PIB, iq(3, 1), iq(3, -1), iq(3, 2)]


@given(st.sampled_from(SMALL_PRIMES))
@settings(max_examples=len(SMALL_PRIMES), deadline=None)
def test_heilbronn_determinants_and_skeleton(lam):
    hset = hecke.heilbronn_set(lam)
    norm = Ideal(lam).norm()
    assert len(hset.skeleton) == norm + 1
    for m in hset.mats + hset.skeleton:
        assert m[0] * m[3] - m[1] * m[2] == lam
    # the skeleton is contained in the full family up to the chain closure
    assert len(hset.mats) >= norm + 1


def test_heilbronn_rejects_composite():
    with pytest.raises(ValueError):
        hecke.heilbronn_set(iq(3))


# ---------------------------------------------------------------------------
# anchor: the one-dimensional space at the split prime above 3


def test_split_prime_space_t_theta_is_three():
    level = Ideal(PI)
    space = h2_space(level, trivial_char(level))
    op = hecke.hecke_operator(space, hecke.heilbronn_set(THETA))
    poly = op.charpoly()
    ctx = poly[0].ctx
    assert poly == [CycScalar.from_rational(ctx, -3), CycScalar.one(ctx)]
    assert hecke.j_split(space) == (1, 0)


# ---------------------------------------------------------------------------
# the norm-51 level: rational newform vs. elliptic curve


@pytest.fixture(scope="module")
def n51_data():
    return hecke.eigen_data(N51, trivial_char(N51), GOOD_PRIMES,
                            u_primes=(PI,))


def test_n51_eigensystem_counts(n51_data):
    assert n51_data.count("eisenstein") == 3
    assert n51_data.count("old") == 0
    assert n51_data.count("new") == 1


def test_n51_newform_matches_elliptic_curve(n51_data):
    (new,) = n51_data.new_systems()
    assert new.rational is not None, "newform should be rational"
    assert new.j_sign == 1
    for lam, a in zip(GOOD_PRIMES, new.rational):
        assert a == _curve_trace(lam), f"trace mismatch at {lam}"


def test_n51_steinberg_u_eigenvalue(n51_data):
    (new,) = n51_data.new_systems()
    assert new.u_values == (-1,)


def test_n51_newform_is_ordinary(n51_data):
    (new,) = n51_data.new_systems()
    verdict = hecke.ordinarity(N51, trivial_char(N51), new, GOOD_PRIMES,
                               u_primes=(PI,))
    assert verdict.verdict == "ordinary"


def test_n51_charpoly_rational_roots():
    space = h2_space(N51, trivial_char(N51))
    op = hecke.hecke_operator(space, hecke.heilbronn_set(THETA))
    poly = op.charpoly()
    # Eisenstein eigenvalue N(theta) + 1 = 3 with multiplicity three,
    # cuspidal eigenvalue -2 simple
    assert hecke.rational_root_multiplicity(poly, 3) == 3
    assert hecke.rational_root_multiplicity(poly, -2) == 1
    # only the Eisenstein roots break the |a| <= 2 sqrt(N) bound
    assert hecke.ramanujan_violators(poly, THETA) == \
        eisenstein_dim(N51, trivial_char(N51), 0)


def test_n51_operators_commute():
    space = h2_space(N51, trivial_char(N51))
    emb = TOWER.embedding(space.module.ctx.n)
    mats = [hecke.hecke_operator(space, hecke.heilbronn_set(lam))
            .quotient_matrix(emb) for lam in (THETA, PIB, iq(3, 1))]
    mats.append(hecke.j_operator(space).quotient_matrix(emb))
    p = emb.p
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            lhs = (mats[i] @ mats[j]) % p
            rhs = (mats[j] @ mats[i]) % p
            assert (lhs == rhs).all()


# ---------------------------------------------------------------------------
# congruence elimination mod 3 on the integral quotient


N51_TARGETS_MOD3 = {THETA: 1, PIB: 1, iq(3, 1): 1, iq(3, -1): 2,
                    iq(3, 2): 0, iq(1, 3): 2, iq(1, -3): 0}


def test_congruence_survives_at_own_level():
    space = h2_space(N51, trivial_char(N51))
    witnesses = hecke.congruence_eliminate(space, N51_TARGETS_MOD3)
    assert len(witnesses) == 2      # one per prime above 3
    assert all(w.possible for w in witnesses)
    assert all(w.kernel_dims[-1] >= 1 for w in witnesses)


def test_congruence_eliminates_bogus_targets():
    space = h2_space(N51, trivial_char(N51))
    bogus = dict(N51_TARGETS_MOD3)
    bogus[THETA] = 2                # newform has a_theta = -2 = 1 mod 3
    witnesses = hecke.congruence_eliminate(space, bogus)
    assert not any(w.possible for w in witnesses)


# ---------------------------------------------------------------------------
# embedding tower coherence


def test_tower_zeta_coherence():
    p = TOWER.p
    for m in (2, 3, 6, 9, 16):
        z = TOWER.zeta(m)
        assert pow(z, m, p) == 1
        assert all(pow(z, i, p) != 1 for i in range(1, m))
    assert pow(TOWER.zeta(6), 2, p) == TOWER.zeta(3)
    assert pow(TOWER.zeta(6), 3, p) == TOWER.zeta(2) == p - 1


def test_small_cyclotomic_lift_roundtrip():
    p, z3 = TOWER.p, TOWER.zeta(3)
    for x in (-7, 0, 5):
        for y in (-3, 0, 4):
            val = (x + y * z3) % p
            assert hecke.small_cyclotomic_lift(val, p, z3, 10) == (x, y)
