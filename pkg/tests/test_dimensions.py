"""Dimension combinatorics: local factors, Eisenstein dimensions, cusp
counts against brute-force orbit enumeration, Moebius inversion across
characters, and the old/new ledger."""

import pytest
from hypothesis import given, settings, strategies as st

from bianchi.cohomology import h2_space
from bianchi.dimensions import (LedgerRow, NewformLedger, cusp_count,
                                cusp_count_brute, cusp_count_prefactor,
                                eisenstein_dim, eisenstein_forms,
                                full_unit_subgroup, kernel_subgroup,
                                lambda_factor, moebius_consistency,
                                pm_one_subgroup, subgroup_generated,
                                trivial_subgroup)
from bianchi.fields import IQInt, Ideal, euler_phi, ideals_norm_up_to
from bianchi.residues import characters, trivial_char

D = -2


def ideal(a, b=0):
    return Ideal(IQInt(D, a, b))


ONE = ideal(1)
PI = ideal(1, 1)
PIBAR = ideal(1, -1)
THREE = ideal(3)
NINE = ideal(9)
N7 = ideal(7, 1)          # (7+theta) = (1+theta)(3-2theta)
Q17 = ideal(3, -2)


# ---------------------------------------------------------------------------
# local factors


def test_lambda_examples():
    assert lambda_factor(1, 0, 3) == 2
    assert lambda_factor(2, 0, 3) == 4
    assert lambda_factor(2, 2, 3) == 2
    assert lambda_factor(3, 0, 3) == 6
    assert lambda_factor(3, 2, 3) == 2 * 3
    assert lambda_factor(4, 3, 3) == 2 * 3


def test_lambda_domain_errors():
    with pytest.raises(ValueError):
        lambda_factor(0, 0, 3)
    with pytest.raises(ValueError):
        lambda_factor(1, 2, 3)
    with pytest.raises(ValueError):
        lambda_factor(2, -1, 3)


@given(r=st.integers(1, 12), s=st.integers(0, 12), l=st.sampled_from(
    [2, 3, 9, 11, 17, 25]))
def test_lambda_positive_and_bounded(r, s, l):
    if r < max(s, 1):
        return
    val = lambda_factor(r, s, l)
    assert val >= 2
    # never exceeds the unit-count of the local ring
    assert val <= 2 * l ** r


# ---------------------------------------------------------------------------
# Eisenstein dimensions


def test_eisenstein_prime_levels():
    assert eisenstein_dim(PI, trivial_char(PI), 0) == 1
    assert eisenstein_dim(N7, trivial_char(N7), 0) == 3
    assert eisenstein_dim(Q17, trivial_char(Q17), 0) == 1


def test_eisenstein_conductor_nine():
    ch = next(c for c in characters(NINE)
              if c.parity() == 1 and c.conductor() == NINE)
    assert eisenstein_dim(NINE, ch, 0) == 4   # lambda(2,2,3)^2, no delta


def test_eisenstein_parity_violating_is_zero():
    odd = next(c for c in characters(THREE) if c.parity() == -1)
    assert eisenstein_dim(THREE, odd, 0) == 0


def test_eisenstein_nontrivial_weight_drops_delta():
    # same level/character, higher weight: no boundary relation
    assert eisenstein_dim(N7, trivial_char(N7), 2) == 4


def test_eisenstein_forms_agree_up_to_200():
    for N in ideals_norm_up_to(D, 200):
        if N.is_one():
            continue
        for f in N.divisors():
            prod, dsum = eisenstein_forms(N, f)
            assert prod == dsum, (N, f)


def test_eisenstein_galois_invariance():
    for level in (NINE, PI * PI * PIBAR):
        for ch in characters(level):
            base = eisenstein_dim(level, ch, 0)
            for k in range(1, ch.order + 1):
                if _coprime(k, ch.order):
                    assert eisenstein_dim(level, ch.galois_twist(k), 0) \
                        == base


def _coprime(a, b):
    while b:
        a, b = b, a % b
    return a == 1


# ---------------------------------------------------------------------------
# cusp counts


def test_cusp_count_examples():
    assert cusp_count(PI, full_unit_subgroup(PI)) == 2
    assert cusp_count(N7, full_unit_subgroup(N7)) == 4
    # phi((3)) = 4 (units +-1, +-theta since theta^2 = -2 = 1 mod 3), so
    # each of the four divisor terms contributes 4
    assert euler_phi(THREE) == 4
    assert cusp_count(THREE, trivial_subgroup(THREE)) == 16
    assert cusp_count_brute(THREE, trivial_subgroup(THREE)) == 16
    assert cusp_count(THREE, pm_one_subgroup(THREE)) == 8


def test_cusp_prefactor_overcounts():
    # the scaling-classes closed form ignores translations and exceeds the
    # cusp count at any level with more than one point per divisor class
    full = full_unit_subgroup(PI)
    assert cusp_count_prefactor(PI, full) == 4
    assert cusp_count_prefactor(PI, full) > cusp_count(PI, full)


def test_cusp_count_brute_sweep_small():
    for N in ideals_norm_up_to(D, 50):
        if N.is_one():
            continue
        subgroups = [full_unit_subgroup(N), pm_one_subgroup(N),
                     trivial_subgroup(N)]
        nontriv = next((c for c in characters(N) if c.order > 1), None)
        if nontriv is not None:
            subgroups.append(kernel_subgroup(nontriv))
        for H in subgroups:
            assert cusp_count(N, H) == cusp_count_brute(N, H), (N, len(H))


def test_subgroup_validation():
    ring_units = full_unit_subgroup(THREE)
    not_closed = frozenset(list(ring_units)[:3]) | trivial_subgroup(THREE)
    if len(not_closed) not in (1, len(ring_units)):
        with pytest.raises(ValueError):
            cusp_count(THREE, not_closed)
    with pytest.raises(ValueError):
        cusp_count(THREE, frozenset({(0, 0)}))


def test_subgroup_generated():
    gen = next(iter(full_unit_subgroup(THREE) - pm_one_subgroup(THREE)))
    H = subgroup_generated(THREE, [gen])
    assert len(full_unit_subgroup(THREE)) % len(H) == 0
    cusp_count(THREE, H)   # passes validation


# ---------------------------------------------------------------------------
# Moebius consistency (trivial coefficients)


def test_moebius_trivial_character():
    rep = moebius_consistency(PI, trivial_char(PI))
    assert rep.ok
    assert rep.nebentypus_dim == rep.kernel_dim == 1


def test_moebius_order_six_at_pi_squared():
    level = PI * PI
    gen = next(c for c in characters(level) if c.order == 6)
    rep = moebius_consistency(level, gen)
    assert rep.ok
    assert rep.nebentypus_dim == 0          # odd character, empty space
    assert rep.kernel_dim == rep.character_sum


def test_moebius_even_character_at_three():
    # (O/3)^x = C2 x C2: a genuinely non-cyclic character group, so the
    # vector-valued inversion (joint kernels of the components) is exercised
    ch = next(c for c in characters(THREE)
              if c.parity() == 1 and c.order == 2)
    rep = moebius_consistency(THREE, ch)
    assert rep.ok


# ---------------------------------------------------------------------------
# old/new ledger


def _seeded_ledger():
    led = NewformLedger()
    for lv in (ONE, PI, Q17):
        led.add(lv, trivial_char(lv), 0,
                h2_space(lv, trivial_char(lv)).dim_h2)
    return led


def test_ledger_prime_level_new_equals_cusp():
    led = _seeded_ledger()
    row = led.get(PI, trivial_char(PI), 0)
    assert row.new == row.cusp == 0
    assert row.total == row.eisenstein + row.cusp


def test_ledger_composite_level():
    led = _seeded_ledger()
    row = led.add(N7, trivial_char(N7), 0,
                  h2_space(N7, trivial_char(N7)).dim_h2)
    assert row.as_tuple() == (4, 3, 1, 0, 1)


def test_ledger_missing_divisor_errors():
    led = NewformLedger()
    with pytest.raises(KeyError):
        led.add(N7, trivial_char(N7), 0, 4)


def test_ledger_negative_cusp_errors():
    led = _seeded_ledger()
    with pytest.raises(ArithmeticError):
        led.add(N7, trivial_char(N7), 0, 2)   # below the Eisenstein part


def test_ledger_exports():
    led = _seeded_ledger()
    led.add(N7, trivial_char(N7), 0, 4)
    csv = led.to_csv()
    md = led.to_markdown()
    assert csv.splitlines()[0].startswith("level,character")
    assert len(csv.splitlines()) == 5
    assert "| 7+1*w |" in md
