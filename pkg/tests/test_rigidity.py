"""p-adic power series: valuations, recentering, translate detection.

The planted-factor trials are the core guarantee: a series divisible by
xi (X+1)^N - (Y+1) must be recognized, and a perturbed exponent must
not be.  Everything runs at the default budget (D, M, m_max) =
(32, 60, 3) with p = 3.
"""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bianchi.rigidity import (ClassicalPoint, PSeries2, PadicInt, classify,
                              cyc_ring, detect_translate, eval_special,
                              norm_torus_factor, recenter, torus_factor,
                              torus_substitute)

P = 3


def _random_series(rng, n_terms=8, unit=False, D=32, M=60):
    coeffs = {}
    if unit:
        coeffs[(0, 0)] = rng.choice([1, 2, 4, 5, 7])
    for _ in range(n_terms):
        i, j = rng.randrange(6), rng.randrange(6)
        if (i, j) == (0, 0):
            continue
        coeffs[(i, j)] = rng.randrange(1, P ** 10)
    return PSeries2(P, D, M, coeffs)


# ---------------------------------------------------------------------------
# scalars and rings


def test_padic_precision_propagates_pessimistically():
    a = PadicInt(P, 10, 5)
    b = PadicInt(P, 4, 3)
    assert (a * b).prec == 3 and (a + b).prec == 3
    exact = PadicInt(P, 7, None)
    assert (a * exact).prec == 5


def test_lambda_minimal_polynomial_is_eisenstein():
    for m in (1, 2, 3):
        ring = cyc_ring(P, m)
        assert ring.deg == (P - 1) * P ** (m - 1)
        g = ring._g
        assert g[-1] == 1
        assert all(c % P == 0 for c in g[:-1])
        assert g[0] % (P * P) != 0


def test_newton_polygon_valuations():
    ring = cyc_ring(P, 2)       # deg 6, v(lambda) = 1/6
    lam = ring.lam()
    assert ring.val(lam).value == Fraction(1, 6)
    assert ring.val(ring.from_int(P)).value == 1
    # lambda - p: the lambda term wins
    x = ring.sub(lam, ring.from_int(P))
    assert ring.val(x).value == Fraction(1, 6)


# ---------------------------------------------------------------------------
# evaluation at classical points


def test_eval_diagonal_point_is_exact_zero():
    phi = PSeries2(P, M=None, coeffs={(1, 0): 1, (0, 1): -1})
    for k in (0, 2, 5):
        val = eval_special(phi, ClassicalPoint(P, k, (2, 4), (2, 4)))
        assert val.kind == "exact" and val.value == math.inf


def test_eval_on_cubing_subtorus_is_exact_zero():
    phi = torus_factor(P, 3, M=None)
    for a in (1, 2, 4):
        val = eval_special(phi, ClassicalPoint(P, 0, (2, a), (2, 3 * a)))
        assert val.kind == "exact" and val.value == math.inf


def test_eval_x_minus_p_at_zeta9():
    phi = PSeries2(P, coeffs={(1, 0): 1, (0, 0): -P})
    val = eval_special(phi, ClassicalPoint(P, 0, (2, 1), (0, 0)))
    assert val.kind == "exact" and val.value == Fraction(1, 6)


def test_eval_vanishing_locus_of_translate():
    # xi (X+1)^N - (Y+1) with xi = zeta_3, N = 2, vanishes exactly at
    # points with zeta' = xi zeta^N; realized through the norm form
    phi = norm_torus_factor(P, 2, 1, M=None)
    for m, a in ((1, 1), (2, 2), (2, 1)):
        # zeta' = zeta_3 * zeta^2: exponent arithmetic at level max(m, 1)
        mm = max(m, 1)
        ap = (2 * a * P ** (mm - m) + P ** (mm - 1)) % P ** mm
        val = eval_special(phi, ClassicalPoint(P, 0, (m, a), (mm, ap)))
        assert val.value == math.inf, (m, a)
    # and a non-member point has finite valuation: zeta = zeta_9 makes
    # (X+1)^6 = zeta_3^2 while (Y+1)^3 = 1
    val = eval_special(phi, ClassicalPoint(P, 0, (2, 1), (0, 0)))
    assert val.kind == "exact" and val.value != math.inf


def test_eval_product_adds_valuations():
    rng = random.Random(3)
    pts = [ClassicalPoint(P, 0, (1, 1), (2, 1)),
           ClassicalPoint(P, 1, (2, 2), (1, 1)),
           ClassicalPoint(P, 0, (0, 0), (2, 4))]
    for _ in range(5):
        f = _random_series(rng, unit=False)
        g = _random_series(rng, unit=False)
        fg = f * g
        for pt in pts:
            vf, vg, vfg = (eval_special(s, pt) for s in (f, g, fg))
            if "exact" == vf.kind == vg.kind == vfg.kind:
                assert vfg.value == vf.value + vg.value


# ---------------------------------------------------------------------------
# recentering


def test_recenter_identity_and_shift():
    phi = PSeries2(P, coeffs={(1, 0): 1})
    assert recenter(phi, 0).coeffs == phi.coeffs
    shifted = recenter(phi, 1)          # X -> (1+p)X + p
    assert shifted.coeffs == {(0, 0): P, (1, 0): 1 + P}


def test_recenter_roundtrip_random():
    rng = random.Random(17)
    for _ in range(20):
        phi = _random_series(rng)
        K = PadicInt(P, rng.randrange(P ** 20), 60)
        back = recenter(recenter(phi, K), PadicInt(P, -K.value, 60))
        assert (back - phi).is_zero()


def test_recenter_integer_roundtrip_exact():
    phi = torus_factor(P, 5, M=None)
    back = recenter(recenter(phi, 3), -3)
    assert (back - PSeries2(P, M=back.M, coeffs=phi.coeffs)).is_zero()


# ---------------------------------------------------------------------------
# torus substitution and translate detection


def test_torus_substitute_kills_planted_factor():
    assert torus_substitute(torus_factor(P, 3), 3).is_zero()
    assert not torus_substitute(torus_factor(P, 3), 4).is_zero()
    diag = PSeries2(P, coeffs={(1, 0): 1, (0, 1): -1})
    assert torus_substitute(diag, 1).is_zero()


@given(st.integers(min_value=1, max_value=9), st.randoms())
@settings(max_examples=25, deadline=None)
def test_planted_translate_recovery(N, rnd):
    u = _random_series(rnd, unit=True)
    hit = detect_translate(torus_factor(P, N) * u)
    assert hit is not None
    assert hit.xi == (0, 0) and hit.n_value == N and not hit.swap


def test_planted_translate_hundred_trials():
    rng = random.Random(2024)
    hits = 0
    for _ in range(100):
        N = rng.choice(list(range(1, 10)) + [1 + P])
        u = _random_series(rng, unit=True)
        hit = detect_translate(torus_factor(P, N) * u)
        hits += (hit is not None and hit.n_value == N)
    assert hits == 100


def test_planted_cyclotomic_translate_norm_form():
    # the Z_p-rational norm form of xi (X+1)^N - (Y+1) over mu_3
    for N in (2, 4):
        hit = detect_translate(norm_torus_factor(P, N, 1))
        assert hit is not None and hit.n_value == N


def test_generic_series_has_no_translate():
    rng = random.Random(5)
    for _ in range(10):
        phi = _random_series(rng)
        # forbid the degenerate hits: a pure-X and a pure-Y term rule out
        # divisibility by Y (the N = 0 translate) in either orientation
        phi = phi + PSeries2(P, coeffs={(1, 0): 1 + P * rng.randrange(P ** 8),
                                        (0, 2): 1 + P * rng.randrange(P ** 8)})
        if phi.diagonal_is_zero():
            continue
        assert detect_translate(phi) is None


# ---------------------------------------------------------------------------
# classification


def test_classify_diagonal():
    assert classify(PSeries2(P, coeffs={(1, 0): 1, (0, 1): -1})).label \
        == "DIAGONAL"


@pytest.mark.parametrize("N", list(range(2, 10)) + [1 + P])
def test_classify_torus_translate(N):
    out = classify(torus_factor(P, N))
    assert out.label == "TORUS_TRANSLATE"
    assert out.hit.n_value == N


def test_classify_no_translate_records_empirical_minimum():
    out = classify(PSeries2(P, coeffs={(2, 0): 1, (0, 1): -P}))
    assert out.label == "NO_TRANSLATE_UP_TO_BOUNDS"
    assert out.points_sampled > 0
    assert out.empirical_min is not None and out.empirical_min < math.inf


def test_classify_unit_multiple_invariance():
    rng = random.Random(11)
    base = torus_factor(P, 6)
    for _ in range(5):
        u = _random_series(rng, unit=True)
        assert classify(base * u).label == "TORUS_TRANSLATE"


def test_precision_monotonicity():
    rng = random.Random(23)
    for _ in range(50):
        phi = _random_series(rng, D=24, M=40)
        big = PSeries2(P, 32, 60, phi.coeffs)
        lab_small = classify(phi).label
        lab_big = classify(big).label
        assert lab_small == lab_big


def test_json_roundtrip():
    phi = torus_factor(P, 7)
    back = PSeries2.from_json(phi.to_json(), P)
    assert back.coeffs == phi.coeffs
