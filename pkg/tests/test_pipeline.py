"""Pipeline driver tests.

Oracles: the weight-2 cuspidal dimensions and the seed eigenvalue
fingerprints are pinned against the elliptic-curve point counts and
dimension anchors established in test_hecke / test_cohomology; the
eligibility rule is pinned against an independent case table derived from
the local ordinarity criterion (good / principal series / Steinberg).
"""

import json

import pytest

from bianchi.fields import IQInt, Ideal, primes_above
from bianchi import pipeline, reports
from bianchi.cli import main as cli_main

D = -2


def iq(a, b=0):
    return IQInt(D, a, b)


TH = iq(0, 1)          # sqrt(-2)
PI = iq(1, 1)          # prime above 3
PIB = iq(1, -1)        # its conjugate
N1 = iq(3, -2)         # tame level of the first family (norm 17)


def test_good_prime_elements():
    prs = pipeline.good_prime_elements(D)
    norms = sorted(Ideal(l).norm() for l in prs)
    assert norms == [2, 3, 3, 11, 11, 17, 17, 19, 19, 25]
    for l in prs:
        fac = Ideal(l).factor()
        assert len(fac) == 1 and fac[0][1] == 1


def test_spec_validation():
    good = pipeline.FamilySpec(D, 3, Ideal(N1), Ideal(iq(7, 1)))
    good.validate()
    with pytest.raises(pipeline.SpecError):
        # 5 is inert in Q(sqrt -2)
        pipeline.FamilySpec(D, 5, Ideal(N1), Ideal(iq(7, 1))).validate()
    with pytest.raises(pipeline.SpecError):
        # tame level not prime to p
        pipeline.FamilySpec(D, 3, Ideal(iq(3)), Ideal(iq(9))).validate()
    with pytest.raises(pipeline.SpecError):
        # seed level not a p-power multiple of the tame level
        pipeline.FamilySpec(D, 3, Ideal(N1), Ideal(N1 * TH)).validate()


def test_eligibility_rule():
    pps = primes_above(D, 3)
    n = Ideal(N1)
    one = Ideal(iq(1))
    pi2 = Ideal(PI * PI)
    pib2 = Ideal(PIB * PIB)
    three = Ideal(iq(3))
    nine = Ideal(iq(9))
    cases = [
        (Ideal(N1 * PI), one, True),            # Steinberg at pi
        (Ideal(N1 * PI * PI), one, False),      # v=2, conductor 0
        (Ideal(N1 * iq(3) * PI), pi2, True),    # principal series at pi
        (Ideal(N1 * iq(3) * PI), one, False),
        (Ideal(N1 * iq(3) * PIB), pib2, True),
        (Ideal(N1 * iq(9)), pi2, False),        # v=2 at pibar, conductor 0
        (Ideal(N1 * iq(9)), nine, True),
        (Ideal(N1 * iq(3)), three, True),
        (Ideal(iq(9)), three, False),           # v=2, f=1
        (Ideal(iq(9)), nine, True),
    ]
    for level, cond, want in cases:
        assert pipeline._eligible_cell(level, cond, pps) is want, \
            (level, cond)


def test_weight_probe_values():
    probe = pipeline.weight_probe(Ideal(N1), (2,))
    assert probe.dims == {2: 0}
    assert probe.first_zero == 2
    # odd weights are parity-forced to zero and skipped
    probe = pipeline.weight_probe(Ideal(N1), (1, 3))
    assert probe.dims == {} and probe.first_zero is None


def test_base_change_family_flagged():
    spec = pipeline.FamilySpec(D, 3, Ideal(iq(0, 2)), Ideal(iq(0, 6)))
    rep = pipeline.run(spec, depth=2)
    assert rep.verdict == pipeline.VERDICT_DIAGONAL
    assert rep.probe.dims[2] == 3
    assert rep.scans == [] and rep.seed is None


@pytest.fixture(scope="module")
def family1_depth1():
    spec = pipeline.FamilySpec(D, 3, Ideal(N1), Ideal(iq(7, 1)))
    return pipeline.run(spec, depth=1)


def test_family1_seed_identity(family1_depth1):
    rep = family1_depth1
    seed = rep.seed
    assert seed.j_sign == 1 and seed.ordinarity == "ordinary"
    assert seed.u_values == (-1,)
    # elliptic-curve trace oracle (point counts over O/l)
    want = {iq(0, 1): -2, iq(1, -1): -2, iq(3, -1): -4, iq(3, 1): -2,
            iq(3, 2): -6, iq(1, -3): 0, iq(1, 3): -4, iq(5): -2}
    got = dict(zip(seed.primes, seed.rational))
    assert got == want


def test_family1_depth1_finite(family1_depth1):
    rep = family1_depth1
    assert rep.verdict == pipeline.VERDICT_FINITE
    assert rep.evidence_depth == 1
    assert rep.probe.first_zero == 2
    scan = rep.scans[0]
    assert scan.complete and scan.clean
    by_key = {(c.level, c.conductor): c for c in scan.cells}
    seed_cell = by_key[(Ideal(iq(7, 1)), Ideal(iq(1)))]
    assert seed_cell.status == "seed" and seed_cell.new_dim == 1
    for c in scan.cells:
        assert c.resolved()
        if c is not seed_cell:
            assert c.status == "empty"


def test_report_rendering(family1_depth1):
    rep = family1_depth1
    md = reports.report_markdown(rep)
    assert "FINITE_CLASSICAL_POINTS" in md
    assert "G0(N)" in md
    payload = json.loads(reports.report_json(rep))
    assert payload["verdict"] == "FINITE_CLASSICAL_POINTS"
    assert payload["seed"]["u_eigenvalues"] == {"1+1*w": -1}
    table = reports.dimension_table(rep.scans[0].cells, rep.spec.tame)
    # the seed row: level N*pi, trivial conductor, one newform
    assert "| G0(N) n G1(1+1*w) | 1 |" in table


def test_cli_pipeline_and_rigidity(tmp_path, capsys):
    out = tmp_path / "report.md"
    rc = cli_main(["pipeline", "run", "--tame", "2*w", "--seed-level",
                   "6*w", "--depth", "1", "--out", str(out)])
    assert rc == 0
    assert "DIAGONAL_SUSPECT" in out.read_text()
    assert json.loads(out.with_suffix(".json").read_text())["verdict"] \
        == "DIAGONAL_SUSPECT"
    capsys.readouterr()

    series = tmp_path / "diag.json"
    series.write_text(json.dumps({"1,0": "1", "0,1": "-1"}))
    rc = cli_main(["rigidity", "classify", "--series", str(series)])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["label"] == "DIAGONAL"


def test_cli_hecke_table(capsys):
    rc = cli_main(["hecke", "--level", "7+1*w", "--u",
                   "--primes", "0+1*w,3+1*w,3-1*w"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "| new | + | 1 | -2 | -2 | -4 | -1 |" in out


def test_budget_exhaustion_is_inconclusive():
    spec = pipeline.FamilySpec(D, 3, Ideal(N1), Ideal(iq(7, 1)))
    rep = pipeline.run(spec, depth=1, budget=0.0)
    assert rep.verdict == pipeline.VERDICT_INCONCLUSIVE
    assert rep.evidence_depth == 0
