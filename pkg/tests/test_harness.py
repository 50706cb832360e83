import json

import pytest

from pseudoschur import condition_report, fixtures
from pseudoschur.harness import (
    STRATEGIES,
    GenerationError,
    GenSpec,
    find_ppt_counterexample,
    gen_block,
    invariance_probe,
    verify_all,
)
from pseudoschur.ranges import A_SIDE, NAMES

from conftest import blocks, rat


@pytest.mark.parametrize("mode", ["float", "rational"])
@pytest.mark.parametrize("strategy", ["a_side", "d_side", "ppt", "nonsingular", "block_diagonal"])
def test_generator_soundness(mode, strategy):
    dims = (3, 3, 2, 2)
    for seed in range(15):
        mb = gen_block(GenSpec(dims, strategy, mode, seed))
        report = condition_report(mb)
        assert report.holds(*STRATEGIES[strategy]), (seed, report.failed())


@pytest.mark.parametrize("mode", ["float", "rational"])
def test_rectangular_f(mode):
    for seed in range(15):
        mb = gen_block(GenSpec((2, 4, 3, 2), "a_side", mode, seed, rectangular_f=True))
        assert mb.dims == (2, 4, 3, 2)
        assert condition_report(mb).holds(*A_SIDE)


def test_a_side_seed_reports_four_verdicts():
    mb = gen_block(GenSpec((3, 3, 2, 2), "a_side", "rational", 42))
    assert condition_report(mb).holds(*A_SIDE)


def test_zero_b_c_rank_is_block_diagonal():
    mb = gen_block(GenSpec((3, 3, 2, 2), "a_side", "rational", 1, rank_b=0, rank_c=0))
    assert mb.b.is_zero() and mb.c.is_zero()
    assert condition_report(mb).holds(*NAMES)


@pytest.mark.parametrize("mode", ["float", "rational"])
def test_deterministic(mode):
    spec = GenSpec((3, 2, 2, 3), "ppt", mode, 77)
    assert gen_block(spec).whole == gen_block(spec).whole


def test_rank_bounds():
    from pseudoschur import rank

    mb = gen_block(GenSpec((4, 4, 2, 2), "a_side", "rational", 5, rank_a=2))
    assert rank(mb.a) == 2


def test_unsatisfiable_square_f():
    with pytest.raises(GenerationError):
        gen_block(GenSpec((2, 2, 2, 3), "a_side", "float", 0))


def test_unknown_strategy():
    with pytest.raises(ValueError):
        gen_block(GenSpec(strategy="nope"))


class TestInvarianceProbe:
    def test_example1_invariant(self, example1):
        probe = invariance_probe(example1, samples=50, seed=3)
        assert probe.invariant and probe.spread == 0.0
        assert all(v == rat([[1]]) for v in probe.values)

    def test_example1_float(self):
        mb = fixtures.load("example1", "float")
        probe = invariance_probe(mb, samples=50, seed=3)
        assert probe.invariant and probe.spread <= 1e-10

    def test_violator(self, violator):
        probe = invariance_probe(violator, samples=10, seed=0)
        assert not probe.invariant
        assert len(set(probe.values)) > 1

    def test_c_zero(self):
        mb = blocks([[1, 0], [0, 0]], [[0], [1]], [[0, 0]], [[0]])
        assert invariance_probe(mb, samples=5).invariant

    def test_needs_two_samples(self, example1):
        with pytest.raises(ValueError):
            invariance_probe(example1, samples=1)


class TestVerifyAll:
    def test_fixtures_only(self):
        report = verify_all(trials=0, mode="rational")
        assert report.fixtures["example1"]["ok"]
        assert report.fixtures["example1"]["h_pinv_equals_j"] is False
        assert report.fixtures["example2"]["ok"]
        assert all(t.trials == 0 for t in report.theorems.values())

    def test_rational_exact(self):
        report = verify_all(trials=4, seed=1, mode="rational")
        assert report.ok
        assert all(t.worst_residual == 0.0 for t in report.theorems.values())

    def test_float(self):
        report = verify_all(trials=25, seed=2, mode="float")
        assert report.ok, report.describe()

    def test_counts_and_serialization(self):
        report = verify_all(trials=3, seed=4)
        data = json.loads(report.to_json())
        for name, t in data["theorems"].items():
            assert t["passes"] + t["failures"] == t["trials"] == 3
        assert data["ok"] is True
        assert "ALL PASS" in report.describe()

    def test_deterministic_and_worker_independent(self):
        a = verify_all(trials=6, seed=9)
        b = verify_all(trials=6, seed=9, workers=2)
        for name in a.theorems:
            assert a.theorems[name].passes == b.theorems[name].passes
            assert a.theorems[name].worst_residual == b.theorems[name].worst_residual

    def test_failing_seeds_recorded(self):
        # an impossibly tight tolerance turns float round-off into recorded failures
        report = verify_all(trials=3, seed=0, mode="float", tol=1e-30)
        failed = [t for t in report.theorems.values() if t.failures]
        assert failed and all(len(t.failing_seeds) == t.failures for t in failed)
        assert not report.ok


def test_dropping_d_side_inclusion_finds_counterexample():
    found = find_ppt_counterexample(trials=200, seed=0)
    assert found is not None
    _, cmp = found
    assert not cmp.equal
    assert "incl_C_D" in cmp.hypotheses.failed() or "incl_Bt_Dt" in cmp.hypotheses.failed()
