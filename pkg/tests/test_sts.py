import numpy as np
import pytest

from rngbench import BitStream, from_ascii
from rngbench.bitstream import ParameterError
from rngbench.sts import ALPHA, SuiteReport, TestId, render_matrix, run_suite, run_test
from rngbench.sts.suite import TEST_ORDER

MIN_OFF = {"min_n": 0}


def pcg_stream(seed, n):
    rng = np.random.default_rng(seed)
    return BitStream(rng.integers(0, 2, size=n, dtype=np.uint8))


class TestWorkedExamples:
    """Closed-form oracle points from the reference worked examples."""

    def test_frequency(self):
        r = run_test(TestId.frequency, from_ascii("1011010101"), MIN_OFF)
        assert r.p_values[0] == pytest.approx(0.527089, abs=1e-5)

    def test_block_frequency(self):
        r = run_test(
            TestId.block_frequency, from_ascii("0110011010"), {"M": 3, **MIN_OFF}
        )
        assert r.p_values[0] == pytest.approx(0.801252, abs=1e-5)

    def test_runs(self):
        r = run_test(TestId.runs, from_ascii("1001101011"), MIN_OFF)
        assert r.p_values[0] == pytest.approx(0.147232, abs=1e-5)


class TestSuiteMechanics:
    def test_all_p_values_in_unit_interval(self):
        rep = run_suite(pcg_stream(5, 2_000_000))
        for r in rep.results:
            for p in r.p_values:
                assert 0.0 <= p <= 1.0

    def test_fixed_order_and_all_fifteen(self):
        rep = run_suite(pcg_stream(5, 200_000))
        assert [r.test for r in rep.results] == TEST_ORDER
        assert len(rep.results) == 15

    def test_determinism(self):
        s = pcg_stream(9, 500_000)
        a = run_suite(s)
        b = run_suite(s)
        assert [r.p_values for r in a.results] == [r.p_values for r in b.results]

    def test_all_zeros_frequency_fails(self):
        s = BitStream(np.zeros(10**6, dtype=np.uint8))
        rep = run_suite(s)
        freq = rep.results[0]
        assert freq.test is TestId.frequency
        assert freq.applicable and not freq.passed
        assert freq.p_values[0] == pytest.approx(0.0, abs=1e-12)
        assert not rep.all_pass
        assert TestId.frequency in rep.failing

    def test_seventeen_single_p_values_at_full_length(self):
        rep = run_suite(pcg_stream(11, 1_200_000))
        applicable = [r for r in rep.results if r.applicable]
        assert len(applicable) == 15
        assert sum(len(r.p_values) for r in applicable) == 17

    def test_short_stream_marked_not_applicable(self):
        rep = run_suite(from_ascii("10101100"))
        by_id = {r.test: r for r in rep.results}
        assert not by_id[TestId.universal].applicable
        assert not by_id[TestId.linear_complexity].applicable
        assert by_id[TestId.universal].p_values == []
        # Inapplicable results never count as failures.
        assert by_id[TestId.universal].passed is False
        assert TestId.universal not in rep.failing

    def test_excursions_need_enough_cycles(self):
        # A strongly biased-but-long stream yields too few zero crossings.
        bits = np.ones(10**6, dtype=np.uint8)
        bits[::1000] = 0
        rep = run_suite(BitStream(bits))
        by_id = {r.test: r for r in rep.results}
        assert not by_id[TestId.random_excursions].applicable

    def test_unknown_test_id(self):
        with pytest.raises(ValueError):
            run_test("not_a_test", from_ascii("10"))

    def test_invalid_param_override(self):
        with pytest.raises(ParameterError):
            run_test(TestId.frequency, from_ascii("10"), {"bogus": 1})

    def test_pass_implies_applicable(self):
        rep = run_suite(pcg_stream(3, 50_000))
        for r in rep.results:
            if r.passed:
                assert r.applicable

    def test_profile_override_recorded(self):
        rep = run_suite(pcg_stream(3, 200_000), {"block_frequency": {"M": 256}})
        by_id = {r.test: r for r in rep.results}
        assert by_id[TestId.block_frequency].params_used["M"] == 256


class TestMonotoneBias:
    def test_frequency_p_strictly_decreases_with_bias(self):
        # Common random numbers: the one-count is monotone in epsilon, so
        # with a nonnegative starting excess the p-value must decrease.
        n = 10**6
        u = np.random.default_rng(42).random(n)
        last = None
        base_excess = int((u < 0.5).sum()) * 2 - n
        assert base_excess >= 0
        for eps in (0.0, 0.001, 0.01, 0.1):
            s = BitStream((u < 0.5 + eps).astype(np.uint8))
            p = run_test(TestId.frequency, s).p_values[0]
            if last is not None:
                assert p < last
            last = p


class TestRenderMatrix:
    def test_all_pass_row(self):
        rep = run_suite(pcg_stream(11, 1_200_000), label="src", stage="post")
        data, text = render_matrix([rep])
        assert len(data["rows"]) == 1
        assert set(data["rows"][0]["cells"].values()) <= {"pass", "fail", "n/a"}
        assert "src/post" in text

    def test_three_source_grid(self):
        reps = [
            run_suite(pcg_stream(i, 50_000), label=f"s{i}", stage="pre")
            for i in range(3)
        ]
        data, _ = render_matrix(reps)
        assert len(data["rows"]) == 3
        assert all(len(row["cells"]) == 15 for row in data["rows"])

    def test_three_state_rendering(self):
        rep = run_suite(from_ascii("1010110010100101" * 20), label="tiny", stage="pre")
        _, text = render_matrix([rep])
        assert "-" in text  # inapplicable distinct from fail

    def test_empty_input_rejected(self):
        with pytest.raises(ParameterError):
            render_matrix([])


class TestCalibration:
    @pytest.mark.slow
    def test_pass_rate_over_reference_streams(self):
        # 100 independent 10^6-bit PCG64 streams: each test must pass at
        # least 96% of the time at alpha = 0.01.
        runs = 100
        passes = {t: 0 for t in TEST_ORDER}
        applicable = {t: 0 for t in TEST_ORDER}
        for i in range(runs):
            rep = run_suite(pcg_stream(1000 + i, 10**6))
            for r in rep.results:
                if r.applicable:
                    applicable[r.test] += 1
                    passes[r.test] += int(r.passed)
        for t in TEST_ORDER:
            # The excursion tests are legitimately inapplicable when the
            # walk has too few zero crossings; judge the pass rate over
            # the runs where the test applied.
            assert applicable[t] >= 30, f"{t.value} rarely applicable"
            rate = passes[t] / applicable[t]
            assert rate >= 0.96, f"{t.value} pass rate {rate:.2%}"
