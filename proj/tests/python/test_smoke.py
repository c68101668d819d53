import math

import pytest

import sawsle


def test_enumeration_counts():
    assert [len(sawsle.enumerate_walks(n)) for n in range(1, 5)] == [1, 3, 7, 19]
    for walk in sawsle.enumerate_walks(4):
        assert sawsle.is_valid_walk(walk)


def test_invalid_walk_detected():
    assert not sawsle.is_valid_walk([(0, 0), (0, 1), (0, 0)])
    assert not sawsle.is_valid_walk([(0, 0), (1, 0)])


def test_s_at_one():
    # Closed form at the lower edge: 2^-(5/8 - 5/48).
    assert sawsle.exact_cdf("S", 1.0) == pytest.approx(2.0 ** (-25.0 / 48.0), abs=1e-12)


def test_factors_match_finite_difference():
    w = 2.5
    d0, di = sawsle.factors("X", w)
    h = 1e-5
    fd0 = abs(sawsle.excursion_map("X", w, h) - sawsle.excursion_map("X", w, -h)) / (2 * h)
    fdi = abs(sawsle.excursion_map("X", w, 1j + h) - sawsle.excursion_map("X", w, 1j - h)) / (2 * h)
    assert d0 == pytest.approx(fd0, rel=1e-6)
    assert di == pytest.approx(fdi, rel=1e-6)
    assert sawsle.exact_cdf("X", w) == pytest.approx(d0 ** (5.0 / 8.0) * di ** (5.0 / 48.0), rel=1e-12)


def test_fast_matches_bruteforce():
    for walk in sawsle.sample_walks(60, 20, interval=10, seed=7):
        assert sawsle.walk_stats(walk, fast=True) == sawsle.walk_stats(walk, fast=False)


def test_rod_weight():
    rod = [(0, k) for k in range(11)]
    stats = sawsle.walk_stats(rod)
    assert stats["r_end"] == pytest.approx(10 ** (1 - 0.75))
    assert stats["theta"] == pytest.approx(math.pi / 2)
    assert sawsle.walk_weight(rod) == pytest.approx(stats["r_end"] ** (-61.0 / 48.0))


def test_accumulator_round_trip(tmp_path):
    acc = sawsle.Accumulator()
    for walk in sawsle.sample_walks(30, 50, interval=5, seed=3):
        acc.add_walk(walk)
    assert acc.samples == 50
    path = tmp_path / "acc.txt"
    acc.save(path)
    assert sawsle.Accumulator.load(path) == acc
    est = acc.finalize()
    ecdf = est["X"]["ecdf"]
    assert all(a <= b for a, b in zip(ecdf, ecdf[1:]))
    assert ecdf[-1] <= 1.0


def test_run_and_analyze(tmp_path):
    out = tmp_path / "run"
    path = sawsle.run({"N": "50", "samples": "2000", "interval": "5", "seed": "11", "out": str(out)})
    summary = sawsle.analyze(path, tmp_path / "analysis")
    assert len(summary["max_abs_diff"]) == 4
    assert all(0.0 <= d <= 1.0 for d in summary["max_abs_diff"])
    for stat in "XYRS":
        assert (tmp_path / "analysis" / f"cdf_{stat}.csv").exists()


def test_unknown_statistic():
    with pytest.raises(ValueError):
        sawsle.exact_cdf("Q", 2.0)


def test_domain_error():
    with pytest.raises(sawsle.DomainError):
        sawsle.exact_cdf("X", -1.0)
