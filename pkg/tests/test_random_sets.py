"""Tests for random target-set generation, sphere/ball statistics, and the
sparse-evenness condition checker."""
import math

import numpy as np
import pytest

from cubewalk.random_sets import (
    TargetSet,
    Thresholds,
    check_conditions,
    cloud_statistic,
    distance_profile,
    load_set,
    percolation_cloud,
    sample_without_replacement,
    save_set,
    sphere_ball_profiles,
    vn_max,
)


def _set(n, members):
    return TargetSet(n=n, members=frozenset(members), provenance="test")


def test_percolation_extremes():
    assert len(percolation_cloud(8, 0.0, 1)) == 0
    assert len(percolation_cloud(8, 1.0, 1)) == 256


def test_percolation_size_is_binomial():
    # |cloud| pooled over seeds: mean N*rho, 5 sigma band
    n, rho, seeds = 10, 0.05, 200
    sizes = [len(percolation_cloud(n, rho, s)) for s in range(seeds)]
    mean = (1 << n) * rho
    sigma = math.sqrt((1 << n) * rho * (1 - rho) / seeds)
    assert abs(np.mean(sizes) - mean) < 5 * sigma


def test_sample_exact_size_and_extremes():
    assert len(sample_without_replacement(6, 64, 3)) == 64
    assert len(sample_without_replacement(6, 1, 3)) == 1
    B = sample_without_replacement(12, 700, 9)
    assert len(B) == 700  # distinct by construction
    with pytest.raises(ValueError):
        sample_without_replacement(6, 65, 3)
    with pytest.raises(ValueError):
        sample_without_replacement(6, 0, 3)


def test_sample_is_uniform_over_vertices():
    # frequency of one fixed vertex across seeds, 5 sigma
    n, M, seeds = 4, 1, 2000
    hits = sum(0 in sample_without_replacement(n, M, s) for s in range(seeds))
    p = M / (1 << n)
    sigma = math.sqrt(seeds * p * (1 - p))
    assert abs(hits - seeds * p) < 5 * sigma


def test_distance_profile_partitions_set():
    B = sample_without_replacement(10, 50, 4)
    for x in (0, 17, 1023):
        prof = distance_profile(B, x)
        assert prof.sum() == 50
        assert prof.shape == (11,)


def test_profiles_tiny_cases():
    # the worst center for a singleton sits at distance k for every k,
    # so both profiles are identically 1
    B = _set(6, {0})
    v, V, exact = sphere_ball_profiles(B)
    assert exact
    assert np.all(v == 1)
    assert np.all(V == 1)
    full = _set(4, range(16))
    v, V, exact = sphere_ball_profiles(full)
    assert [vn_max(full, k)[0] for k in range(5)] == [math.comb(4, k) for k in range(5)]
    assert V[4] == 16


def test_ball_dominates_sphere_and_is_monotone():
    B = sample_without_replacement(12, 200, 8)
    v, V, exact = sphere_ball_profiles(B)
    assert exact
    assert np.all(V >= v)
    assert np.all(np.diff(V) >= 0)
    assert V[12] == len(B)
    assert v.sum() >= len(B)  # every member sits on some sphere of some center


def test_sampled_profiles_lower_bound_exact():
    B = sample_without_replacement(14, 300, 2)
    v_ex, V_ex, flag_ex = sphere_ball_profiles(B, mode="exact")
    v_s, V_s, flag_s = sphere_ball_profiles(B, mode=("sampled", 128, 0))
    assert flag_ex and not flag_s
    assert np.all(v_s <= v_ex)
    assert np.all(V_s <= V_ex)
    val, is_lb = vn_max(B, 3, mode=("sampled", 128, 0))
    assert is_lb
    assert val <= vn_max(B, 3)[0]


def test_cloud_statistic_stays_small_in_regime():
    # sparse clouds keep near-neighbour counts at O(1) scale
    n, rho = 16, 16.0 ** -3
    worst = max(float(cloud_statistic(percolation_cloud(n, rho, s), rho).max())
                for s in range(1, 31))
    assert worst <= 10.0


def test_check_conditions_full_cube_fails():
    full = _set(8, range(256))
    report = check_conditions(full, "auto")
    assert not report.all_pass


def test_check_conditions_sparse_sample_passes():
    B = sample_without_replacement(16, 16, 1)
    report = check_conditions(B, "auto")
    assert report.m == pytest.approx(2.0**16 / 16)
    assert report.all_pass
    d = report.to_dict()
    assert d["verdicts"]["size"] and d["all_pass"]


def test_check_conditions_infeasible_threshold():
    # m too small for any crossing: xi-dependent verdicts all fail
    B = sample_without_replacement(8, 4, 1)
    report = check_conditions(B, 1.0)
    assert not report.g.feasible
    assert not report.all_pass


def test_custom_thresholds():
    B = sample_without_replacement(16, 16, 1)
    strict = check_conditions(B, "auto", thresholds=Thresholds(size=1e-9, xi_gap=1e-9,
                                                               vsum=1e-9, vbig=1e-9))
    assert not strict.all_pass


def test_set_file_roundtrip(tmp_path):
    B = percolation_cloud(9, 0.02, 5)
    path = tmp_path / "cloud.txt"
    save_set(path, B)
    text = path.read_text().splitlines()
    assert text[0] == "n=9"
    assert all(int(line, 16) < 512 for line in text[1:])
    back = load_set(path)
    assert back.n == B.n and back.members == B.members


def test_load_set_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("dim 9\n0\n")
    with pytest.raises(ValueError):
        load_set(path)


def test_generation_is_deterministic():
    a = percolation_cloud(14, 0.001, 77)
    b = percolation_cloud(14, 0.001, 77)
    assert a.members == b.members
    c = sample_without_replacement(14, 9, 77)
    d = sample_without_replacement(14, 9, 77)
    assert c.members == d.members
    # percolation and sampling draw from separated streams: same seed,
    # different constructions
    assert a.members != c.members


def test_target_set_validation():
    with pytest.raises(ValueError):
        TargetSet(n=0, members=frozenset(), provenance="test")
    with pytest.raises(ValueError):
        TargetSet(n=4, members=frozenset({16}), provenance="test")
    s = _set(4, {0, 15})
    assert 15 in s and 7 not in s and len(s) == 2
