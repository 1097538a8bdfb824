import json

import numpy as np
import pytest

from lamlab import ValidationError
from lamlab import experiments as ex


def test_mass_identity_small():
    rep = ex.exp_mass_identity(samples=40, max_n=80, seed=3)
    assert rep.verdict and rep.stats["failures"] == 0
    assert rep.stats["comparisons"] == 200


def test_reports_are_reproducible():
    a = ex.exp_luka_vs_contour(n=300, samples=5, seed=2)
    b = ex.exp_luka_vs_contour(n=300, samples=5, seed=2)
    assert a.to_json() == b.to_json()
    body = json.loads(a.to_json())
    assert set(body) >= {"name", "seed", "config", "stats", "verdict"}
    assert a.samples_csv().startswith("index,bound,distance")


def test_luka_vs_contour_small():
    rep = ex.exp_luka_vs_contour(n=500, samples=10, seed=1)
    assert rep.verdict and rep.stats["max_ratio"] < 1.0
    single = ex.exp_luka_vs_contour(n=1, samples=2, seed=1)
    assert single.stats["max_distance"] == 0.0


def test_factorization_vs_fragmentation_degenerate_and_undersized():
    rep = ex.exp_factorization_vs_fragmentation(n=500, c=0.0, samples=10, seed=1)
    assert rep.verdict and rep.stats["chords_A"] == 0
    with pytest.raises(ValidationError):
        ex.exp_factorization_vs_fragmentation(n=100, samples=10)


def test_factorization_vs_fragmentation_reports_both_rates():
    rep = ex.exp_factorization_vs_fragmentation(n=500, c=1.0, samples=30, seed=1)
    assert {"spec_rate", "matched_rate"} <= set(rep.stats)
    assert rep.stats["chords_A"] == 22
    assert rep.stats["matched_rate"]["rate"] == pytest.approx(1 / np.sqrt(500))


def test_levy_marginal_sizes():
    rep = ex.exp_levy_marginal(n=500, samples=20, seed=1)
    assert rep.stats["reduced_size"] == int(np.floor(np.sqrt(250)))
    assert rep.stats["mu_n_mean"] == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValidationError):
        ex.exp_levy_marginal(n=100)


def test_filtered_top_masses():
    from lamlab.lamination import Lamination
    lam = Lamination.from_pairs([(0, 5), (1, 2)], 10)
    assert ex.filtered_top_masses(lam, 0.0).tolist() == [0.5, 0.4, 0.1]
    assert ex.filtered_top_masses(lam, 0.2).tolist() == [0.5, 0.5, 0.0]


def test_local_limit_small():
    out = ex.local_limit_error(2000)
    assert out["tail_max"] <= 1e-8
    assert out["steps"] == int(np.floor(np.sqrt(1000)))
    # centring matters: the uncentred density is far off
    assert ex.local_limit_error(2000, density="q")["sup_error"] > 5 * out["sup_error"]


def test_local_limit_report_shape():
    rep = ex.exp_local_limit(n=500)
    jj = int(np.floor(500 ** 0.375))
    assert set(rep.stats["j_sweep"]) == {str(-jj), str(jj)}
    assert all(np.isfinite(v) for v in rep.stats["j_sweep"].values())
    assert rep.threshold["sup_error"] == pytest.approx(0.05 * rep.stats["j0"]["max_q"])


def test_reduced_tree_law_small():
    rep = ex.exp_reduced_tree_law(n=50, sizes=(1, 2, 3), hosts=5000, seed=2)
    assert rep.stats["size1"]["observed_freq"] == [1.0]
    assert rep.stats["size2"]["observed_freq"] == [1.0]
    assert rep.stats["size3"]["pvalue"] > 1e-3


def test_sample_reduced_shape():
    rng = np.random.default_rng(0)
    shapes = [ex.sample_reduced_shape(0.5, 3, rng) for _ in range(200)]
    for s in shapes:
        assert s is None or (s[0] == -1 and len(s) <= 3)


def test_partition_process_small():
    rep = ex.exp_partition_process(ns=(100, 900), samples=20, ks_n=300, ks_samples=100, seed=1)
    fq = rep.stats["forward_q95"]
    assert fq["900"] < fq["100"]
    assert 0.0 <= rep.stats["largest_block_vs_face"]["pvalue"] <= 1.0


def test_suites_registry():
    assert set(ex.SUITES) == {"mass_identity", "factorization_vs_fragmentation", "levy_marginal",
                              "local_limit", "reduced_tree_law", "luka_vs_contour", "partition_process"}
