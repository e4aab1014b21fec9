"""Smoke tests for the python bindings, with scipy as an outside reference
for the linkage engines."""

import numpy as np
import pytest

import linklab as ll

scipy_hierarchy = pytest.importorskip("scipy.cluster.hierarchy")


def random_points(n, d, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(size=(n, d))


def canonical(labels):
    remap = {}
    out = []
    for l in labels:
        out.append(remap.setdefault(int(l), len(remap)))
    return out


def test_distance_source_basics():
    src = ll.DistanceSource.from_features(
        np.array([[0.0, 0.0], [3.0, 4.0]]), norm="l2"
    )
    assert src.n == 2
    assert src.dist(0, 1) == pytest.approx(5.0)
    l1 = ll.DistanceSource.from_features(np.array([[0.0, 0.0], [3.0, 4.0]]), "l1")
    assert l1.dist(0, 1) == pytest.approx(7.0)
    cond = ll.DistanceSource.from_condensed(3, np.array([1.0, 2.0, 3.0]))
    assert cond.dist(1, 2) == pytest.approx(3.0)


def test_harmonic():
    assert ll.harmonic(3) == pytest.approx(11.0 / 6.0)


@pytest.mark.parametrize("rule,scipy_method", [
    ("average", "average"),
    ("single", "single"),
    ("complete", "complete"),
])
def test_engines_match_scipy(rule, scipy_method):
    pts = random_points(60, 3, seed=7)
    src = ll.DistanceSource.from_features(pts, "l2")
    dendro = ll.build(src, rule=rule, engine="nnchain")

    from scipy.spatial.distance import pdist

    z = scipy_hierarchy.linkage(pdist(pts), method=scipy_method)
    ours = sorted(m.height for m in dendro.merges)
    theirs = sorted(z[:, 2])
    assert np.allclose(ours, theirs, rtol=1e-9, atol=1e-12)

    cut_tree = scipy_hierarchy.cut_tree(z)
    for k in (2, 5, 17):
        mine = canonical(ll.cut(dendro, k).labels)
        scp = canonical(cut_tree[:, 60 - k])
        assert mine == scp


def test_naive_and_chain_engines_agree():
    pts = random_points(40, 2, seed=3)
    src = ll.DistanceSource.from_features(pts, "l2")
    a = ll.build(src, rule="average", engine="naive")
    b = ll.build(src, rule="average", engine="nnchain")
    for k in range(1, 41):
        assert ll.cut(a, k) == ll.cut(b, k)


def test_criteria_relations():
    pts = random_points(25, 2, seed=11)
    src = ll.DistanceSource.from_features(pts, "l2")
    dendro = ll.build(src, rule="average")
    for k in (2, 4, 8):
        c = ll.cut(dendro, k)
        assert ll.sep_min(c, src) <= ll.sep_av(c, src) + 1e-12
        assert ll.max_avg(c, src) <= ll.max_diam(c, src) + 1e-12
        assert ll.cs_ratio_av(c, src) <= 1.0 + 1e-9


def test_oracle_roundtrip():
    pts = random_points(9, 2, seed=5)
    src = ll.DistanceSource.from_features(pts, "l2")
    report = ll.compute_opts(src, 3)
    assert ll.sep_av(report.witness_sep, src) == report.opt_sep
    subset, value = ll.max_avg_subset(src, 3)
    assert value >= report.opt_sep - 1e-9
    bounds = ll.verify_bounds(src, 3)
    assert bounds["all_pass"]


def test_instance_bundle_verifies():
    bundle = ll.gen_ics(3, 0.0)
    assert bundle.source.n == 6
    results = bundle.verify()
    assert results and all(item["pass"] for item in results)


def test_random_hierarchy_deterministic():
    a = ll.random_hierarchy(12, 99)
    b = ll.random_hierarchy(12, 99)
    assert a.to_csv() == b.to_csv()


def test_ckmm_cost():
    src = ll.DistanceSource.from_features(np.array([[0.0], [1.0], [3.0]]), "l2")
    dendro = ll.build(src, rule="average", engine="naive")
    assert ll.ckmm_cost(dendro, src) == pytest.approx(17.0)
