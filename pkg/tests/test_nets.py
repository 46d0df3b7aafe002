import json

import numpy as np
import pytest
from scipy.stats import kstest

from qghdist.algebra import AlgebraIsomorphism, FiniteVNAlgebra, op_norm
from qghdist.common import CoveringMethod, CoveringMetric, NetError, Target
from qghdist.lipnorm import kernel_norm
from qghdist.nets import (
    build_net,
    entry_net,
    estimate_covering,
    grid_net,
    is_member,
    load_net,
    map_net,
    mandatory_points,
    net_to_dict,
    sample_contraction,
    sample_positive_contraction,
    save_net,
    with_covering,
)


class TestSampling:
    def test_positive_contraction(self, rng):
        M = FiniteVNAlgebra.standard([3, 1])
        for _ in range(50):
            assert is_member(sample_positive_contraction(M, rng), Target.positive_unit_ball)

    def test_contraction(self, rng):
        for _ in range(50):
            assert op_norm(sample_contraction([2, 2], rng)) <= 1.0

    def test_same_seed_same_bits(self):
        a = sample_positive_contraction([3], 7)
        b = sample_positive_contraction([3], 7)
        assert np.array_equal(a.blocks[0], b.blocks[0])

    def test_scalar_uniform(self, rng):
        values = [sample_positive_contraction([1], rng).blocks[0][0, 0].real for _ in range(10_000)]
        assert kstest(values, "uniform").pvalue > 1e-3


class TestBuildNet:
    def test_two_points(self):
        M = FiniteVNAlgebra.standard([2])
        net = build_net(M, Target.unit_ball, count=2)
        assert op_norm(net[0]) == 0.0
        np.testing.assert_allclose(net[1].embed(), np.eye(2))

    def test_too_small(self):
        with pytest.raises(NetError):
            build_net(FiniteVNAlgebra.standard([1]), "unit_ball", count=1)

    @pytest.mark.parametrize("target", list(Target))
    def test_membership(self, target):
        net = build_net(FiniteVNAlgebra.standard([2, 1]), target, count=40, seed=3)
        assert len(net) == 40
        assert all(is_member(x, target) for x in net)

    def test_amplified_target(self):
        M = FiniteVNAlgebra.standard([2, 1])
        net = build_net(M, Target.positive_unit_ball_2x2, count=16)
        assert net.algebra.block_dims == (4, 2)
        assert net.algebra.base is M

    def test_rank_one_projections(self):
        M = FiniteVNAlgebra.standard([2, 1])
        points = mandatory_points(M, Target.positive_unit_ball)
        assert len(points) == 2 + 3
        ranks = [np.linalg.matrix_rank(x.embed()) for x in points[2:]]
        assert ranks == [1, 1, 1]

    def test_prefix(self):
        M = FiniteVNAlgebra.standard([2])
        small = build_net(M, "unit_ball", 20, seed=5)
        large = build_net(M, "unit_ball", 50, seed=5)
        for a, b in zip(small, large):
            assert np.array_equal(a.blocks[0], b.blocks[0])

    def test_entry_net(self):
        M = FiniteVNAlgebra.standard([2])
        net = build_net(M, Target.positive_unit_ball_2x2, count=10)
        middle = entry_net(net)
        assert len(middle) == 1 + 4 * 10
        assert middle.algebra is M
        with pytest.raises(NetError):
            entry_net(build_net(M, "unit_ball", 4))

    def test_map_net(self, rng):
        M = FiniteVNAlgebra.standard([2, 1])
        psi = AlgebraIsomorphism.random_conjugation(M, rng)
        net = build_net(M, Target.positive_unit_ball_2x2, count=12)
        image = map_net(net, psi)
        assert all(is_member(X, Target.positive_unit_ball_2x2) for X in image)
        np.testing.assert_allclose(image[5].embed(), psi.amplify2()(net[5]).embed())


class TestCovering:
    def test_own_probes(self):
        M = FiniteVNAlgebra.standard([2, 1])
        net = build_net(M, "unit_ball", count=30, seed=11)
        estimate = estimate_covering(net, probes=28, seed=11)
        assert estimate.value == pytest.approx(0.0, abs=1e-12)
        assert estimate.method is CoveringMethod.empirical

    def test_grid(self, scalar):
        net = grid_net(scalar, 11)
        assert net.covering_estimate.value == pytest.approx(0.05)
        assert net.covering_estimate.method is CoveringMethod.certified
        assert estimate_covering(net, probes=500).value <= 0.05 + 1e-12

    def test_grid_lipnorm(self, scalar):
        L = kernel_norm(scalar, 3.0)
        net = grid_net(scalar, 21, L)
        assert net.covering_estimate.value == pytest.approx(3.0 * 0.025)
        assert net.covering_estimate.metric is CoveringMetric.lipnorm
        assert estimate_covering(net, L, probes=500).value <= 3.0 * 0.025 + 1e-12

    def test_grid_requires_dimension_one(self):
        with pytest.raises(NetError):
            grid_net(FiniteVNAlgebra.diagonal(2), 5)

    def test_more_points_smaller_radius(self):
        M = FiniteVNAlgebra.standard([1, 1])
        coarse = estimate_covering(build_net(M, "positive_unit_ball", 8, seed=2), probes=200)
        fine = estimate_covering(build_net(M, "positive_unit_ball", 400, seed=2), probes=200)
        assert fine.value <= coarse.value

    def test_probe_count(self):
        with pytest.raises(NetError):
            estimate_covering(build_net(FiniteVNAlgebra.standard([1]), "unit_ball", 4), probes=0)


class TestJson:
    def test_round_trip(self, tmp_path):
        M = FiniteVNAlgebra.standard([2, 1])
        net = with_covering(build_net(M, Target.positive_unit_ball_2x2, 12, seed=4), probes=16)
        path = save_net(net, tmp_path / "net.json")
        loaded = load_net(path, M)
        assert loaded.target is Target.positive_unit_ball_2x2
        assert loaded.seed == 4
        assert loaded.covering_estimate == net.covering_estimate
        for a, b in zip(net, loaded):
            np.testing.assert_array_equal(a.embed(), b.embed())

    def test_format(self, tmp_path):
        net = with_covering(build_net(FiniteVNAlgebra.standard([1]), "unit_ball", 2), probes=4)
        data = json.loads(save_net(net, tmp_path / "net.json").read_text())
        assert data["target"] == "unit_ball"
        assert data["blocks"] == [[[[0.0, 0.0]]], [[[1.0, 0.0]]]]
        assert data["covering_estimate"]["method"] == "empirical"
        assert data == net_to_dict(net)

    def test_same_seed_identical_file(self, tmp_path):
        M = FiniteVNAlgebra.standard([2])
        a = save_net(build_net(M, "unit_sphere", 16, seed=9), tmp_path / "a.json")
        b = save_net(build_net(M, "unit_sphere", 16, seed=9), tmp_path / "b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_missing_field(self):
        with pytest.raises(NetError):
            load_net({"target": "unit_ball", "seed": 0, "blocks": []})

    def test_unknown_target(self):
        with pytest.raises(NetError):
            load_net({"target": "cube", "seed": 0, "block_dims": [1], "blocks": []})

    def test_unreadable(self, tmp_path):
        with pytest.raises(NetError):
            load_net(tmp_path / "missing.json")
