"""
端到端性质：半径夹逼、同构零距离、三角不等式、对偶还原、核桥直径、自由场压缩与质量连续性
"""
from math import comb

import numpy as np
import pytest

from qghdist.algebra import AlgebraIsomorphism, ElementBatch, FiniteVNAlgebra
from qghdist.common import Target
from qghdist.freefield import (
    FreeFieldConfig,
    TruncatedFock,
    contraction_profile,
    mass_sweep,
    semigroup,
    weyl,
)
from qghdist.freefield.config import DEFAULT_MASSES
from qghdist.ghdist import (
    bridge_diameter_bound,
    compose_bridges,
    estimate_distance,
    iso_bridge,
    kernel_bridge,
    kernel_gap_certified,
    sum_bridge,
)
from qghdist.lipnorm import (
    dual_norm,
    kernel_norm,
    lift2,
    sphere_points,
    tabulated_norm,
    weighted_entry_norm,
)
from qghdist.nets import build_net, entry_net, map_net, with_covering

from .conftest import random_kernel


def _circle(count):
    theta = np.linspace(0, 2 * np.pi, count, endpoint=False)
    return ElementBatch(
        (np.cos(theta)[:, None, None].astype(complex), np.sin(theta)[:, None, None].astype(complex))
    )


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
@pytest.mark.parametrize("seed", range(20))
def test_radius_sandwich(seed):
    rng = np.random.default_rng(seed)
    pair = []
    for _ in range(2):
        k = int(rng.integers(1, 4))
        M = FiniteVNAlgebra.diagonal(k)
        pair.append((M, weighted_entry_norm(M, rng.uniform(0.5, 3.0, k))))
    (M, L_M), (N, L_N) = pair
    nets = (
        build_net(M, Target.positive_unit_ball_2x2, 32, seed),
        build_net(N, Target.positive_unit_ball_2x2, 32, seed),
    )
    est = estimate_distance(M, L_M, N, L_N, [sum_bridge(L_M, L_N)], nets)
    R_M, R_N = L_M.weights.max(), L_N.weights.max()
    assert est.radii == pytest.approx((R_M, R_N))
    assert est.lower >= abs(R_M - R_N) - 1e-9
    assert est.upper <= R_M + R_N + est.net_slack_M + est.net_slack_N + 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_isomorphic_zero_distance(seed, entangled):
    rng = np.random.default_rng(seed)
    T = np.kron(np.diag(rng.uniform(0.5, 2.0, 2)), np.eye(2))
    L = kernel_norm(entangled, T)
    W = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 2)))
    psi = AlgebraIsomorphism.conjugation(entangled, [W])
    net_M = with_covering(
        build_net(entangled, Target.positive_unit_ball_2x2, 512, seed), lift2(L)
    )
    net_N = map_net(net_M, psi)
    est = estimate_distance(
        entangled, L, entangled, L, [iso_bridge(psi, L, L)], (net_M, net_N)
    )
    assert est.lower == 0.0
    assert est.upper <= 2 * max(est.net_slack_M, est.net_slack_N) + 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_net_triangle(seed, entangled):
    rng = np.random.default_rng(seed)
    L1, L2, L3 = (kernel_norm(entangled, random_kernel(rng, 4)) for _ in range(3))
    net = build_net(entangled, Target.positive_unit_ball_2x2, 48, seed)
    nets = (net, net)
    radii = (1.0, 1.0)

    def upper(La, Lb, bridges):
        return estimate_distance(
            entangled, La, entangled, Lb, bridges, nets, radii=radii, certified_caps=False
        )

    e12 = upper(L1, L2, [kernel_bridge(None, None, None, L1, L2)])
    e23 = upper(L2, L3, [kernel_bridge(None, None, None, L2, L3)])
    J13 = compose_bridges(
        kernel_bridge(None, None, None, L1, L2),
        kernel_bridge(None, None, None, L2, L3),
        entry_net(net),
    )
    e13 = upper(L1, L3, [J13])
    slack = max(e.net_slack_M for e in (e12, e23, e13))
    assert e13.upper <= e12.upper + e23.upper + 3 * slack


class TestDualityRoundTrip:
    @pytest.mark.parametrize("c", [0.25, 1.0, 3.5])
    def test_one_dimensional(self, c):
        M = FiniteVNAlgebra.standard([1], omega=[1.0])
        L = kernel_norm(M, c)
        table = tabulated_norm(M, sphere_points(L, [M.identity()]))
        back = sphere_points(table, [M.identity()])
        for z in (1.0, -2.0, 0.3 + 0.4j):
            x = M.element([np.array([[z]])])
            assert dual_norm(table, x, back) == pytest.approx(c * abs(z), abs=1e-8)

    def test_two_dimensional(self):
        count = 10_000
        M = FiniteVNAlgebra.diagonal(2, omega=np.ones(2))
        L = kernel_norm(M, [1.0, 2.0])
        grid = _circle(count)
        # 等角网格在单位圆上的覆盖半径：半个步长对应的弦长
        covering = 2 * np.sin(np.pi / (2 * count))
        table = tabulated_norm(M, sphere_points(L, grid))
        back = sphere_points(table, grid)
        for x1, x2 in [(1.0, 0.0), (0.3, -0.7), (-1.5, 2.0)]:
            x = M.element([np.array([[x1]]), np.array([[x2]])])
            assert dual_norm(table, x, back) == pytest.approx(L(x), abs=2 * covering * L(x))


def test_kernel_bridge_dominance(rng, entangled):
    sphere = build_net(entangled, Target.unit_sphere, 64, 0)
    for _ in range(100):
        L1 = kernel_norm(entangled, random_kernel(rng, 4))
        L2 = kernel_norm(entangled, random_kernel(rng, 4))
        J = kernel_bridge(None, None, None, L1, L2)
        assert bridge_diameter_bound(J, sphere) <= kernel_gap_certified(
            L1.T, L2.T, entangled.omega
        ) + 1e-12


def test_free_field_contraction():
    fock = TruncatedFock()
    profile = contraction_profile(fock, DEFAULT_MASSES)
    inverse = np.diag(1 / np.diag(semigroup(fock, 0.0)))
    for m, row in zip(DEFAULT_MASSES, profile.itertuples()):
        ratio = np.diag(semigroup(fock, m) @ inverse).real
        assert row.max_entry == pytest.approx(ratio.max())
        assert row.max_entry == 1.0
        assert row.vacuum_entry == 1.0
        assert row.argmax == 0


def test_mass_continuity():
    config = FreeFieldConfig(net_count=128)
    df = mass_sweep(config, 0.0, progress=False)
    m = df["m_prime"].values
    bound = df["certified_bound"].values
    assert list(m) == sorted(DEFAULT_MASSES)
    assert (np.diff(bound) > 0).all()
    assert (bound <= config.beta * config.fock.cutoff * m + 1e-12).all()
    assert (df["qgh_upper"].values <= bound + 1e-9).all()


class TestFockAndWeyl:
    @pytest.mark.parametrize("modes", range(1, 5))
    def test_dimensions(self, modes):
        for cutoff in range(7):
            assert TruncatedFock((1.0,) * modes, cutoff).dim == comb(modes + cutoff, modes)

    def test_unitarity(self, rng):
        fock = TruncatedFock()
        for _ in range(50):
            f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            W = weyl(fock, f)
            assert np.abs(W @ W.conj().T - np.eye(fock.dim)).max() <= 1e-12
