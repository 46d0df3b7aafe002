"""
verify 子命令的检验组

每个检验组返回 ``(检验名, 是否通过)`` 列表，同一种子下结果完全确定
"""
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm.auto import tqdm

from ..algebra import (
    AlgebraIsomorphism,
    FiniteVNAlgebra,
    amplify2,
    canonical_decomposition,
    direct_sum,
    entry,
    generated_algebra,
    is_positive_contraction,
    op_norm,
)
from ..common.config import Target
from ..freefield import (
    TruncatedFock,
    energies,
    free_lip_norm,
    linear_envelope,
    local_algebra,
    mass_gap_bound,
    semigroup,
    weyl,
)
from ..ghdist import (
    SumBridge,
    bridge_diameter_bound,
    check_bridge,
    compose_bridges,
    coupler_bridge,
    estimate_distance,
    hausdorff_matrix,
    iso_bridge,
    kernel_bridge,
    kernel_gap_certified,
    sum_bridge,
    uniqueness_gap,
)
from ..lipnorm import (
    dual_norm,
    evaluate_many,
    kernel_norm,
    lift2,
    predual_norm,
    sphere_points,
    tabulated_norm,
    weighted_entry_norm,
)
from ..nets import build_net, entry_net, estimate_covering, grid_net, is_member
from ..utils import as_rng, to_dataframe
from .config import (
    VERIFY_BRIDGE_SAMPLES,
    VERIFY_COLUMNS,
    VERIFY_NET_COUNT,
    VERIFY_SAMPLES,
    VERIFY_SUITES,
    VerifyLevel,
)

Checks = List[Tuple[str, bool]]

TOL = 1e-9


def _random_kernel(M: FiniteVNAlgebra, rng: np.random.Generator):
    n = M.ambient_dim
    T = np.diag(rng.uniform(0.5, 2.0, n)) + 0.1 * rng.standard_normal((n, n))
    return kernel_norm(M, T)


def _entangled_algebra() -> FiniteVNAlgebra:
    # M_2 以重数 2 作用在 ℂ⁴ 上，Ω 为极大纠缠向量
    omega = np.zeros(4, dtype=complex)
    omega[0] = omega[3] = 1 / np.sqrt(2)
    return FiniteVNAlgebra((2,), (2,), (np.eye(4, dtype=complex),), omega)


def algebra_suite(rng: np.random.Generator, level: VerifyLevel) -> Checks:
    samples = VERIFY_SAMPLES[level]
    M = FiniteVNAlgebra.standard([2, 1])
    S = direct_sum(M, FiniteVNAlgebra.standard([1]))
    checks = [
        ("standard_embedding", M.check_embedding()),
        ("amplified_embedding", amplify2(M).check_embedding()),
        ("direct_sum_embedding", S.check_embedding()),
        ("diagonal_separating", FiniteVNAlgebra.diagonal(3).is_separating(np.ones(3))),
        ("full_matrix_not_separating", not FiniteVNAlgebra.full_matrix(2).is_separating([1, 0])),
    ]
    ok_product, ok_decomposition = True, True
    for _ in range(samples):
        x, y = M.random_element(rng), M.random_element(rng)
        ok_product &= np.allclose(M.embed(x @ y), M.embed(x) @ M.embed(y), atol=TOL)
        x = x / (op_norm(x) * 1.01)
        parts = canonical_decomposition(x)
        total = sum((c * p for c, p in zip((1, -1, 1j, -1j), parts)), M.zero())
        ok_decomposition &= op_norm(total - x) <= TOL and all(
            is_positive_contraction(p) for p in parts
        )
    checks += [("embedding_multiplicative", bool(ok_product))]
    checks += [("canonical_decomposition", bool(ok_decomposition))]
    fock = TruncatedFock((1.0,), 1)
    full = generated_algebra([weyl(fock, [1.0]), weyl(fock, [1j])], seed=rng)
    checks.append(("generated_full_matrix", full.block_dims == (2,)))
    return checks


def lipnorm_suite(rng: np.random.Generator, level: VerifyLevel) -> Checks:
    samples = VERIFY_SAMPLES[level]
    M = _entangled_algebra()
    L = _random_kernel(M, rng)
    xs = [M.random_element(rng) for _ in range(samples)]
    ys = [M.random_element(rng) for _ in range(samples)]
    Lx, Ly = evaluate_many(L, xs), evaluate_many(L, ys)
    Lsum = evaluate_many(L, [x + y for x, y in zip(xs, ys)])
    c = complex(*rng.standard_normal(2))
    Lc = evaluate_many(L, [c * x for x in xs])
    L2 = lift2(L)
    X = amplify2(M).random_element(rng)
    lifted = max(L(entry(X, i, j)) for i in range(2) for j in range(2))
    C = FiniteVNAlgebra.standard([1], omega=[1.0])
    Lc1 = kernel_norm(C, 1.7)
    ball = sphere_points(Lc1, [C.identity()])
    table = tabulated_norm(C, ball)
    predual = [predual_norm(Lc1, C.identity(), ball)]
    back = sphere_points(table, [C.identity()])
    return [
        ("subadditive", bool((Lsum <= Lx + Ly + TOL).all())),
        ("homogeneous", bool(np.allclose(Lc, abs(c) * Lx, atol=TOL))),
        ("positive", bool((Lx > 0).all())),
        ("lift2_is_entry_max", abs(L2(X) - lifted) <= TOL),
        ("predual_scalar", abs(predual[0] - 1 / 1.7) <= TOL),
        ("duality_round_trip", abs(dual_norm(table, C.identity(), back) - 1.7) <= 1e-8),
    ]


def nets_suite(rng: np.random.Generator, level: VerifyLevel) -> Checks:
    count = VERIFY_NET_COUNT[level]
    M = FiniteVNAlgebra.standard([2, 1])
    seed = int(rng.integers(2 ** 31))
    checks = []
    for target in Target:
        net = build_net(M, target, count, seed)
        checks.append((f"membership_{target.value}", all(is_member(x, target) for x in net)))
    small = build_net(M, Target.unit_ball, count // 2, seed)
    large = build_net(M, Target.unit_ball, count, seed)
    prefix = all(
        np.allclose(a.embed(), b.embed()) for a, b in zip(small, list(large)[: len(small)])
    )
    checks.append(("prefix_property", prefix))
    own = estimate_covering(large, probes=count - 2, seed=seed)
    checks.append(("own_probes_zero", own.value <= TOL))
    C = FiniteVNAlgebra.standard([1])
    checks.append(("grid_certified", abs(grid_net(C, 11).covering_estimate.value - 0.05) <= TOL))
    return checks


class _InjectedBridge(SumBridge):
    """右侧取 2 L_N 的和桥，用于故障注入"""

    def pair_matrix(self, xs, ys):
        a = evaluate_many(self.left, xs)
        b = evaluate_many(self.right, ys)
        return a[:, None] + 2 * b[None, :]


def bridge_suite(
    rng: np.random.Generator, level: VerifyLevel, inject: Optional[str] = None
) -> Checks:
    samples = VERIFY_BRIDGE_SAMPLES[level]
    M = _entangled_algebra()
    L1, L2 = _random_kernel(M, rng), _random_kernel(M, rng)
    W = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 2)))
    psi = AlgebraIsomorphism.conjugation(M, [W])
    L_iso = kernel_norm(M, np.kron(np.diag([1.0, 0.5]), np.eye(2)))
    net = build_net(M, Target.unit_ball, VERIFY_NET_COUNT[level], int(rng.integers(2 ** 31)))
    bridges = [
        sum_bridge(L1, L2),
        kernel_bridge(None, None, None, L1, L2),
        iso_bridge(psi, L_iso, L_iso),
        coupler_bridge(np.eye(4), L1, L2),
        compose_bridges(
            kernel_bridge(None, None, None, L1, L2), kernel_bridge(None, None, None, L2, L1), net
        ),
    ]
    if inject == "bridge":
        bridges.append(_InjectedBridge(L1, L2, name="injected"))
    return [
        (f"axioms_{J.name}", bool(check_bridge(J, samples, rng)["passed"])) for J in bridges
    ]


def ghdist_suite(rng: np.random.Generator, level: VerifyLevel) -> Checks:
    samples = VERIFY_SAMPLES[level]
    A, B, C = (rng.standard_normal((8, 2)) for _ in range(3))

    def dist(P, Q):
        return np.linalg.norm(P[:, None] - Q[None], axis=-1)

    hAB, hBA = hausdorff_matrix(dist(A, B)), hausdorff_matrix(dist(B, A))
    hAC, hBC = hausdorff_matrix(dist(A, C)), hausdorff_matrix(dist(B, C))
    checks = [("hausdorff_symmetric", abs(hAB - hBA) <= TOL)]
    checks.append(("hausdorff_triangle", hAC <= hAB + hBC + TOL))

    M = _entangled_algebra()
    sphere = build_net(M, Target.unit_sphere, VERIFY_NET_COUNT[level], int(rng.integers(2 ** 31)))
    dominated = True
    for _ in range(max(1, samples // 4)):
        L1, L2 = _random_kernel(M, rng), _random_kernel(M, rng)
        J = kernel_bridge(None, None, None, L1, L2)
        dominated &= bridge_diameter_bound(J, sphere) <= kernel_gap_certified(
            L1.T, L2.T, M.omega
        ) + 1e-12
    checks.append(("kernel_dominance", bool(dominated)))

    # 网上的三角不等式：复合桥的中间网取 X 网全部矩阵元
    L1, L2, L3 = (_random_kernel(M, rng) for _ in range(3))
    X = build_net(
        M, Target.positive_unit_ball_2x2, VERIFY_NET_COUNT[level], int(rng.integers(2 ** 31))
    )

    def upper(La, Lb, J):
        return estimate_distance(
            M, La, M, Lb, [J], (X, X), radii=(1.0, 1.0), certified_caps=False
        )

    e12 = upper(L1, L2, kernel_bridge(None, None, None, L1, L2))
    e23 = upper(L2, L3, kernel_bridge(None, None, None, L2, L3))
    J13 = compose_bridges(
        kernel_bridge(None, None, None, L1, L2),
        kernel_bridge(None, None, None, L2, L3),
        entry_net(X),
    )
    e13 = upper(L1, L3, J13)
    slack = max(e.net_slack_M for e in (e12, e23, e13))
    checks.append(("net_triangle", bool(e13.upper <= e12.upper + e23.upper + 3 * slack + TOL)))

    # J(x, -y) = J(x, -y') = 0 时 y = y'
    W = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 2)))
    psi = AlgebraIsomorphism.conjugation(M, [W])
    L_iso = kernel_norm(M, np.kron(np.diag([1.0, 0.5]), np.eye(2)))
    J_iso = iso_bridge(psi, L_iso, L_iso)
    unique = True
    for _ in range(samples):
        x, y2 = M.random_element(rng), M.random_element(rng)
        y = psi(x)
        gap, bound = uniqueness_gap(J_iso, x, y, y2)
        unique &= J_iso(x, -y) <= TOL and gap <= bound + TOL
        gap, bound = uniqueness_gap(J_iso, x, y, y)
        unique &= gap <= TOL and bound <= TOL
    checks.append(("uniqueness_at_zero", bool(unique)))

    C1 = FiniteVNAlgebra.standard([1], omega=[1.0])
    L_a, L_b = weighted_entry_norm(C1, [1.0]), weighted_entry_norm(C1, [2.0])
    count = VERIFY_NET_COUNT[level]
    nets = (
        build_net(C1, Target.positive_unit_ball_2x2, count, 0),
        build_net(C1, Target.positive_unit_ball_2x2, count, 1),
    )
    est = estimate_distance(C1, L_a, C1, L_b, [sum_bridge(L_a, L_b)], nets)
    checks.append(("radius_sandwich", est.lower >= 1 - TOL and est.lower <= est.upper))
    return checks


def freefield_suite(rng: np.random.Generator, level: VerifyLevel) -> Checks:
    samples = VERIFY_SAMPLES[level]
    max_cutoff = 4 if level is VerifyLevel.quick else 6
    dims = all(
        TruncatedFock((1.0,) * K, N).dim == comb(N + K, K)
        for K in range(1, 5)
        for N in range(max_cutoff + 1)
    )
    fock = TruncatedFock((0.5, 1.0), 3)
    unitary = True
    for _ in range(samples):
        f = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        W = weyl(fock, f)
        unitary &= np.abs(W @ W.conj().T - np.eye(fock.dim)).max() <= 1e-12
    contraction = all(
        np.diag(semigroup(fock, m, 1.0)).real.max() <= 1.0
        and (energies(fock, m) >= energies(fock, 0.0)).all()
        for m in (0.0, 0.25, 1.0)
    )
    envelope = all(
        mass_gap_bound(fock, 0.0, m, 1.0) <= linear_envelope(fock, 0.0, m, 1.0) + 1e-15
        for m in (0.03125, 0.125, 0.5, 1.0)
    )
    algebra = local_algebra(fock, [[0.6, 0.3]], seed=rng)
    ordered = True
    if algebra.separating:
        L0 = free_lip_norm(fock, 0.0, 1.0, algebra)
        Lm = free_lip_norm(fock, 0.7, 1.0, algebra)
        xs = [algebra.random_element(rng) for _ in range(samples)]
        ordered = bool((evaluate_many(Lm, xs) <= evaluate_many(L0, xs) + TOL).all())
    return [
        ("fock_dimensions", dims),
        ("weyl_unitary", bool(unitary)),
        ("semigroup_contraction", contraction),
        ("mass_gap_envelope", envelope),
        ("separating_local_algebra", algebra.separating),
        ("lipnorm_ordering", ordered),
    ]


SUITES: Dict[str, Callable] = {
    "algebra": algebra_suite,
    "lipnorm": lipnorm_suite,
    "nets": nets_suite,
    "bridge": bridge_suite,
    "ghdist": ghdist_suite,
    "freefield": freefield_suite,
}


@to_dataframe(VERIFY_COLUMNS)
def run_suites(
    seed: int,
    level: VerifyLevel = VerifyLevel.quick,
    inject: Optional[str] = None,
    suites: Sequence[str] = VERIFY_SUITES,
    progress: bool = True,
):
    """
    依次运行检验组

    Returns
    -------
    DataFrame
        列为 ``suite, passed, total, failures``，``failures`` 为未通过的检验名
    """
    level = VerifyLevel(level)
    rows = []
    for name in tqdm(suites, disable=not progress):
        # 每个检验组使用独立的随机流，单独运行时结果不变
        rng = as_rng([seed, VERIFY_SUITES.index(name)])
        if name == "bridge":
            checks = SUITES[name](rng, level, inject)
        else:
            checks = SUITES[name](rng, level)
        failures = [check for check, ok in checks if not ok]
        rows.append(
            {
                "suite": name,
                "passed": len(checks) - len(failures),
                "total": len(checks),
                "failures": ",".join(failures),
            }
        )
    return rows
