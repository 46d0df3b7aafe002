from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import expm

from ..algebra import (
    AlgebraElement,
    AlgebraIsomorphism,
    ElementBatch,
    FiniteVNAlgebra,
    as_batch,
)
from ..common.config import ENTRIES, BridgeKind, NormKind
from ..common.exceptions import BridgeError
from ..lipnorm import DualLipNorm, evaluate_many, features, pairwise
from ..lipnorm.core import REDUCERS, Points
from ..nets import Net, entry_net
from ..utils import SeedLike, as_rng, chunked_distances, min_plus, to_dataframe
from .config import (
    CHECK_SAMPLES,
    COUPLER_BUDGET,
    COUPLER_MIN_STEP,
    COUPLER_RESTARTS,
    COUPLER_STEP,
    COUPLER_TRACE_COLUMNS,
    ISOMETRY_TOL,
    JUNCTION_TOL,
    RESTRICTION_TOL,
)


class Bridge:
    """
    M ⊕ N 上的桥半范数 J，限制到两侧分别为 L_M 与 L_N

    子类实现 :meth:`pair_matrix`，其余运算都由它导出
    """

    kind: BridgeKind

    def __init__(self, left: DualLipNorm, right: DualLipNorm, name: Optional[str] = None):
        self.left = left
        self.right = right
        self.name = name or self.kind.value

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"

    def pair_matrix(self, xs: Points, ys: Points) -> np.ndarray:
        """矩阵 ``D[i, j] = J(x_i, -y_j)``"""
        raise NotImplementedError

    def paired(self, xs: Points, ys: Points) -> np.ndarray:
        """逐对取值 ``J(x_i, -y_i)``"""
        xb, yb = as_batch(xs), as_batch(ys)
        if len(xb) != len(yb):
            raise BridgeError("两组元素个数不一致")
        return np.array(
            [
                self.pair_matrix(xb.slice(i, i + 1), yb.slice(i, i + 1))[0, 0]
                for i in range(len(xb))
            ]
        )

    def __call__(self, x: AlgebraElement, y: AlgebraElement) -> float:
        return float(self.pair_matrix([x], [-y])[0, 0])

    def restrict_left(self, xs: Points) -> np.ndarray:
        """J(x, 0)"""
        return self.pair_matrix(xs, [self.right.algebra.zero()])[:, 0]

    def restrict_right(self, ys: Points) -> np.ndarray:
        """J(0, y)"""
        return self.pair_matrix([self.left.algebra.zero()], as_batch(ys).scaled(-1))[0]

    def lifted_pair_matrix(self, Xs: Points, Ys: Points) -> np.ndarray:
        """
        2×2 放大上的距离矩阵 ``D[i, j] = max_{ab} J(X_i[a, b], -Y_j[a, b])``
        """
        Xb, Yb = as_batch(Xs), as_batch(Ys)
        return np.max(
            [self.pair_matrix(Xb.entry(a, b), Yb.entry(a, b)) for a, b in ENTRIES],
            axis=0,
        )

    def lifted_paired(self, Xs: Points, Ys: Points) -> np.ndarray:
        Xb, Yb = as_batch(Xs), as_batch(Ys)
        return np.max(
            [self.paired(Xb.entry(a, b), Yb.entry(a, b)) for a, b in ENTRIES], axis=0
        )


class SumBridge(Bridge):
    """J(x, y) = L_M(x) + L_N(y)，对任意一对范数都有效"""

    kind = BridgeKind.sum

    def pair_matrix(self, xs: Points, ys: Points) -> np.ndarray:
        a = evaluate_many(self.left, xs)
        b = evaluate_many(self.right, ys)
        return a[:, None] + b[None, :]

    def paired(self, xs: Points, ys: Points) -> np.ndarray:
        return evaluate_many(self.left, xs) + evaluate_many(self.right, ys)


class _FeatureBridge(Bridge):
    """J(x, y) = ‖F_M(x) + F_N(y)‖₂，F 为线性特征映射"""

    def left_features(self, xs: Points) -> np.ndarray:
        raise NotImplementedError

    def right_features(self, ys: Points) -> np.ndarray:
        raise NotImplementedError

    def pair_matrix(self, xs: Points, ys: Points) -> np.ndarray:
        return chunked_distances(
            self.left_features(xs), self.right_features(ys), REDUCERS["l2"]
        )

    def paired(self, xs: Points, ys: Points) -> np.ndarray:
        diff = self.left_features(xs) - self.right_features(ys)
        return REDUCERS["l2"](diff)


class KernelBridge(_FeatureBridge):
    """同一代数、同一 Ω 上的 J(x, y) = ‖T x Ω + S y Ω‖"""

    kind = BridgeKind.kernel

    def left_features(self, xs: Points) -> np.ndarray:
        return features(self.left, xs)

    def right_features(self, ys: Points) -> np.ndarray:
        return features(self.right, ys)

    @property
    def T(self) -> np.ndarray:
        return self.left.T

    @property
    def S(self) -> np.ndarray:
        return self.right.T

    @property
    def omega(self) -> np.ndarray:
        return self.left.omega


class CouplerBridge(_FeatureBridge):
    """J(x, y) = ‖U T_M x Ω_M + T_N y Ω_N‖，U 为环境空间之间的等距"""

    kind = BridgeKind.coupler

    def __init__(
        self,
        U: np.ndarray,
        left: DualLipNorm,
        right: DualLipNorm,
        name: Optional[str] = None,
    ):
        super().__init__(left, right, name)
        self.U = U

    def left_features(self, xs: Points) -> np.ndarray:
        return features(self.left, xs) @ self.U.T

    def right_features(self, ys: Points) -> np.ndarray:
        return features(self.right, ys)


class IsoBridge(Bridge):
    """J(x, y) = L_N(ψ(x) + y)，即 R = N ⊕ N 上的构造"""

    kind = BridgeKind.iso

    def __init__(
        self,
        psi: AlgebraIsomorphism,
        left: DualLipNorm,
        right: DualLipNorm,
        name: Optional[str] = None,
    ):
        super().__init__(left, right, name)
        self.psi = psi

    def pair_matrix(self, xs: Points, ys: Points) -> np.ndarray:
        return pairwise(self.right, self.psi.apply_batch(as_batch(xs)), ys)


class ComposedBridge(Bridge):
    """
    J_13(x, z) = min_{y ∈ 中间网} J_12(x, -y) + J_23(y, z)

    中间网总是包含 0，因此两侧的限制与 L_1、L_3 完全一致
    """

    kind = BridgeKind.composed

    def __init__(
        self,
        first: Bridge,
        second: Bridge,
        middle: ElementBatch,
        name: Optional[str] = None,
    ):
        super().__init__(
            first.left, second.right, name or f"composed({first.name},{second.name})"
        )
        self.first = first
        self.second = second
        self.middle = middle

    def pair_matrix(self, xs: Points, ys: Points) -> np.ndarray:
        return min_plus(
            self.first.pair_matrix(xs, self.middle),
            self.second.pair_matrix(self.middle, ys),
        )


# ----------------------------------------------------------------------
# 构造
def sum_bridge(L_M: DualLipNorm, L_N: DualLipNorm) -> SumBridge:
    """
    和桥 J(x, y) = L_M(x) + L_N(y)

    Examples
    --------
    >>> M = FiniteVNAlgebra.standard([1], omega=[1])
    >>> J = sum_bridge(kernel_norm(M, 1.0), kernel_norm(M, 2.0))
    >>> J(M.identity(), M.zero())
    1.0
    """
    return SumBridge(L_M, L_N)


def _check_kernel(L: DualLipNorm, T, side: str) -> None:
    if L.kind is not NormKind.kernel:
        raise BridgeError(f"{side} 侧范数不是核范数")
    if T is None:
        return
    T = np.asarray(T, dtype=complex)
    if T.ndim == 0:
        T = T * np.eye(L.algebra.ambient_dim)
    elif T.ndim == 1:
        T = np.diag(T)
    if T.shape != L.T.shape or np.abs(T - L.T).max() > ISOMETRY_TOL:
        raise BridgeError(f"{side} 侧核算子与范数不一致")


def kernel_bridge(
    T,
    S,
    omega: Optional[np.ndarray],
    L1: DualLipNorm,
    L2: DualLipNorm,
) -> KernelBridge:
    """
    核桥 J(x, y) = ‖T x Ω + S y Ω‖

    Parameters
    ----------
    T, S : Union[None, complex, ndarray]
        两个核算子，``None`` 表示直接使用范数中的算子
    omega : ndarray, optional
        公共向量 Ω，``None`` 表示使用范数中的 Ω
    L1, L2 : DualLipNorm
        同一代数上的核范数 ‖T·Ω‖ 与 ‖S·Ω‖

    Returns
    -------
    KernelBridge

    Raises
    ------
    BridgeError
        范数不是核范数、代数不同、Ω 不同或者核算子与范数不一致
    """
    _check_kernel(L1, T, "左")
    _check_kernel(L2, S, "右")
    if not L1.algebra.compatible(L2.algebra):
        raise BridgeError("核桥要求两个范数位于同一代数上")
    if L1.omega.shape != L2.omega.shape or np.abs(L1.omega - L2.omega).max() > ISOMETRY_TOL:
        raise BridgeError("核桥要求两个范数使用同一个 Ω")
    if omega is not None:
        omega = np.asarray(omega, dtype=complex).reshape(-1)
        if omega.shape != L1.omega.shape or np.abs(omega - L1.omega).max() > ISOMETRY_TOL:
            raise BridgeError("给定的 Ω 与范数中的 Ω 不一致")
    return KernelBridge(L1, L2)


def iso_bridge(
    psi: AlgebraIsomorphism,
    L_N: DualLipNorm,
    L_M: Optional[DualLipNorm] = None,
    tol: float = ISOMETRY_TOL,
) -> IsoBridge:
    """
    同构桥 J(x, y) = L_N(ψ(x) + y)

    Parameters
    ----------
    psi : AlgebraIsomorphism
        * 同构 ψ: M → N
    L_N : DualLipNorm
        N 上的范数
    L_M : DualLipNorm, optional
        M 上的范数，默认与 L_N 相同（ψ 为自同构时）
    tol : float, optional
        ψ 保范数检验的容差

    Returns
    -------
    IsoBridge

    Raises
    ------
    BridgeError
        ψ 不是 * 同构，或者在 M 的基上 L_N(ψ(b)) ≠ L_M(b)
    """
    if not psi.check():
        raise BridgeError("ψ 的块共轭不是酉矩阵")
    if not psi.target.compatible(L_N.algebra):
        raise BridgeError("ψ 的值域与 L_N 的代数不一致")
    if L_M is None:
        if not psi.source.compatible(L_N.algebra):
            raise BridgeError("未给出 L_M，且 ψ 不是 L_N 所在代数的自同构")
        L_M = L_N
    elif not psi.source.compatible(L_M.algebra):
        raise BridgeError("ψ 的定义域与 L_M 的代数不一致")
    basis = as_batch(psi.source.basis())
    pushed = evaluate_many(L_N, psi.apply_batch(basis))
    own = evaluate_many(L_M, basis)
    if np.abs(pushed - own).max() > tol * max(1.0, float(own.max())):
        raise BridgeError("ψ 不保持 Lip 范数")
    return IsoBridge(psi, L_M, L_N)


def coupler_bridge(
    U: np.ndarray, L_M: DualLipNorm, L_N: DualLipNorm, tol: float = ISOMETRY_TOL
) -> CouplerBridge:
    """
    等距耦合桥 J(x, y) = ‖U T_M x Ω_M + T_N y Ω_N‖，适用于不同环境空间上的代数

    Parameters
    ----------
    U : ndarray
        形状为 ``(n_N, n_M)`` 的等距，标量表示 1 维空间上的相位
    L_M, L_N : DualLipNorm
        核范数

    Raises
    ------
    BridgeError
        U 不是等距，或范数不是核范数
    """
    _check_kernel(L_M, None, "左")
    _check_kernel(L_N, None, "右")
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    n_M, n_N = L_M.algebra.ambient_dim, L_N.algebra.ambient_dim
    if U.shape != (n_N, n_M):
        raise BridgeError(f"U 的形状应为 {(n_N, n_M)}，实际为 {U.shape}")
    if np.abs(U.conj().T @ U - np.eye(n_M)).max() > tol:
        raise BridgeError("U 不是等距：U*U ≠ I")
    return CouplerBridge(U, L_M, L_N)


def compose_bridges(
    J12: Bridge, J23: Bridge, middle_net: Points, tol: float = JUNCTION_TOL
) -> ComposedBridge:
    """
    用中间网上的最小值代替下确界来复合两个桥

    Parameters
    ----------
    J12 : Bridge
        M_1 ⊕ M_2 上的桥
    J23 : Bridge
        M_2 ⊕ M_3 上的桥
    middle_net : Union[Net, ElementBatch, Sequence[AlgebraElement]]
        M_2 中的点；2×2 目标的网会换成其全部位置组成的网（:func:`entry_net`）

    Returns
    -------
    ComposedBridge
        取值不小于精确下确界，因此由它得到的上界仍然有效

    Raises
    ------
    BridgeError
        J12 的右侧范数与 J23 的左侧范数不一致
    """
    L2, L2b = J12.right, J23.left
    if not L2.algebra.compatible(L2b.algebra):
        raise BridgeError("复合处两个桥的中间代数不同")
    basis = L2.algebra.basis()
    a, b = evaluate_many(L2, basis), evaluate_many(L2b, basis)
    if np.abs(a - b).max() > tol * max(1.0, float(a.max())):
        raise BridgeError("复合处两个桥的中间范数不一致")
    if isinstance(middle_net, Net) and middle_net.algebra.base is not None:
        middle_net = entry_net(middle_net)
    middle = as_batch(middle_net)
    if tuple(X.shape[-1] for X in middle.blocks) != L2.algebra.block_dims:
        raise BridgeError("中间网不在中间代数中")
    return ComposedBridge(J12, J23, middle.with_zero())


# ----------------------------------------------------------------------
# 检验
def check_bridge(
    J: Bridge, samples: int = CHECK_SAMPLES, seed: SeedLike = None, tol: float = RESTRICTION_TOL
) -> pd.Series:
    """
    随机检验桥的半范数公理与两侧限制

    Parameters
    ----------
    J : Bridge
        桥
    samples : int, optional
        随机元素个数，默认为 ``100``
    seed : Union[None, int, Generator], optional
        随机种子

    Returns
    -------
    Series
        各项检验的最大偏差，以及总体是否通过（``passed``）

    Notes
    -----
    复合桥取网上最小值，不一定满足次可加与齐次，只检验限制与 J(0, 0) = 0
    """
    rng = as_rng(seed)
    M, N = J.left.algebra, J.right.algebra
    xs = [M.random_element(rng) for _ in range(samples)]
    ys = [N.random_element(rng) for _ in range(samples)]
    xb, yb = as_batch(xs), as_batch(ys)
    Lx, Ly = evaluate_many(J.left, xb), evaluate_many(J.right, yb)
    scale = max(1.0, float(Lx.max()), float(Ly.max()))
    report = {
        "restrict_left": float(np.abs(J.restrict_left(xb) - Lx).max()),
        "restrict_right": float(np.abs(J.restrict_right(yb) - Ly).max()),
        "zero": abs(J(M.zero(), N.zero())),
        "homogeneity": 0.0,
        "subadditivity": 0.0,
    }
    if J.kind is not BridgeKind.composed:
        c = complex(*rng.standard_normal(2))
        base = J.paired(xb, yb.scaled(-1))
        scaled = J.paired(xb.scaled(c), yb.scaled(-c))
        report["homogeneity"] = float(np.abs(scaled - abs(c) * base).max())
        shift = np.roll(np.arange(samples), 1)
        x2 = ElementBatch(tuple(X[shift] for X in xb.blocks))
        y2 = ElementBatch(tuple(Y[shift] for Y in yb.blocks))
        total = J.paired(
            ElementBatch(tuple(a + b for a, b in zip(xb.blocks, x2.blocks))),
            ElementBatch(tuple(-(a + b) for a, b in zip(yb.blocks, y2.blocks))),
        )
        parts = base + J.paired(x2, y2.scaled(-1))
        report["subadditivity"] = float(max(0.0, (total - parts).max()))
    report["passed"] = all(v <= tol * scale for v in report.values())
    return pd.Series(report, name=J.name)


def uniqueness_gap(
    J: Bridge, x: AlgebraElement, y: AlgebraElement, y2: AlgebraElement
) -> Tuple[float, float]:
    """
    「至多一个 y」的网形式：返回 (L_N(y - y'), J(x, -y) + J(x, -y'))，前者不超过后者
    """
    gap = float(evaluate_many(J.right, [y - y2])[0])
    return gap, J(x, -y) + J(x, -y2)


# ----------------------------------------------------------------------
# 耦合等距的优化
def _skew_basis(n: int) -> list:
    basis = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1j
        basis.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j], E[j, i] = 1, -1
            basis.append(E)
            F = np.zeros((n, n), dtype=complex)
            F[i, j] = F[j, i] = 1j
            basis.append(F)
    return basis


def _random_isometry(n_N: int, n_M: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n_N, n_M)) + 1j * rng.standard_normal((n_N, n_M))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def optimize_coupler(
    L_M: DualLipNorm,
    L_N: DualLipNorm,
    net_M: Net,
    net_N: Net,
    budget: int = COUPLER_BUDGET,
    restarts: int = COUPLER_RESTARTS,
    seed: SeedLike = None,
) -> Tuple[CouplerBridge, pd.DataFrame]:
    """
    在等距 U = exp(K) U_0（K 反 Hermite）上最小化网上的 Hausdorff 距离

    Parameters
    ----------
    L_M, L_N : DualLipNorm
        核范数，``n_M ≤ n_N``
    net_M, net_N : Net
        2×2 放大代数正部的网
    budget : int, optional
        目标函数求值次数上限，默认为 ``200``
    restarts : int, optional
        随机重启次数，第一次从 U_0 = [I; 0] 出发，默认为 ``4``
    seed : Union[None, int, Generator], optional
        随机种子

    Returns
    -------
    Tuple[CouplerBridge, DataFrame]
        最优耦合桥，以及列为 ``restart, evaluation, objective, best`` 的优化轨迹

    Notes
    -----
    任意 U 都给出有效的上界，优化只影响上界的紧度
    """
    from .estimate import hausdorff_matrix

    _check_kernel(L_M, None, "左")
    _check_kernel(L_N, None, "右")
    n_M, n_N = L_M.algebra.ambient_dim, L_N.algebra.ambient_dim
    if n_N < n_M:
        raise BridgeError(f"不存在 ℂ^{n_M} → ℂ^{n_N} 的等距")
    if budget < 1:
        raise BridgeError("求值次数至少为 1")
    rng = as_rng(seed)
    basis = _skew_basis(n_N)
    rows = []
    best_U, best_value = None, np.inf

    def objective(U: np.ndarray) -> float:
        nonlocal best_U, best_value
        value = hausdorff_matrix(
            CouplerBridge(U, L_M, L_N).lifted_pair_matrix(net_M, net_N)
        )
        if value < best_value:
            best_U, best_value = U, value
        rows.append(
            {
                "restart": restart,
                "evaluation": len(rows),
                "objective": value,
                "best": best_value,
            }
        )
        return value

    per_restart = max(1, budget // max(restarts, 1))
    for restart in range(max(restarts, 1)):
        if len(rows) >= budget:
            break
        U0 = np.eye(n_N, n_M, dtype=complex) if restart == 0 else _random_isometry(n_N, n_M, rng)
        stop = min(budget, len(rows) + per_restart)
        K = np.zeros((n_N, n_N), dtype=complex)
        current = objective(U0)
        step = COUPLER_STEP
        while len(rows) < stop and step >= COUPLER_MIN_STEP:
            improved = False
            for E in basis:
                for sign in (1.0, -1.0):
                    if len(rows) >= stop:
                        break
                    trial = K + sign * step * E
                    value = objective(expm(trial) @ U0)
                    if value < current:
                        K, current, improved = trial, value, True
                        break
            if not improved:
                step /= 2
    return CouplerBridge(best_U, L_M, L_N), _coupler_trace(rows)


@to_dataframe(COUPLER_TRACE_COLUMNS)
def _coupler_trace(rows: Sequence[dict]):
    return rows
