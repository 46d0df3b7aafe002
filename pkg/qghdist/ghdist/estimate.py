import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..algebra import FiniteVNAlgebra
from ..common.config import CoveringMetric, NormKind, Target
from ..common.exceptions import (
    AmbientMismatchError,
    BridgeError,
    NetError,
    NoValidBridgeError,
    QGHDistError,
)
from ..lipnorm import (
    DualLipNorm,
    RadiusEstimate,
    closed_form_radius,
    em_norm,
    lift2,
    lipschitz_bound,
    pairwise,
    radius,
)
from ..nets import Net, build_net, estimate_covering, with_covering
from ..nets.config import PROBE_SEED_OFFSET
from ..utils import to_dataframe
from .bridges import Bridge, KernelBridge
from .config import CANDIDATE_COLUMNS


def directed_hausdorff(D: np.ndarray) -> Tuple[float, int, int]:
    """
    单侧 Hausdorff 距离 max_i min_j D[i, j]

    Returns
    -------
    Tuple[float, int, int]
        距离值、取到最大值的行号以及该行取到最小值的列号（并列时取首个）
    """
    D = np.asarray(D, dtype=float)
    if D.size == 0:
        raise NetError("Hausdorff 距离需要两个非空集合")
    nearest = D.argmin(axis=1)
    row_min = D[np.arange(len(D)), nearest]
    i = int(row_min.argmax())
    return float(row_min[i]), i, int(nearest[i])


def hausdorff_matrix(D: np.ndarray) -> float:
    """由距离矩阵计算双侧 Hausdorff 距离"""
    D = np.asarray(D, dtype=float)
    return max(directed_hausdorff(D)[0], directed_hausdorff(D.T)[0])


def hausdorff(A: Sequence, B: Sequence, d: Callable[[object, object], float]) -> float:
    """
    有限集合在距离 d 下的 Hausdorff 距离 max(sup_a inf_b d, sup_b inf_a d)

    Parameters
    ----------
    A, B : Sequence
        非空有限集合
    d : Callable
        d(a, b)，通常为某个半范数在 a - b 上的值

    Returns
    -------
    float

    Raises
    ------
    NetError
        有空集合

    Examples
    --------
    >>> hausdorff([0.0, 1.0], [0.0], lambda a, b: abs(a - b))
    1.0
    """
    A, B = list(A), list(B)
    if not A or not B:
        raise NetError("Hausdorff 距离需要两个非空集合")
    D = np.array([[d(a, b) for b in B] for a in A], dtype=float)
    return hausdorff_matrix(D)


@dataclass
class DistanceEstimate:
    """
    对偶量子 Gromov–Hausdorff 距离的区间估计 ``lower ≤ dist ≤ upper``
    """

    lower: float
    upper: float
    bridge: str
    net_slack_M: float
    net_slack_N: float
    radii: Tuple[float, float]
    radius_slack: Tuple[float, float] = (0.0, 0.0)
    certified: bool = False
    candidates: pd.DataFrame = field(default_factory=pd.DataFrame, repr=False)

    def to_dict(self) -> Dict:
        return distance_report(self)


def distance_report(estimate: DistanceEstimate) -> Dict:
    """
    距离估计的 JSON 报告

    Examples
    --------
    >>> distance_report(DistanceEstimate(0.0, 0.5, "sum", 0.1, 0.2, (1.0, 1.0)))["slack"]
    {'M': 0.1, 'N': 0.2}
    """
    return {
        "lower": float(estimate.lower),
        "upper": float(estimate.upper),
        "bridge": estimate.bridge,
        "slack": {"M": float(estimate.net_slack_M), "N": float(estimate.net_slack_N)},
        "radii": [float(r) for r in estimate.radii],
        "certified": bool(estimate.certified),
    }


def net_slack(net: Net, L2: DualLipNorm) -> float:
    """
    网在放大范数 ``L2`` 下的覆盖半径；网未带估计时用经验探针估计
    """
    covering = net.covering_estimate
    if covering is None:
        covering = estimate_covering(net, L2, seed=net.seed + PROBE_SEED_OFFSET)
    if covering.metric is CoveringMetric.operator:
        return covering.value * lipschitz_bound(L2)
    return covering.value


def _radius_interval(
    L: DualLipNorm, given: Union[None, float, RadiusEstimate], seed: int
) -> Tuple[float, float]:
    if isinstance(given, RadiusEstimate):
        return given.value, given.slack
    if given is not None:
        return float(given), 0.0
    closed = closed_form_radius(L)
    if closed is not None:
        return closed, 0.0
    ball = with_covering(build_net(L.algebra, Target.unit_ball, seed=seed))
    estimate = radius(L, ball)
    return estimate.value, estimate.slack


def kernel_gap_certified(T, S, omega: Optional[np.ndarray] = None) -> float:
    """
    核桥直径的证书上界 ‖T - S‖ · ‖Ω‖ ≥ sup_{‖x‖=1} ‖(T - S) x Ω‖

    Parameters
    ----------
    T, S : ndarray
        同一环境空间上的算子
    omega : ndarray, optional
        向量 Ω，默认视为单位向量

    Raises
    ------
    AmbientMismatchError
        形状不一致

    Examples
    --------
    >>> kernel_gap_certified(np.diag([1, 1]), np.diag([1, 0]))
    1.0
    """
    T, S = np.atleast_2d(np.asarray(T, dtype=complex)), np.atleast_2d(np.asarray(S, dtype=complex))
    if T.shape != S.shape:
        raise AmbientMismatchError(f"算子形状不一致: {T.shape} 与 {S.shape}")
    scale = 1.0 if omega is None else float(np.linalg.norm(omega))
    return float(np.linalg.norm(T - S, 2)) * scale


def bridge_diameter_bound(J: Bridge, sphere_net: Union[Net, Sequence]) -> float:
    """
    sup_{‖x‖=1} J(x, -x) 在单位球面网上的最大值，是该上确界的下估计

    Raises
    ------
    BridgeError
        桥两侧不是同一个代数
    """
    if not J.left.algebra.compatible(J.right.algebra):
        raise BridgeError("直径界要求桥两侧为同一个代数")
    return float(J.paired(sphere_net, sphere_net).max())


@to_dataframe(CANDIDATE_COLUMNS)
def _candidate_table(rows):
    return rows


def estimate_distance(
    M: FiniteVNAlgebra,
    L_M: DualLipNorm,
    N: FiniteVNAlgebra,
    L_N: DualLipNorm,
    bridge_candidates: Sequence[Bridge],
    nets: Tuple[Net, Net],
    radii: Optional[Tuple] = None,
    certified_caps: bool = True,
) -> DistanceEstimate:
    """
    对偶量子 Gromov–Hausdorff 距离的上下界

    Parameters
    ----------
    M, N : FiniteVNAlgebra
        两个代数
    L_M, L_N : DualLipNorm
        两个代数上的范数
    bridge_candidates : Sequence[Bridge]
        候选桥，每个都给出一个有效上界
    nets : Tuple[Net, Net]
        2×2 放大代数正部 X_M、X_N 的网
    radii : Tuple, optional
        已知的半径 (R_M, R_N)，每项为精确值、``RadiusEstimate`` 或 ``None``；
        ``None`` 时使用闭式或者单位球网估计
    certified_caps : bool, optional
        是否用核桥的证书直径 ‖T - S‖‖Ω‖ 截断其上界，默认为 ``True``

    Returns
    -------
    DistanceEstimate
        - ``upper`` : 各候选的 网上 Hausdorff 距离 + 两侧覆盖半径 中的最小值
        - ``lower`` : max(0, |R_M - R_N| - 半径误差)

    Raises
    ------
    NetError
        网不是 2×2 目标
    NoValidBridgeError
        没有可用的候选桥

    Notes
    -----
    不满足前提的候选桥（范数或代数不一致）会被跳过并给出警告
    """
    net_M, net_N = nets
    for net, A in ((net_M, M), (net_N, N)):
        if net.target is not Target.positive_unit_ball_2x2:
            raise NetError("estimate_distance 需要 positive_unit_ball_2x2 网")
        if not net.algebra.base.compatible(A):
            raise NetError("网不在对应代数的 2×2 放大中")
    slack_M = net_slack(net_M, lift2(L_M))
    slack_N = net_slack(net_N, lift2(L_N))

    rows = []
    for J in bridge_candidates:
        try:
            if not (J.left.algebra.compatible(M) and J.right.algebra.compatible(N)):
                raise BridgeError("桥两侧的代数与 M、N 不一致")
            h = hausdorff_matrix(J.lifted_pair_matrix(net_M, net_N))
        except QGHDistError as e:
            warnings.warn(f"跳过候选桥 {J.name}: {e}", RuntimeWarning)
            continue
        upper, certified = h + slack_M + slack_N, False
        if certified_caps and isinstance(J, KernelBridge):
            gap = kernel_gap_certified(J.T, J.S, J.omega)
            if gap <= upper:
                upper, certified = gap, True
        rows.append({"bridge": J.name, "hausdorff": h, "upper": upper, "certified": certified})
    if not rows:
        raise NoValidBridgeError("没有可用的候选桥")
    table = _candidate_table(rows)
    best = int(table["upper"].values.argmin())

    radii = radii or (None, None)
    R_M, s_M = _radius_interval(L_M, radii[0], net_M.seed)
    R_N, s_N = _radius_interval(L_N, radii[1], net_N.seed)
    lower = max(0.0, R_M - R_N - s_N, R_N - R_M - s_M)
    upper = float(table["upper"].iloc[best])
    if lower > upper:
        warnings.warn(
            f"下界 {lower:.6g} 超过上界 {upper:.6g}，经验覆盖半径偏小，上界放宽到下界",
            RuntimeWarning,
        )
        upper = lower
    return DistanceEstimate(
        lower=lower,
        upper=upper,
        bridge=str(table["bridge"].iloc[best]),
        net_slack_M=slack_M,
        net_slack_N=slack_N,
        radii=(R_M, R_N),
        radius_slack=(s_M, s_N),
        certified=bool(table["certified"].iloc[best]),
        candidates=table,
    )


def em_plus_distance(M_net: Net, N_net: Net, norm: Optional[DualLipNorm] = None) -> float:
    """
    同一环境空间上两个子代数正部单位球的 Hausdorff 距离，度量为 Effros–Maréchal 范数

    Parameters
    ----------
    M_net, N_net : Net
        ``positive_unit_ball`` 目标的网
    norm : DualLipNorm, optional
        Effros–Maréchal 范数，只使用其向量组；默认为标准基前 16 个向量

    Returns
    -------
    float

    Raises
    ------
    AmbientMismatchError
        两个代数不在同一个环境空间上
    """
    n = M_net.algebra.ambient_dim
    if N_net.algebra.ambient_dim != n:
        raise AmbientMismatchError(
            f"环境空间维数不一致: {n} 与 {N_net.algebra.ambient_dim}"
        )
    for net in (M_net, N_net):
        if net.target is not Target.positive_unit_ball:
            raise NetError("em_plus_distance 需要 positive_unit_ball 网")
    full = FiniteVNAlgebra.full_matrix(n)
    if norm is None:
        rho = em_norm(full)
    elif norm.kind is NormKind.effros_marechal:
        rho = em_norm(full, vectors=norm.vectors)
    else:
        raise AmbientMismatchError("em_plus_distance 需要 Effros–Maréchal 范数")
    left = [full.element([x.embed()]) for x in M_net]
    right = [full.element([y.embed()]) for y in N_net]
    return hausdorff_matrix(pairwise(rho, left, right))
