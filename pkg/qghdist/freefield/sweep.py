import signal
import threading
from typing import Dict, Optional, Tuple

import multitasking
import numpy as np
from tqdm.auto import tqdm

from ..algebra import FiniteVNAlgebra
from ..common.config import Target
from ..common.exceptions import SeparatingError
from ..ghdist import coupler_bridge, estimate_distance, kernel_bridge
from ..lipnorm import DualLipNorm, radius
from ..nets import Net, build_net, with_covering
from ..shared import MAX_WORKERS
from ..utils import to_dataframe
from .config import SWEEP_COLUMNS, LipNormMode
from .core import FreeFieldConfig, free_lip_norm, mass_gap_bound

if threading.current_thread() is threading.main_thread():
    signal.signal(signal.SIGINT, multitasking.killall)

SweepNets = Tuple[Net, Net]


def sweep_nets(algebra: FiniteVNAlgebra, config: FreeFieldConfig) -> SweepNets:
    """
    扫描所用的两个网：X 的网（2×2 放大正部）以及带覆盖半径的单位球网
    """
    X = build_net(algebra, Target.positive_unit_ball_2x2, config.net_count, config.seed)
    ball = with_covering(build_net(algebra, Target.unit_ball, config.net_count, config.seed))
    return X, ball


def _base_algebra(config: FreeFieldConfig, base_mass: float) -> FiniteVNAlgebra:
    algebra = config.algebra(base_mass)
    if not algebra.separating:
        raise SeparatingError(
            f"真空不是生成代数的分离向量（块维数 {algebra.block_dims}）"
        )
    return algebra


def _sweep_row(
    config: FreeFieldConfig,
    algebra: FiniteVNAlgebra,
    L_base: DualLipNorm,
    base_mass: float,
    m_prime: float,
    nets: SweepNets,
) -> Dict[str, float]:
    fock, beta = config.fock, config.beta
    X, ball = nets
    # 固定代数上的 ‖e^{-βH_{m'}} A Ω‖
    L_fixed = free_lip_norm(fock, m_prime, beta, algebra)
    J_fixed = kernel_bridge(None, None, None, L_fixed, L_base)
    net_sup = float(J_fixed.paired(ball, ball).max())

    if config.lipnorm is LipNormMode.transported:
        L_prime, X_prime, J = L_fixed, X, J_fixed
        radii = (radius(L_prime, ball), radius(L_base, ball))
        M_prime = algebra
    else:
        M_prime = _base_algebra(config, m_prime)
        L_prime = free_lip_norm(fock, m_prime, beta, M_prime)
        X_prime, ball_prime = sweep_nets(M_prime, config)
        J = coupler_bridge(np.eye(fock.dim), L_prime, L_base)
        radii = (radius(L_prime, ball_prime), radius(L_base, ball))
    estimate = estimate_distance(
        M_prime, L_prime, algebra, L_base, [J], (X_prime, X), radii=radii
    )
    return {
        "m_prime": float(m_prime),
        "certified_bound": mass_gap_bound(fock, base_mass, m_prime, beta),
        "net_sup": net_sup,
        "qgh_upper": estimate.upper,
    }


@to_dataframe(SWEEP_COLUMNS)
def mass_sweep(
    config: FreeFieldConfig,
    base_mass: float,
    nets: Optional[SweepNets] = None,
    threads: Optional[int] = None,
    progress: bool = True,
):
    """
    质量连续性扫描：对网格中每个 m' 比较质量 m' 与基准质量 m 的自由场 Lip 范数

    Parameters
    ----------
    config : FreeFieldConfig
        扫描参数
    base_mass : float
        基准质量 m
    nets : Tuple[Net, Net], optional
        基准代数上的 X 网与单位球网，默认由 :func:`sweep_nets` 构造
    threads : int, optional
        并发任务数上限，默认为 ``MAX_WORKERS``
    progress : bool, optional
        是否显示进度条

    Returns
    -------
    DataFrame
        列为 ``m_prime, certified_bound, net_sup, qgh_upper``，按网格顺序排列

        - ``certified_bound`` : :func:`mass_gap_bound`
        - ``net_sup`` : 单位球网上 ‖(e^{-βH_{m'}} - e^{-βH_m}) A Ω‖ 的最大值
        - ``qgh_upper`` : 核桥给出的距离上界

    Raises
    ------
    SeparatingError
        真空不是基准代数的分离向量

    Examples
    --------
    >>> import qghdist as qd
    >>> config = qd.freefield.FreeFieldConfig(masses=(0.0, 0.5), net_count=32)
    >>> df = qd.freefield.mass_sweep(config, 0.0, progress=False)
    >>> df.loc[0].tolist()
    [0.0, 0.0, 0.0, 0.0]
    """
    algebra = _base_algebra(config, base_mass)
    L_base = free_lip_norm(config.fock, base_mass, config.beta, algebra)
    if nets is None:
        nets = sweep_nets(algebra, config)
    rows: Dict[float, Dict[str, float]] = {}
    errors: Dict[float, BaseException] = {}
    multitasking.set_max_threads(max(1, threads or MAX_WORKERS))
    pbar = tqdm(total=len(config.masses), disable=not progress)

    @multitasking.task
    def start(m_prime: float):
        try:
            rows[m_prime] = _sweep_row(config, algebra, L_base, base_mass, m_prime, nets)
        except Exception as e:
            errors[m_prime] = e
        pbar.update(1)
        pbar.set_description_str(f"Processing => m'={m_prime:g}")

    for m_prime in config.masses:
        start(m_prime)
    multitasking.wait_for_tasks()
    pbar.close()
    for m_prime in config.masses:
        if m_prime in errors:
            raise errors[m_prime]
    return [rows[m] for m in config.masses]
