import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from ..algebra import FiniteVNAlgebra, generated_algebra, separating_reduction
from ..common.exceptions import FockError
from ..lipnorm import DualLipNorm, kernel_norm
from ..utils import SeedLike, parse_complex, to_dataframe
from .config import (
    DEFAULT_BETA,
    DEFAULT_CUTOFF,
    DEFAULT_GENERATORS,
    DEFAULT_MASSES,
    DEFAULT_MOMENTA,
    PROFILE_COLUMNS,
    CoefficientMap,
    LipNormMode,
)

Coefficients = Sequence[Union[complex, float, Sequence[float]]]


@dataclass(frozen=True)
class TruncatedFock:
    """
    截断的对称 Fock 空间：K 个动量模式，总粒子数不超过 N

    基为全部满足 Σ n_k ≤ N 的占据数组 (n_1, ..., n_K)，按字典序排列，真空为第 0 个

    Examples
    --------
    >>> TruncatedFock((0.5, 1.0, 2.0), 4).dim
    35
    """

    momenta: Tuple[float, ...] = DEFAULT_MOMENTA
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        momenta = tuple(float(p) for p in self.momenta)
        if not momenta:
            raise FockError("至少需要一个动量模式")
        if any(p < 0 for p in momenta):
            raise FockError(f"动量必须非负: {momenta}")
        if int(self.cutoff) < 0:
            raise FockError(f"粒子数截断必须非负: {self.cutoff}")
        object.__setattr__(self, "momenta", momenta)
        object.__setattr__(self, "cutoff", int(self.cutoff))

    @property
    def modes(self) -> int:
        return len(self.momenta)

    @cached_property
    def numbers(self) -> np.ndarray:
        """形状为 ``(dim, K)`` 的占据数表"""
        rows = [
            n
            for n in itertools.product(range(self.cutoff + 1), repeat=self.modes)
            if sum(n) <= self.cutoff
        ]
        return np.array(rows, dtype=int)

    @cached_property
    def index(self) -> Dict[Tuple[int, ...], int]:
        return {tuple(int(v) for v in n): i for i, n in enumerate(self.numbers)}

    @property
    def dim(self) -> int:
        return len(self.numbers)

    @property
    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def dispersion(m, p):
    """
    色散关系 ω_m(p) = sqrt(m² + p²)

    Examples
    --------
    >>> dispersion(3.0, 4.0)
    5.0
    """
    m, p = np.asarray(m, dtype=float), np.asarray(p, dtype=float)
    if (m < 0).any() or (p < 0).any():
        raise FockError("质量与动量必须非负")
    out = np.hypot(m, p)
    return float(out) if out.ndim == 0 else out


def energies(fock: TruncatedFock, m: float) -> np.ndarray:
    """各基向量的能量 E_m(n) = Σ_k n_k ω_m(p_k)"""
    return fock.numbers @ dispersion(m, np.array(fock.momenta))


def _check_beta(beta: float) -> None:
    if not beta > 0:
        raise FockError(f"β 必须为正数，实际为 {beta}")


def semigroup(fock: TruncatedFock, m: float, beta: float = DEFAULT_BETA) -> np.ndarray:
    """
    热半群 e^{-βH_m}，对角元为 e^{-β E_m(n)}

    Returns
    -------
    ndarray
        ``(dim, dim)`` 对角矩阵，真空处为 1
    """
    _check_beta(beta)
    return np.diag(np.exp(-beta * energies(fock, m)))


def creation(fock: TruncatedFock, k: int) -> np.ndarray:
    """截断后的产生算子 a_k†，越过截断的分量置零"""
    if not 0 <= k < fock.modes:
        raise FockError(f"模式编号 {k} 超出范围")
    a = np.zeros((fock.dim, fock.dim), dtype=complex)
    for i, n in enumerate(fock.numbers):
        if n.sum() >= fock.cutoff:
            continue
        up = n.copy()
        up[k] += 1
        a[fock.index[tuple(int(v) for v in up)], i] = np.sqrt(n[k] + 1)
    return a


def _coefficients(fock: TruncatedFock, f: Coefficients) -> np.ndarray:
    f = np.array([parse_complex(c) for c in f], dtype=complex)
    if f.shape != (fock.modes,):
        raise FockError(f"模式系数长度应为 {fock.modes}，实际为 {len(f)}")
    return f


def field_operator(fock: TruncatedFock, f: Coefficients) -> np.ndarray:
    """
    场算子 φ(f) = Σ_k (f̄_k a_k + f_k a_k†) 在截断空间上的压缩

    Examples
    --------
    >>> fock = TruncatedFock((1.0,), 1)
    >>> np.allclose(field_operator(fock, [2j]), [[0, -2j], [2j, 0]])
    True
    """
    f = _coefficients(fock, f)
    A = np.zeros((fock.dim, fock.dim), dtype=complex)
    for k, c in enumerate(f):
        if c != 0:
            A += c * creation(fock, k)
    return A + A.conj().T


def weyl(fock: TruncatedFock, f: Coefficients) -> np.ndarray:
    """
    截断的 Weyl 算子 exp(i φ(f))，由 Hermite 生成元的谱分解得到，严格为酉矩阵

    f = 0 时精确返回单位矩阵
    """
    phi = field_operator(fock, f)
    if not phi.any():
        return np.eye(fock.dim, dtype=complex)
    w, v = np.linalg.eigh(phi)
    return (v * np.exp(1j * w)) @ v.conj().T


def mode_coefficients(
    fock: TruncatedFock,
    f: Coefficients,
    m: float,
    coefficient_map: Union[CoefficientMap, str] = CoefficientMap.fixed,
) -> np.ndarray:
    """
    生成元实际使用的模式系数：f_k 或 f_k / sqrt(2 ω_m(p_k))
    """
    f = _coefficients(fock, f)
    if CoefficientMap(coefficient_map) is CoefficientMap.fixed:
        return f
    omega = dispersion(m, np.array(fock.momenta))
    if (omega == 0).any():
        raise FockError("ω_m(p) = 0 时无法使用 mass_dependent 系数")
    return f / np.sqrt(2 * omega)


def local_algebra(
    fock: TruncatedFock,
    generators: Sequence[Coefficients],
    reduce: bool = True,
    seed: SeedLike = None,
) -> FiniteVNAlgebra:
    """
    由 Weyl 算子生成的「局部」代数，Ω 为真空

    Parameters
    ----------
    fock : TruncatedFock
        截断 Fock 空间
    generators : Sequence
        各生成元的模式系数
    reduce : bool, optional
        交换代数上 Ω 不是分离向量时，是否换成 Ω 为分离向量的子代数
    seed : Union[None, int, Generator], optional
        分解所用的随机种子

    Returns
    -------
    FiniteVNAlgebra
        ``separating`` 属性标记 Ω 是否为分离向量
    """
    if not generators:
        raise FockError("至少需要一个生成元")
    mats = [weyl(fock, f) for f in generators]
    algebra = generated_algebra(mats, omega=fock.vacuum, seed=seed)
    if reduce and algebra.is_abelian and not algebra.separating:
        algebra = separating_reduction(algebra)
    return algebra


def free_lip_norm(
    fock: TruncatedFock, m: float, beta: float, algebra: FiniteVNAlgebra
) -> DualLipNorm:
    """
    自由场 Lip 范数 A ↦ ‖e^{-βH_m} A Ω‖

    Raises
    ------
    SeparatingError
        真空不是 ``algebra`` 的分离向量
    """
    return kernel_norm(algebra, semigroup(fock, m, beta), fock.vacuum)


def mass_gap_bound(fock: TruncatedFock, m: float, m2: float, beta: float = DEFAULT_BETA) -> float:
    """
    max_n |e^{-β E_{m'}(n)} - e^{-β E_m(n)}|，不小于 sup_{‖A‖≤1} ‖(e^{-βH_{m'}} - e^{-βH_m}) A Ω‖

    Examples
    --------
    >>> fock = TruncatedFock((1.0,), 1)
    >>> round(mass_gap_bound(fock, 0.0, 1.0, 1.0), 12) == round(abs(np.exp(-np.sqrt(2)) - np.exp(-1)), 12)
    True
    """
    _check_beta(beta)
    gap = np.exp(-beta * energies(fock, m2)) - np.exp(-beta * energies(fock, m))
    return float(np.abs(gap).max())


def linear_envelope(fock: TruncatedFock, m: float, m2: float, beta: float = DEFAULT_BETA) -> float:
    """线性包络 β·N·|m' - m|，是 :func:`mass_gap_bound` 的上界"""
    _check_beta(beta)
    return beta * fock.cutoff * abs(m2 - m)


@to_dataframe(PROFILE_COLUMNS)
def contraction_profile(
    fock: TruncatedFock, masses: Sequence[float], beta: float = DEFAULT_BETA
):
    """
    e^{-βH_m} e^{βH_0} 的对角元：每个质量一行，给出最大值、真空处的值以及最大值位置
    """
    _check_beta(beta)
    E0 = energies(fock, 0.0)
    rows = []
    for m in masses:
        ratio = np.exp(-beta * (energies(fock, m) - E0))
        rows.append(
            {
                "mass": float(m),
                "max_entry": float(ratio.max()),
                "vacuum_entry": float(ratio[0]),
                "argmax": int(ratio.argmax()),
            }
        )
    return rows


@dataclass(frozen=True)
class FreeFieldConfig:
    """
    质量扫描的参数

    Attributes
    ----------
    beta : float
        阻尼参数 β > 0
    masses : Tuple[float, ...]
        质量网格，构造时升序排列
    generators : Tuple
        Weyl 生成元的模式系数，均非零
    fock : TruncatedFock
        截断 Fock 空间
    coefficient_map : CoefficientMap
        模式系数是否随质量变化
    lipnorm : LipNormMode
        ``transported`` 使用固定代数上的范数族，``intrinsic`` 使用各质量自己的代数
    reduce_to_separating : bool
        是否把交换代数换成 Ω 为分离向量的子代数
    net_count : int
        网点数
    seed : int
        网与代数分解的随机种子
    """

    beta: float = DEFAULT_BETA
    masses: Tuple[float, ...] = DEFAULT_MASSES
    generators: Tuple = DEFAULT_GENERATORS
    fock: TruncatedFock = field(default_factory=TruncatedFock)
    coefficient_map: CoefficientMap = CoefficientMap.fixed
    lipnorm: LipNormMode = LipNormMode.transported
    reduce_to_separating: bool = True
    net_count: int = 512
    seed: int = 0

    def __post_init__(self):
        _check_beta(self.beta)
        masses = tuple(sorted(float(m) for m in self.masses))
        if not masses:
            raise FockError("质量网格不能为空")
        if masses[0] < 0:
            raise FockError("质量必须非负")
        generators = tuple(tuple(_coefficients(self.fock, f)) for f in self.generators)
        if not generators:
            raise FockError("至少需要一个生成元")
        if any(not any(f) for f in generators):
            raise FockError("生成元的模式系数不能全为零")
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "coefficient_map", CoefficientMap(self.coefficient_map))
        object.__setattr__(self, "lipnorm", LipNormMode(self.lipnorm))

    def algebra(self, m: float) -> FiniteVNAlgebra:
        """质量 m 下生成元给出的局部代数"""
        generators = [
            mode_coefficients(self.fock, f, m, self.coefficient_map) for f in self.generators
        ]
        return local_algebra(
            self.fock, generators, reduce=self.reduce_to_separating, seed=self.seed
        )
