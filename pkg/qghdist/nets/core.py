import json
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import ndtr

from ..algebra import (
    AlgebraElement,
    AlgebraIsomorphism,
    ElementBatch,
    FiniteVNAlgebra,
    amplify2,
    entry,
    is_positive_contraction,
    op_norm,
)
from ..common.config import ENTRIES, CoveringMethod, CoveringMetric, Target
from ..common.exceptions import NetError
from ..lipnorm import DualLipNorm, evaluate, pairwise, weighted_entry_norm
from ..utils import SeedLike, as_rng, atomic_write, complex_pairs, dumps_json, parse_complex
from .config import (
    DEFAULT_NET_COUNT,
    DEFAULT_PROBES,
    MEMBERSHIP_TOL,
    NET_JSON_FIELDS,
    PROBE_SEED_OFFSET,
)


@dataclass(frozen=True)
class CoveringEstimate:
    """
    覆盖半径估计

    ``metric`` 为 ``operator`` 时以算子范数度量，为 ``lipnorm`` 时以估计所用的范数度量
    """

    value: float
    method: CoveringMethod
    metric: CoveringMetric = CoveringMetric.lipnorm


@dataclass(frozen=True, eq=False)
class Net:
    """目标集合的有限网"""

    points: Tuple[AlgebraElement, ...]
    algebra: FiniteVNAlgebra
    target: Target
    seed: int
    covering_estimate: Optional[CoveringEstimate] = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "target", Target(self.target))
        if not self.points:
            raise NetError("网不能为空")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> AlgebraElement:
        return self.points[i]

    @cached_property
    def batch(self) -> ElementBatch:
        return ElementBatch.from_elements(self.points)

    def with_covering(self, estimate: CoveringEstimate) -> "Net":
        return replace(self, covering_estimate=estimate)


# ----------------------------------------------------------------------
# 采样
def _as_algebra(algebra_or_dims) -> FiniteVNAlgebra:
    if isinstance(algebra_or_dims, FiniteVNAlgebra):
        return algebra_or_dims
    return FiniteVNAlgebra.standard(list(algebra_or_dims))


def _complex_gaussian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((2, d, d))
    return g[0] + 1j * g[1]


def _positive_block(d: int, rng: np.random.Generator) -> np.ndarray:
    g = _complex_gaussian(d, rng)
    w, v = np.linalg.eigh((g + g.conj().T) / 2)
    # 特征值经标准正态分布函数压到 [0, 1]
    return (v * ndtr(w)) @ v.conj().T


def _contraction_block(d: int, rng: np.random.Generator) -> np.ndarray:
    u, s, vh = np.linalg.svd(_complex_gaussian(d, rng))
    return (u * (2 * ndtr(s) - 1)) @ vh


def sample_positive_contraction(
    algebra_or_dims: Union[FiniteVNAlgebra, Sequence[int]], rng: SeedLike = None
) -> AlgebraElement:
    """
    随机正压缩：各块取独立高斯元的 Hermite 矩阵，对角化后把特征值映到 [0, 1]

    Parameters
    ----------
    algebra_or_dims : Union[FiniteVNAlgebra, Sequence[int]]
        代数，或者块维数（此时使用标准表示）
    rng : Union[None, int, Generator], optional
        随机种子或生成器

    Returns
    -------
    AlgebraElement

    Notes
    -----
    特征值映射为标准正态分布函数 Φ，因此 1×1 块上的结果服从 [0, 1] 上的均匀分布
    """
    A = _as_algebra(algebra_or_dims)
    rng = as_rng(rng)
    return A.element([_positive_block(d, rng) for d in A.block_dims])


def sample_contraction(
    algebra_or_dims: Union[FiniteVNAlgebra, Sequence[int]], rng: SeedLike = None
) -> AlgebraElement:
    """随机压缩：奇异值经 s ↦ 2Φ(s) - 1 映到 [0, 1)"""
    A = _as_algebra(algebra_or_dims)
    rng = as_rng(rng)
    return A.element([_contraction_block(d, rng) for d in A.block_dims])


def sample_unit_sphere(
    algebra_or_dims: Union[FiniteVNAlgebra, Sequence[int]], rng: SeedLike = None
) -> AlgebraElement:
    rng = as_rng(rng)
    while True:
        x = sample_contraction(algebra_or_dims, rng)
        norm = op_norm(x)
        if norm > 0:
            return x / norm


def sample_target(
    algebra: FiniteVNAlgebra, target: Target, rng: SeedLike = None
) -> AlgebraElement:
    """按目标集合采样，``algebra`` 为网所在的代数（2×2 目标时为放大代数）"""
    target = Target(target)
    if target.positive:
        return sample_positive_contraction(algebra, rng)
    if target is Target.unit_ball:
        return sample_contraction(algebra, rng)
    return sample_unit_sphere(algebra, rng)


def is_member(x: AlgebraElement, target: Target, tol: float = MEMBERSHIP_TOL) -> bool:
    """x 是否属于目标集合"""
    target = Target(target)
    if target.positive:
        return is_positive_contraction(x, tol)
    if target is Target.unit_ball:
        return op_norm(x) <= 1 + tol
    return abs(op_norm(x) - 1) <= tol


def mandatory_points(algebra: FiniteVNAlgebra, target: Target) -> List[AlgebraElement]:
    """
    必须包含的极值点

    - 球：0 与 I
    - 正部：另加参考基（矩阵单位）下全部秩一谱投影
    - 球面：I
    """
    target = Target(target)
    if target is Target.unit_sphere:
        return [algebra.identity()]
    points = [algebra.zero(), algebra.identity()]
    if target.positive:
        for k, d in enumerate(algebra.block_dims):
            for i in range(d):
                blocks = [np.zeros((e, e), dtype=complex) for e in algebra.block_dims]
                blocks[k][i, i] = 1.0
                points.append(algebra.element(blocks))
    return points


def build_net(
    algebra: FiniteVNAlgebra,
    target: Union[Target, str],
    count: int = DEFAULT_NET_COUNT,
    seed: int = 0,
) -> Net:
    """
    构造目标集合的网：必需极值点在前，随后是随机点

    Parameters
    ----------
    algebra : FiniteVNAlgebra
        代数 M，目标为 ``positive_unit_ball_2x2`` 时网位于 M_2(M) 中
    target : Union[Target, str]
        目标集合
    count : int, optional
        网点数，默认为 ``512``
    seed : int, optional
        随机种子

    Returns
    -------
    Net

    Notes
    -----
    随机点取自同一个随机流的前缀，因此相同种子下小网是大网的子集

    Examples
    --------
    >>> net = build_net(FiniteVNAlgebra.standard([2]), "unit_ball", count=2)
    >>> [float(op_norm(x)) for x in net]
    [0.0, 1.0]
    """
    target = Target(target)
    if count < 2:
        raise NetError(f"网点数至少为 2，实际为 {count}")
    space = amplify2(algebra) if target is Target.positive_unit_ball_2x2 else algebra
    points = mandatory_points(space, target)[:count]
    rng = as_rng(seed)
    points += [sample_target(space, target, rng) for _ in range(count - len(points))]
    return Net(tuple(points), space, target, int(seed))


def operator_pairwise(algebra: FiniteVNAlgebra, xs, ys) -> np.ndarray:
    """算子范数下的距离矩阵 ``D[i, j] = ‖x_i - y_j‖``"""
    return pairwise(weighted_entry_norm(algebra, np.ones(len(algebra.block_dims))), xs, ys)


def estimate_covering(
    net: Net,
    L: Optional[DualLipNorm] = None,
    probes: int = DEFAULT_PROBES,
    seed: Optional[int] = None,
) -> CoveringEstimate:
    """
    经验覆盖半径：探针到最近网点距离的最大值

    Parameters
    ----------
    net : Net
        网
    L : DualLipNorm, optional
        度量所用的范数，默认为算子范数
    probes : int, optional
        探针数，默认为 ``256``
    seed : int, optional
        探针的种子，默认为 ``net.seed + 1``；取 ``net.seed`` 时探针与网的随机点相同

    Returns
    -------
    CoveringEstimate
        标记为 ``empirical``，是真实覆盖半径的下估计
    """
    if probes < 1:
        raise NetError("探针数至少为 1")
    rng = as_rng(net.seed + PROBE_SEED_OFFSET if seed is None else seed)
    samples = [sample_target(net.algebra, net.target, rng) for _ in range(probes)]
    if L is None:
        D = operator_pairwise(net.algebra, samples, net)
        metric = CoveringMetric.operator
    else:
        D = pairwise(L, samples, net)
        metric = CoveringMetric.lipnorm
    return CoveringEstimate(float(D.min(axis=1).max()), CoveringMethod.empirical, metric)


def with_covering(
    net: Net,
    L: Optional[DualLipNorm] = None,
    probes: int = DEFAULT_PROBES,
    seed: Optional[int] = None,
) -> Net:
    """返回带覆盖半径估计的网"""
    return net.with_covering(estimate_covering(net, L, probes, seed))


def grid_net(
    algebra: FiniteVNAlgebra, count: int, L: Optional[DualLipNorm] = None
) -> Net:
    """
    一维代数正部 {t·I : t ∈ [0, 1]} 的等距网格，覆盖半径 h/2 是精确值

    Parameters
    ----------
    algebra : FiniteVNAlgebra
        一维代数
    count : int
        网格点数
    L : DualLipNorm, optional
        给定时覆盖半径按 L 度量，即 h/2 · L(I)

    Returns
    -------
    Net
        覆盖半径标记为 ``certified``
    """
    if algebra.dim != 1:
        raise NetError("grid_net 仅适用于一维代数")
    if count < 2:
        raise NetError(f"网点数至少为 2，实际为 {count}")
    I = algebra.identity()
    points = [t * I for t in np.linspace(0.0, 1.0, count)]
    h = 1.0 / (count - 1)
    if L is None:
        covering = CoveringEstimate(h / 2, CoveringMethod.certified, CoveringMetric.operator)
    else:
        covering = CoveringEstimate(h / 2 * evaluate(L, I), CoveringMethod.certified)
    return Net(tuple(points), algebra, Target.positive_unit_ball, 0, covering)


def entry_net(net: Net) -> Net:
    """由 2×2 网全部位置组成的单位球网（首个点为 0），用作桥复合的中间网"""
    base = net.algebra.base
    if base is None:
        raise NetError("entry_net 需要 2×2 放大代数上的网")
    points = [base.zero()] + [entry(X, i, j) for X in net for i, j in ENTRIES]
    return Net(tuple(points), base, Target.unit_ball, net.seed)


def map_net(net: Net, psi: AlgebraIsomorphism) -> Net:
    """同构在网上的像（2×2 网逐位置作用）"""
    phi = psi.amplify2() if net.algebra.base is not None else psi
    return Net(tuple(phi(x) for x in net), phi.target, net.target, net.seed)


# ----------------------------------------------------------------------
# JSON
def net_to_dict(net: Net) -> Dict:
    covering = net.covering_estimate
    return {
        "target": net.target.value,
        "seed": net.seed,
        "block_dims": list(net.algebra.block_dims),
        "covering_estimate": None
        if covering is None
        else {
            "value": covering.value,
            "method": covering.method.value,
            "metric": covering.metric.value,
        },
        "blocks": [[complex_pairs(b.reshape(-1)) for b in x.blocks] for x in net],
    }


def save_net(net: Net, path: Union[str, Path]) -> Path:
    """把网写成 JSON 文件（先写临时文件再重命名）"""
    return atomic_write(path, dumps_json(net_to_dict(net)) + "\n")


def load_net(
    source: Union[str, Path, Dict], algebra: Optional[FiniteVNAlgebra] = None
) -> Net:
    """
    读取网的 JSON

    Parameters
    ----------
    source : Union[str, Path, dict]
        文件路径或已解析的字典
    algebra : FiniteVNAlgebra, optional
        网所在的代数，默认按 ``block_dims`` 使用标准表示

    Returns
    -------
    Net
    """
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise NetError(f"无法读取网文件 {source}: {e}") from e
    missing = [k for k in NET_JSON_FIELDS if k not in data]
    if missing:
        raise NetError(f"网文件缺少字段 {missing}")
    if not Target.has_value(data["target"]):
        raise NetError(f"未知的目标集合 {data['target']}")
    target = Target(data["target"])
    dims = [int(d) for d in data["block_dims"]]
    if algebra is None:
        if target is Target.positive_unit_ball_2x2:
            algebra = amplify2(FiniteVNAlgebra.standard([d // 2 for d in dims]))
        else:
            algebra = FiniteVNAlgebra.standard(dims)
    elif target is Target.positive_unit_ball_2x2 and algebra.base is None:
        algebra = amplify2(algebra)
    if list(algebra.block_dims) != dims:
        raise NetError(f"块维数 {dims} 与代数 {algebra.block_dims} 不一致")
    try:
        points = [
            algebra.element(
                [
                    np.array([parse_complex(z) for z in block]).reshape(d, d)
                    for block, d in zip(point, dims)
                ]
            )
            for point in data["blocks"]
        ]
    except (ValueError, TypeError) as e:
        raise NetError(f"网点数据格式错误: {e}") from e
    covering = data.get("covering_estimate")
    if covering is not None:
        covering = CoveringEstimate(
            float(covering["value"]),
            CoveringMethod(covering["method"]),
            CoveringMetric(covering.get("metric", CoveringMetric.lipnorm.value)),
        )
    return Net(tuple(points), algebra, target, int(data["seed"]), covering)
