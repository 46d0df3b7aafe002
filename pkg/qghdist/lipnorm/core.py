import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..algebra import (
    AlgebraElement,
    ElementBatch,
    FiniteVNAlgebra,
    amplify2,
    as_batch,
)
from ..common.config import ENTRIES, CoveringMethod, CoveringMetric, NormKind
from ..common.exceptions import (
    AlgebraError,
    NetError,
    NormPropertyError,
    SeparatingError,
)
from ..utils import CHUNK_ELEMENTS, chunked_distances
from .config import (
    EM_TRUNCATION,
    FEATURE_REDUCERS,
    KERNEL_INJECTIVITY_TOL,
    RANK_TOL,
)

Points = Union[ElementBatch, Sequence[AlgebraElement]]

REDUCERS = {
    "l2": lambda D: np.sqrt(np.sum(D.real ** 2 + D.imag ** 2, axis=-1)),
    "l1": lambda D: np.sum(np.abs(D), axis=-1),
    "linf": lambda D: np.max(np.abs(D), axis=-1),
}


@dataclass(frozen=True, eq=False)
class DualLipNorm:
    """
    有限维代数上的对偶 Lip 范数

    - ``kernel`` : L(x) = ‖T x Ω‖
    - ``effros_marechal`` : L(x) = Σ_{m,n ≤ J} 2^{-m-n} |⟨ξ_m, x ξ_n⟩|
    - ``weighted_entry`` : L(x) = max_k w_k ‖x_k‖
    - ``tabulated`` : L(x) = max_i |⟨φ_i, x⟩|，φ_i 通过迹配对给出
    - ``lifted`` : M_2(M) 上的 L((a_ij)) = max_ij L(a_ij)

    使用 :func:`kernel_norm` 等函数构造，构造时会检验范数性质
    """

    kind: NormKind
    algebra: FiniteVNAlgebra
    T: Optional[np.ndarray] = None
    omega: Optional[np.ndarray] = None
    vectors: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    table: Optional[ElementBatch] = None
    base: Optional["DualLipNorm"] = None

    def __call__(self, x: AlgebraElement) -> float:
        return evaluate(self, x)

    @property
    def truncation(self) -> Optional[int]:
        return None if self.vectors is None else self.vectors.shape[1]


def _as_operator(T, n: int) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.ndim == 0:
        return T * np.eye(n)
    if T.ndim == 1:
        return np.diag(T)
    return T


def kernel_norm(
    algebra: FiniteVNAlgebra, T, omega: Optional[np.ndarray] = None
) -> DualLipNorm:
    """
    核型对偶 Lip 范数 L(x) = ‖T x Ω‖

    Parameters
    ----------
    algebra : FiniteVNAlgebra
        代数
    T : Union[complex, ndarray]
        环境空间上的单射算子，标量表示 t·I，一维数组表示对角矩阵
    omega : ndarray, optional
        默认使用代数自带的 Ω

    Returns
    -------
    DualLipNorm

    Raises
    ------
    NormPropertyError
        T 不是单射
    SeparatingError
        Ω 不是分离向量，L 在某个非零元素上为 0

    Examples
    --------
    >>> M = FiniteVNAlgebra.diagonal(2, omega=np.array([1, 1]) / np.sqrt(2))
    >>> L = kernel_norm(M, [1, 0.5])
    >>> round(L(M.element([np.eye(1), np.zeros((1, 1))])), 6)
    0.707107
    """
    n = algebra.ambient_dim
    T = _as_operator(T, n)
    if T.shape != (n, n):
        raise NormPropertyError(f"T 的形状应为 {(n, n)}，实际为 {T.shape}")
    if np.linalg.svd(T, compute_uv=False).min() <= KERNEL_INJECTIVITY_TOL:
        raise NormPropertyError("核算子 T 不是单射")
    omega = algebra.omega if omega is None else np.asarray(omega, dtype=complex)
    if omega is None:
        raise SeparatingError("核范数需要向量 Ω")
    L = DualLipNorm(NormKind.kernel, algebra, T=T, omega=omega.reshape(-1))
    if not _has_norm_property(L):
        raise SeparatingError("Ω 不是分离向量，‖T x Ω‖ 不是范数")
    return L


def em_norm(
    algebra: FiniteVNAlgebra,
    vectors: Optional[np.ndarray] = None,
    truncation: int = EM_TRUNCATION,
) -> DualLipNorm:
    """
    截断到 J 项的 Effros–Maréchal 范数，J = min(truncation, 环境空间维数)

    Parameters
    ----------
    algebra : FiniteVNAlgebra
        代数
    vectors : ndarray, optional
        列正交的 ``(n, J)`` 矩阵，默认取标准基的前 J 个向量
    truncation : int, optional
        截断项数，默认为 ``16``

    Returns
    -------
    DualLipNorm
    """
    n = algebra.ambient_dim
    if vectors is None:
        vectors = np.eye(n, dtype=complex)[:, : min(truncation, n)]
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim != 2 or vectors.shape[0] != n:
        raise NormPropertyError(f"向量组应为 ({n}, J) 矩阵")
    J = vectors.shape[1]
    if np.abs(vectors.conj().T @ vectors - np.eye(J)).max() > 1e-10:
        raise NormPropertyError("ξ_1..ξ_J 不是正交规范的")
    index = np.arange(1, J + 1)
    weights = 2.0 ** -(index[:, None] + index[None, :])
    L = DualLipNorm(NormKind.effros_marechal, algebra, vectors=vectors, weights=weights)
    if not _has_norm_property(L):
        raise NormPropertyError("截断后的 Effros–Maréchal 范数在非零元素上为 0")
    return L


def weighted_entry_norm(algebra: FiniteVNAlgebra, weights: Sequence[float]) -> DualLipNorm:
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(algebra.block_dims),):
        raise NormPropertyError("每个块需要一个权重")
    if (weights <= 0).any():
        raise NormPropertyError("权重必须为正")
    return DualLipNorm(NormKind.weighted_entry, algebra, weights=weights)


def tabulated_norm(algebra: FiniteVNAlgebra, table: Points) -> DualLipNorm:
    """
    由有限个泛函给出的范数 L(x) = max_i |⟨φ_i, x⟩|

    ``predual_norm`` 在一个网上的取值就是这种形式
    """
    L = DualLipNorm(NormKind.tabulated, algebra, table=as_batch(table))
    if not _has_norm_property(L):
        raise NormPropertyError("泛函表不能分离代数中的元素")
    return L


def lift2(L: DualLipNorm) -> DualLipNorm:
    """
    M_2(M) 上的诱导范数 L((a_ij)) = max_ij L(a_ij)

    Examples
    --------
    >>> M = FiniteVNAlgebra.standard([1], omega=[1])
    >>> L2 = lift2(kernel_norm(M, 1))
    >>> L2.algebra.block_dims
    (2,)
    """
    return DualLipNorm(NormKind.lifted, amplify2(L.algebra), base=L)


# ----------------------------------------------------------------------
# 取值
def features(L: DualLipNorm, points: Points) -> np.ndarray:
    """
    线性特征映射，L(x) = reducer(features(x))

    仅适用于 ``kernel``、``effros_marechal`` 与 ``tabulated`` 三种类型
    """
    batch = as_batch(points)
    A = L.algebra
    if L.kind is NormKind.kernel:
        return A.apply(batch, L.omega) @ L.T.T
    if L.kind is NormKind.effros_marechal:
        cols = np.stack([A.apply(batch, v) for v in L.vectors.T], axis=-1)
        gram = np.einsum("nm,pnj->pmj", L.vectors.conj(), cols)
        return (gram * L.weights).reshape(len(batch), -1)
    if L.kind is NormKind.tabulated:
        return sum(
            np.einsum("iab,pba->pi", t, X) for t, X in zip(L.table.blocks, batch.blocks)
        )
    raise NormPropertyError(f"{L.kind.value} 类型没有线性特征")


def _width(L: DualLipNorm) -> int:
    if L.kind is NormKind.tabulated:
        return len(L.table)
    if L.kind is NormKind.effros_marechal:
        return L.truncation ** 2
    return L.algebra.ambient_dim


def _spectral_norms(X: np.ndarray) -> np.ndarray:
    # 1×1 块直接取模，避免逐个做奇异值分解
    if X.shape[-1] == 1:
        return np.abs(X[..., 0, 0])
    return np.linalg.norm(X, ord=2, axis=(-2, -1))


def evaluate_many(L: DualLipNorm, points: Points) -> np.ndarray:
    """对一批元素求 L 的值，返回一维数组"""
    batch = as_batch(points)
    if L.kind is NormKind.lifted:
        return np.max(
            [evaluate_many(L.base, batch.entry(i, j)) for i, j in ENTRIES], axis=0
        )
    if L.kind is NormKind.weighted_entry:
        norms = [_spectral_norms(X) for X in batch.blocks]
        return np.max(np.array(norms) * L.weights[:, None], axis=0)
    reducer = REDUCERS[FEATURE_REDUCERS[L.kind]]
    step = max(1, CHUNK_ELEMENTS // max(_width(L), 1))
    return np.concatenate(
        [
            reducer(features(L, batch.slice(start, start + step)))
            for start in range(0, len(batch), step)
        ]
    )


def evaluate(L: DualLipNorm, x: AlgebraElement) -> float:
    """
    L(x)

    Raises
    ------
    AlgebraError
        x 不属于 L 的代数
    """
    if not x.parent.compatible(L.algebra):
        raise AlgebraError("元素与范数不属于同一个代数")
    return float(evaluate_many(L, ElementBatch.from_elements([x]))[0])


def pairwise(L: DualLipNorm, xs: Points, ys: Points) -> np.ndarray:
    """
    距离矩阵 ``D[i, j] = L(x_i - y_j)``

    Parameters
    ----------
    L : DualLipNorm
        范数
    xs, ys : Union[ElementBatch, Sequence[AlgebraElement], Net]
        两组元素

    Returns
    -------
    ndarray
        形状为 ``(len(xs), len(ys))`` 的矩阵
    """
    xb, yb = as_batch(xs), as_batch(ys)
    if L.kind is NormKind.lifted:
        return np.max(
            [pairwise(L.base, xb.entry(i, j), yb.entry(i, j)) for i, j in ENTRIES],
            axis=0,
        )
    if L.kind is NormKind.weighted_entry:
        out = np.zeros((len(xb), len(yb)))
        for w, X, Y in zip(L.weights, xb.blocks, yb.blocks):
            d2 = X.shape[-1] ** 2
            step = max(1, CHUNK_ELEMENTS // max(len(yb) * d2, 1))
            for start in range(0, len(xb), step):
                diff = X[start : start + step, None] - Y[None]
                block = w * _spectral_norms(diff)
                out[start : start + step] = np.maximum(out[start : start + step], block)
        return out
    reducer = REDUCERS[FEATURE_REDUCERS[L.kind]]
    return chunked_distances(features(L, xb), features(L, yb), reducer)


def _has_norm_property(L: DualLipNorm) -> bool:
    """诱导线性映射在代数的基上是否满秩"""
    if L.kind not in FEATURE_REDUCERS:
        return True
    F = features(L, L.algebra.basis())
    if F.shape[1] < F.shape[0]:
        return False
    s = np.linalg.svd(F, compute_uv=False)
    return bool(s.min() > RANK_TOL * max(1.0, s.max()))


# ----------------------------------------------------------------------
# 常数
def lipschitz_bound(L: DualLipNorm) -> float:
    """满足 L(x) ≤ C ‖x‖ 的常数 C"""
    if L.kind is NormKind.lifted:
        return lipschitz_bound(L.base)
    if L.kind is NormKind.kernel:
        return float(np.linalg.norm(L.T, 2) * np.linalg.norm(L.omega))
    if L.kind is NormKind.effros_marechal:
        return float(L.weights.sum())
    if L.kind is NormKind.weighted_entry:
        return float(L.weights.max())
    # 迹配对：|tr(φ x)| ≤ ‖φ‖_1 ‖x‖
    nuclear = sum(
        np.linalg.svd(t, compute_uv=False).sum(axis=-1) for t in L.table.blocks
    )
    return float(np.max(nuclear))


def closed_form_radius(L: DualLipNorm) -> Optional[float]:
    """已知闭式的半径，没有时返回 ``None``"""
    if L.kind is NormKind.lifted:
        return closed_form_radius(L.base)
    if L.kind is NormKind.weighted_entry:
        return float(L.weights.max())
    if L.algebra.dim == 1:
        return evaluate(L, L.algebra.identity())
    return None


def condition_number(L: DualLipNorm) -> Optional[float]:
    """核范数中 T 的条件数，仅作为数值稳定性的参考信息"""
    if L.kind is NormKind.lifted:
        return condition_number(L.base)
    if L.kind is NormKind.kernel:
        return float(np.linalg.cond(L.T))
    return None


@dataclass(frozen=True)
class RadiusEstimate:
    """半径 R 的估计：value ≤ R ≤ value + slack"""

    value: float
    slack: float
    method: CoveringMethod


def radius(L: DualLipNorm, ball_net) -> RadiusEstimate:
    """
    Lip 空间的半径 R = max_{‖x‖ ≤ 1} L(x)

    Parameters
    ----------
    L : DualLipNorm
        范数
    ball_net : Net
        算子范数单位球的网

    Returns
    -------
    RadiusEstimate
        网上的最大值以及可加误差：

        - 已知闭式时误差为闭式与网上最大值之差，标记为 ``certified``
        - 网带有覆盖半径时误差为 覆盖半径 × Lipschitz 常数
        - 否则误差为 0 并标记为 ``heuristic``

    Raises
    ------
    NetError
        网为空
    """
    if len(ball_net) == 0:
        raise NetError("网为空")
    value = float(evaluate_many(L, ball_net).max())
    closed = closed_form_radius(L)
    if closed is not None:
        return RadiusEstimate(value, max(closed - value, 0.0), CoveringMethod.certified)
    covering = getattr(ball_net, "covering_estimate", None)
    if covering is None:
        warnings.warn("单位球网没有覆盖半径，半径误差无法估计", RuntimeWarning)
        return RadiusEstimate(value, 0.0, CoveringMethod.heuristic)
    factor = 1.0 if covering.metric is CoveringMetric.lipnorm else lipschitz_bound(L)
    return RadiusEstimate(value, covering.value * factor, covering.method)


# ----------------------------------------------------------------------
# 对偶
def _pairing_sup(x: AlgebraElement, points: Points) -> float:
    batch = as_batch(points)
    values = sum(np.einsum("ab,pba->p", b, X) for b, X in zip(x.blocks, batch.blocks))
    return float(np.abs(values).max())


def predual_norm(L: DualLipNorm, xi: AlgebraElement, dual_ball_net: Points) -> float:
    """
    预对偶范数 L'(ξ) = sup {|⟨ξ, x⟩| : L(x) ≤ 1}，上确界取在网上

    Parameters
    ----------
    L : DualLipNorm
        代数上的范数
    xi : AlgebraElement
        通过迹配对表示的泛函
    dual_ball_net : Union[ElementBatch, Sequence[AlgebraElement], Net]
        L 单位球中的点，通常由 :func:`sphere_points` 得到

    Returns
    -------
    float
        精确上确界的下估计

    Examples
    --------
    >>> M = FiniteVNAlgebra.standard([1], omega=[1])
    >>> L = kernel_norm(M, 2.0)
    >>> ball = sphere_points(L, [M.identity()])
    >>> predual_norm(L, M.identity(), ball)
    0.5
    """
    if not xi.parent.compatible(L.algebra):
        raise AlgebraError("泛函与范数不属于同一个代数")
    return _pairing_sup(xi, dual_ball_net)


def dual_norm(Lp: DualLipNorm, x: AlgebraElement, predual_ball_net: Points) -> float:
    """
    由预对偶范数还原 L(x) = sup {|⟨ξ, x⟩| : L'(ξ) ≤ 1}
    """
    if not x.parent.compatible(Lp.algebra):
        raise AlgebraError("元素与范数不属于同一个代数")
    return _pairing_sup(x, predual_ball_net)


def sphere_points(L: DualLipNorm, points: Points) -> ElementBatch:
    """把元素缩放到 L 单位球面上，L(x) = 0 的元素被丢弃"""
    batch = as_batch(points)
    values = evaluate_many(L, batch)
    keep = values > 0
    return ElementBatch(
        tuple(X[keep] / values[keep][:, None, None] for X in batch.blocks)
    )
