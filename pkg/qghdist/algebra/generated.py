from typing import List, Optional, Sequence

import numpy as np
from retry import retry

from ..common.exceptions import AlgebraError, SeparatingError
from ..utils import SeedLike, as_rng
from .config import (
    CLUSTER_TOL,
    DECOMPOSITION_TRIES,
    RECONSTRUCTION_TOL,
    SEPARATING_TOL,
)
from .core import FiniteVNAlgebra

# 交换性判定容差
COMMUTATION_TOL = 1e-10
# 零空间判定：Gram 矩阵特征值的相对下限
NULL_SPACE_TOL = 1e-9


def generated_algebra(
    generators: Sequence[np.ndarray],
    omega: Optional[np.ndarray] = None,
    seed: SeedLike = None,
) -> FiniteVNAlgebra:
    """
    由有限个环境空间矩阵生成的幺正 * 代数，并分解为矩阵块

    Parameters
    ----------
    generators : Sequence[ndarray]
        同阶方阵
    omega : ndarray, optional
        附加到结果上的向量 Ω
    seed : Union[None, int, Generator], optional
        分解中随机元素所用的种子

    Returns
    -------
    FiniteVNAlgebra
        块结构、重数以及使嵌入成立的 frames

    Notes
    -----
    生成元两两可交换且为正规矩阵时，直接对随机 Hermite 组合做谱分解；
    否则通过双交换子 {c, c*}' 求出代数，再由随机 Hermite 元素的谱投影
    与随机元素的非零矩阵元得到极小投影的分组以及矩阵单位。
    随机步骤失败时会重新抽样，最多 ``DECOMPOSITION_TRIES`` 次
    """
    mats = [np.asarray(g, dtype=complex) for g in generators]
    if not mats:
        raise AlgebraError("至少需要一个生成元")
    n = mats[0].shape[0]
    for g in mats:
        if g.shape != (n, n):
            raise AlgebraError(f"生成元应为 {n}×{n} 方阵，实际为 {g.shape}")
    rng = as_rng(seed)
    if commuting_normal(mats):
        return _abelian_decomposition(mats, omega, rng)
    return _factor_decomposition(mats, omega, rng)


def commuting_normal(mats: Sequence[np.ndarray], tol: float = COMMUTATION_TOL) -> bool:
    """矩阵族连同其伴随是否两两可交换"""
    family = list(mats) + [g.conj().T for g in mats]
    for i, a in enumerate(family):
        for b in family[i + 1 :]:
            scale = max(1.0, np.linalg.norm(a, 2) * np.linalg.norm(b, 2))
            if np.abs(a @ b - b @ a).max() > tol * scale:
                return False
    return True


def _clusters(w: np.ndarray) -> List[np.ndarray]:
    # w 升序
    span = max(1.0, float(np.abs(w).max()))
    cuts = np.nonzero(np.diff(w) > CLUSTER_TOL * span)[0] + 1
    return np.split(np.arange(len(w)), cuts)


def _verify(algebra: FiniteVNAlgebra, mats: Sequence[np.ndarray]) -> FiniteVNAlgebra:
    for g in mats:
        algebra.element_from_ambient(
            g, tol=RECONSTRUCTION_TOL * max(1.0, np.linalg.norm(g, 2))
        )
    if not algebra.check_embedding(tol=RECONSTRUCTION_TOL):
        raise AlgebraError("分解得到的嵌入不是幺正等距的")
    return algebra


@retry(AlgebraError, tries=DECOMPOSITION_TRIES)
def _abelian_decomposition(mats, omega, rng) -> FiniteVNAlgebra:
    n = mats[0].shape[0]
    h = np.zeros((n, n), dtype=complex)
    for g in mats:
        a, b = rng.standard_normal(2)
        h += a * (g + g.conj().T) / 2 + b * (g - g.conj().T) / 2j
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    groups = _clusters(w)
    algebra = FiniteVNAlgebra(
        (1,) * len(groups),
        tuple(len(idx) for idx in groups),
        tuple(v[:, idx] for idx in groups),
        omega,
    )
    return _verify(algebra, mats)


def commutant_basis(mats: Sequence[np.ndarray]) -> List[np.ndarray]:
    """
    {X : X g = g X 对所有 g} 的一组正交基（按行展开的 Frobenius 内积）
    """
    n = mats[0].shape[0]
    eye = np.eye(n)
    gram = np.zeros((n * n, n * n), dtype=complex)
    for g in mats:
        K = np.kron(eye, g.T) - np.kron(g, eye)
        gram += K.conj().T @ K
    w, v = np.linalg.eigh((gram + gram.conj().T) / 2)
    null = w <= NULL_SPACE_TOL * max(1.0, float(w.max()))
    return [v[:, i].reshape(n, n) for i in np.nonzero(null)[0]]


def _random_combination(basis: Sequence[np.ndarray], rng) -> np.ndarray:
    c = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    return np.tensordot(c, np.array(basis), axes=1)


@retry(AlgebraError, tries=DECOMPOSITION_TRIES)
def _factor_decomposition(mats, omega, rng) -> FiniteVNAlgebra:
    commutant = commutant_basis(mats + [g.conj().T for g in mats])
    c = _random_combination(commutant, rng)
    algebra_basis = commutant_basis([c, c.conj().T])

    x = _random_combination(algebra_basis, rng)
    y = _random_combination(algebra_basis, rng)
    w, v = np.linalg.eigh((x + x.conj().T) / 2)
    spaces = [v[:, idx] for idx in _clusters(w)]
    link_tol = 1e-8 * max(1.0, np.linalg.norm(y, 2))

    dims, mults, frames = [], [], []
    assigned = [False] * len(spaces)
    for i, Wi in enumerate(spaces):
        if assigned[i]:
            continue
        members = [i] + [
            k
            for k in range(i + 1, len(spaces))
            if not assigned[k] and np.linalg.norm(Wi.conj().T @ y @ spaces[k]) > link_tol
        ]
        r = Wi.shape[1]
        columns = [Wi]
        for k in members[1:]:
            Wk = spaces[k]
            if Wk.shape[1] != r:
                raise AlgebraError("同一因子中的极小投影秩不相等")
            M = Wi.conj().T @ y @ Wk
            s = np.sqrt(np.trace(M @ M.conj().T).real / r)
            u = M / s
            if np.abs(u @ u.conj().T - np.eye(r)).max() > 1e-6:
                raise AlgebraError("矩阵单位不是部分等距")
            columns.append(Wk @ u.conj().T)
        for k in members:
            assigned[k] = True
        dims.append(len(members))
        mults.append(r)
        frames.append(np.hstack(columns))

    algebra = FiniteVNAlgebra(tuple(dims), tuple(mults), tuple(frames), omega)
    if algebra.dim != len(algebra_basis):
        raise AlgebraError(
            f"分解维数 {algebra.dim} 与双交换子维数 {len(algebra_basis)} 不一致"
        )
    return _verify(algebra, mats)


def separating_reduction(
    algebra: FiniteVNAlgebra,
    omega: Optional[np.ndarray] = None,
    tol: float = SEPARATING_TOL,
) -> FiniteVNAlgebra:
    """
    交换代数上使 Ω 成为分离向量的幺正子代数

    把满足 pΩ = 0 的极小投影并入第一个 Ω 可见的投影，x ↦ xΩ 的取值不变

    Parameters
    ----------
    algebra : FiniteVNAlgebra
        交换代数（各块均为 1 维）
    omega : ndarray, optional
        默认使用代数自带的 Ω
    tol : float, optional
        判断 pΩ ≠ 0 的下限

    Returns
    -------
    FiniteVNAlgebra
        Ω 为分离向量的子代数，没有需要合并的投影时返回原代数

    Raises
    ------
    AlgebraError
        代数不是交换的
    SeparatingError
        Ω 为零向量
    """
    omega = algebra.omega if omega is None else np.asarray(omega, dtype=complex)
    if omega is None:
        raise SeparatingError("未指定 Ω")
    if not algebra.is_abelian:
        raise AlgebraError("separating_reduction 仅适用于交换代数")
    visible = [
        k for k, U in enumerate(algebra.frames) if np.linalg.norm(U.conj().T @ omega) > tol
    ]
    if not visible:
        raise SeparatingError("Ω 被所有极小投影消灭")
    hidden = [k for k in range(len(algebra.frames)) if k not in visible]
    if not hidden:
        return algebra.with_omega(omega)
    first = visible[0]
    frames, mults = [], []
    for k in visible:
        if k == first:
            frames.append(np.hstack([algebra.frames[j] for j in [k] + hidden]))
            mults.append(sum(algebra.multiplicities[j] for j in [k] + hidden))
        else:
            frames.append(algebra.frames[k])
            mults.append(algebra.multiplicities[k])
    return FiniteVNAlgebra((1,) * len(visible), tuple(mults), tuple(frames), omega)
