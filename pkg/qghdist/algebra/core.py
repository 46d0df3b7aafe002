from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from numbers import Number
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..common.exceptions import AlgebraError
from ..utils import SeedLike, as_rng
from .config import (
    EMBEDDING_TOL,
    NORM_BOUND_TOL,
    POSITIVITY_TOL,
    SEPARATING_TOL,
)


@dataclass(frozen=True, eq=False)
class FiniteVNAlgebra:
    """
    有限维冯·诺依曼代数 ⊕_k M_{d_k}，连同其在环境空间上的表示

    第 k 个块以重数 r_k 作用，``frames[k]`` 是列正交的 ``(n, d_k r_k)`` 矩阵 U_k，
    嵌入映射为 x ↦ Σ_k U_k (x_k ⊗ I_{r_k}) U_k*

    Notes
    -----
    ``base`` 记录 2×2 放大前的代数，``summands`` 记录直和的两个分量
    """

    block_dims: Tuple[int, ...]
    multiplicities: Tuple[int, ...]
    frames: Tuple[np.ndarray, ...]
    omega: Optional[np.ndarray] = None
    base: Optional["FiniteVNAlgebra"] = field(default=None, repr=False)
    summands: Optional[Tuple["FiniteVNAlgebra", "FiniteVNAlgebra"]] = field(
        default=None, repr=False
    )

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        mults = tuple(int(r) for r in self.multiplicities)
        frames = tuple(np.asarray(U, dtype=complex) for U in self.frames)
        if not dims:
            raise AlgebraError("代数至少需要一个矩阵块")
        if len(dims) != len(mults) or len(dims) != len(frames):
            raise AlgebraError("块维数、重数与 frames 的个数不一致")
        if min(dims) < 1 or min(mults) < 1:
            raise AlgebraError(f"块维数与重数必须为正整数: {dims}, {mults}")
        n = frames[0].shape[0]
        for d, r, U in zip(dims, mults, frames):
            if U.ndim != 2 or U.shape != (n, d * r):
                raise AlgebraError(
                    f"frame 形状应为 {(n, d * r)}，实际为 {U.shape}"
                )
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "multiplicities", mults)
        object.__setattr__(self, "frames", frames)
        if self.omega is not None:
            omega = np.asarray(self.omega, dtype=complex).reshape(-1)
            if omega.shape != (n,):
                raise AlgebraError(f"Ω 的维数应为 {n}，实际为 {omega.shape[0]}")
            object.__setattr__(self, "omega", omega)

    # ------------------------------------------------------------------
    # 构造
    @classmethod
    def standard(
        cls, block_dims: Sequence[int], omega: Optional[np.ndarray] = None
    ) -> "FiniteVNAlgebra":
        """
        在 ℂ^{Σ d_k} 上按块对角方式表示的代数（各块重数为 1）

        Examples
        --------
        >>> FiniteVNAlgebra.standard([2, 1]).ambient_dim
        3
        """
        dims = [int(d) for d in block_dims]
        n = sum(dims)
        frames, start = [], 0
        for d in dims:
            frames.append(np.eye(n, dtype=complex)[:, start : start + d])
            start += d
        return cls(tuple(dims), (1,) * len(dims), tuple(frames), omega)

    @classmethod
    def full_matrix(
        cls, n: int, omega: Optional[np.ndarray] = None
    ) -> "FiniteVNAlgebra":
        return cls((n,), (1,), (np.eye(n, dtype=complex),), omega)

    @classmethod
    def scalars(cls, n: int, omega: Optional[np.ndarray] = None) -> "FiniteVNAlgebra":
        """ℂ·I 作用在 ℂ^n 上"""
        return cls((1,), (n,), (np.eye(n, dtype=complex),), omega)

    @classmethod
    def diagonal(cls, n: int, omega: Optional[np.ndarray] = None) -> "FiniteVNAlgebra":
        """ℂ^n 上的对角极大交换子代数"""
        return cls.standard([1] * n, omega)

    def with_omega(self, omega: Optional[np.ndarray]) -> "FiniteVNAlgebra":
        return replace(self, omega=omega)

    # ------------------------------------------------------------------
    @property
    def ambient_dim(self) -> int:
        return self.frames[0].shape[0]

    @property
    def dim(self) -> int:
        return sum(d * d for d in self.block_dims)

    @property
    def is_abelian(self) -> bool:
        return all(d == 1 for d in self.block_dims)

    @cached_property
    def separating(self) -> bool:
        """Ω 是否为分离向量，未指定 Ω 时为 False"""
        return self.omega is not None and self.is_separating(self.omega)

    def compatible(self, other: "FiniteVNAlgebra") -> bool:
        """两个代数是否具有相同的块结构与嵌入（不比较 Ω）"""
        if self is other:
            return True
        if (
            self.block_dims != other.block_dims
            or self.multiplicities != other.multiplicities
            or self.ambient_dim != other.ambient_dim
        ):
            return False
        return all(
            np.allclose(U, V, atol=1e-12) for U, V in zip(self.frames, other.frames)
        )

    # ------------------------------------------------------------------
    # 元素
    def element(self, blocks: Sequence[np.ndarray]) -> "AlgebraElement":
        return AlgebraElement(tuple(blocks), self)

    def zero(self) -> "AlgebraElement":
        return self.element([np.zeros((d, d), dtype=complex) for d in self.block_dims])

    def identity(self) -> "AlgebraElement":
        return self.element([np.eye(d, dtype=complex) for d in self.block_dims])

    def basis(self) -> List["AlgebraElement"]:
        """矩阵单位 E_ab^{(k)} 构成的基，按块、行、列顺序排列"""
        units = []
        for k, d in enumerate(self.block_dims):
            for a in range(d):
                for b in range(d):
                    blocks = [np.zeros((e, e), dtype=complex) for e in self.block_dims]
                    blocks[k][a, b] = 1.0
                    units.append(self.element(blocks))
        return units

    def random_element(
        self, rng: SeedLike = None, hermitian: bool = False
    ) -> "AlgebraElement":
        rng = as_rng(rng)
        blocks = []
        for d in self.block_dims:
            g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
            blocks.append((g + g.conj().T) / 2 if hermitian else g)
        return self.element(blocks)

    def embed(self, x: "AlgebraElement") -> np.ndarray:
        """x 在环境空间上的矩阵"""
        n = self.ambient_dim
        out = np.zeros((n, n), dtype=complex)
        for U, r, b in zip(self.frames, self.multiplicities, x.blocks):
            out += U @ np.kron(b, np.eye(r)) @ U.conj().T
        return out

    def element_from_ambient(
        self, matrix: np.ndarray, tol: Optional[float] = None
    ) -> "AlgebraElement":
        """
        把环境空间上的矩阵压缩到各块（部分迹），给定 ``tol`` 时校验矩阵确实属于该代数
        """
        matrix = np.asarray(matrix, dtype=complex)
        blocks = []
        for U, d, r in zip(self.frames, self.block_dims, self.multiplicities):
            c = (U.conj().T @ matrix @ U).reshape(d, r, d, r)
            blocks.append(np.einsum("asbs->ab", c) / r)
        x = self.element(blocks)
        if tol is not None:
            err = np.abs(self.embed(x) - matrix).max()
            if err > tol:
                raise AlgebraError(f"矩阵不属于该代数，重构误差为 {err:.3e}")
        return x

    def apply(self, batch: "ElementBatch", vector: np.ndarray) -> np.ndarray:
        """
        对一批元素同时计算 x v

        Parameters
        ----------
        batch : ElementBatch
            属于该代数的一批元素
        vector : ndarray
            环境空间中的向量

        Returns
        -------
        ndarray
            形状为 ``(P, n)`` 的矩阵，第 i 行为 x_i v
        """
        vector = np.asarray(vector, dtype=complex)
        out = np.zeros((len(batch), self.ambient_dim), dtype=complex)
        for U, d, r, X in zip(self.frames, self.block_dims, self.multiplicities, batch.blocks):
            w = (U.conj().T @ vector).reshape(d, r)
            out += np.einsum("pab,br->par", X, w).reshape(len(batch), d * r) @ U.T
        return out

    def is_separating(
        self, omega: Optional[np.ndarray] = None, tol: float = SEPARATING_TOL
    ) -> bool:
        """
        x ↦ xΩ 在代数的基上是否列满秩

        Parameters
        ----------
        omega : ndarray, optional
            待检验的向量，默认使用代数自带的 Ω
        tol : float, optional
            奇异值下限，默认为 ``1e-10``

        Returns
        -------
        bool
        """
        omega = self.omega if omega is None else np.asarray(omega, dtype=complex)
        if omega is None:
            return False
        images = self.apply(ElementBatch.from_elements(self.basis()), omega)
        s = np.linalg.svd(images, compute_uv=False)
        return bool(len(s) >= self.dim and s[self.dim - 1] > tol)

    def check_embedding(self, tol: float = EMBEDDING_TOL) -> bool:
        """嵌入是否幺正、保 * 且在矩阵单位上等距"""
        n = self.ambient_dim
        for U in self.frames:
            if np.abs(U.conj().T @ U - np.eye(U.shape[1])).max() > tol:
                return False
        if np.abs(self.embed(self.identity()) - np.eye(n)).max() > tol:
            return False
        for e in self.basis():
            m = self.embed(e)
            if np.abs(self.embed(e.adjoint()) - m.conj().T).max() > tol:
                return False
            if abs(np.linalg.norm(m, 2) - 1.0) > tol:
                return False
        return True


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """按块存储的代数元素"""

    blocks: Tuple[np.ndarray, ...]
    parent: FiniteVNAlgebra

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=complex) for b in self.blocks)
        dims = self.parent.block_dims
        if len(blocks) != len(dims):
            raise AlgebraError(f"元素应有 {len(dims)} 个块，实际为 {len(blocks)}")
        for b, d in zip(blocks, dims):
            if b.shape != (d, d):
                raise AlgebraError(f"块的形状应为 {(d, d)}，实际为 {b.shape}")
        object.__setattr__(self, "blocks", blocks)

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise AlgebraError(f"无法与 {type(other).__name__} 运算")
        if not self.parent.compatible(other.parent):
            raise AlgebraError("两个元素不属于同一个代数")

    def _new(self, blocks) -> "AlgebraElement":
        return AlgebraElement(tuple(blocks), self.parent)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return self._new(a + b for a, b in zip(self.blocks, other.blocks))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return self._new(a - b for a, b in zip(self.blocks, other.blocks))

    def __neg__(self) -> "AlgebraElement":
        return self._new(-a for a in self.blocks)

    def __mul__(self, c: Number) -> "AlgebraElement":
        if not isinstance(c, Number):
            return NotImplemented
        return self._new(c * a for a in self.blocks)

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> "AlgebraElement":
        return self._new(a / c for a in self.blocks)

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return self._new(a @ b for a, b in zip(self.blocks, other.blocks))

    def adjoint(self) -> "AlgebraElement":
        return self._new(a.conj().T for a in self.blocks)

    def embed(self) -> np.ndarray:
        return self.parent.embed(self)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([b.reshape(-1) for b in self.blocks])

    @classmethod
    def from_vector(cls, vector: np.ndarray, parent: FiniteVNAlgebra) -> "AlgebraElement":
        vector = np.asarray(vector, dtype=complex)
        if vector.shape != (parent.dim,):
            raise AlgebraError(f"向量长度应为 {parent.dim}")
        blocks, start = [], 0
        for d in parent.block_dims:
            blocks.append(vector[start : start + d * d].reshape(d, d))
            start += d * d
        return cls(tuple(blocks), parent)

    def norm(self) -> float:
        return op_norm(self)


@dataclass(frozen=True, eq=False)
class ElementBatch:
    """
    同一代数中的一批元素，第 k 个块存为形状 ``(P, d_k, d_k)`` 的数组，便于向量化计算
    """

    blocks: Tuple[np.ndarray, ...]

    @classmethod
    def from_elements(cls, elements: Sequence[AlgebraElement]) -> "ElementBatch":
        elements = list(elements)
        if not elements:
            raise AlgebraError("元素列表为空")
        return cls(
            tuple(
                np.stack([x.blocks[k] for x in elements])
                for k in range(len(elements[0].blocks))
            )
        )

    def __len__(self) -> int:
        return self.blocks[0].shape[0]

    def element(self, i: int, parent: FiniteVNAlgebra) -> AlgebraElement:
        return AlgebraElement(tuple(X[i] for X in self.blocks), parent)

    def scaled(self, c: complex) -> "ElementBatch":
        return ElementBatch(tuple(c * X for X in self.blocks))

    def entry(self, i: int, j: int) -> "ElementBatch":
        """放大代数中各元素的 (i, j) 位置"""
        out = []
        for X in self.blocks:
            d = X.shape[-1] // 2
            out.append(X[:, i * d : (i + 1) * d, j * d : (j + 1) * d])
        return ElementBatch(tuple(out))

    def slice(self, start: int, stop: int) -> "ElementBatch":
        return ElementBatch(tuple(X[start:stop] for X in self.blocks))

    def with_zero(self) -> "ElementBatch":
        """在最前面插入零元素"""
        return ElementBatch(
            tuple(np.concatenate([np.zeros_like(X[:1]), X]) for X in self.blocks)
        )


def as_batch(points: Union[ElementBatch, Sequence[AlgebraElement], object]) -> ElementBatch:
    """把元素序列、``Net`` 或 ``ElementBatch`` 统一为 ``ElementBatch``"""
    if isinstance(points, ElementBatch):
        return points
    batch = getattr(points, "batch", None)
    if isinstance(batch, ElementBatch):
        return batch
    if isinstance(points, AlgebraElement):
        return ElementBatch.from_elements([points])
    return ElementBatch.from_elements(list(points))


def op_norm(x: AlgebraElement) -> float:
    """
    算子范数，即各块最大奇异值中的最大者

    Examples
    --------
    >>> M = FiniteVNAlgebra.standard([3])
    >>> op_norm(M.identity())
    1.0
    """
    return float(max(np.linalg.norm(b, 2) for b in x.blocks))


@lru_cache(maxsize=256)
def amplify2(M: FiniteVNAlgebra) -> FiniteVNAlgebra:
    """
    2×2 放大 M_2(M) = ⊕_k M_{2 d_k}，作用在 ℂ² ⊗ H 上

    同一个 ``M`` 多次调用返回同一个对象

    Examples
    --------
    >>> amplify2(FiniteVNAlgebra.standard([2, 1])).block_dims
    (4, 2)
    """
    frames = tuple(np.kron(np.eye(2), U) for U in M.frames)
    return FiniteVNAlgebra(
        tuple(2 * d for d in M.block_dims), M.multiplicities, frames, None, base=M
    )


def _base_of(X: AlgebraElement) -> FiniteVNAlgebra:
    base = X.parent.base
    if base is None:
        raise AlgebraError("该元素不属于某个 2×2 放大代数")
    return base


def entry(X: AlgebraElement, i: int, j: int) -> AlgebraElement:
    """取放大代数元素的 (i, j) 位置，i, j ∈ {0, 1}"""
    base = _base_of(X)
    blocks = []
    for b, d in zip(X.blocks, base.block_dims):
        blocks.append(b[i * d : (i + 1) * d, j * d : (j + 1) * d])
    return base.element(blocks)


def from_entries(
    a11: AlgebraElement, a12: AlgebraElement, a21: AlgebraElement, a22: AlgebraElement
) -> AlgebraElement:
    """由四个位置组装 M_2(M) 中的元素 Σ e_ij ⊗ a_ij"""
    for a in (a12, a21, a22):
        a11._check(a)
    blocks = [
        np.block([[b11, b12], [b21, b22]])
        for b11, b12, b21, b22 in zip(a11.blocks, a12.blocks, a21.blocks, a22.blocks)
    ]
    return amplify2(a11.parent).element(blocks)


def diagonal_embed(a: AlgebraElement) -> AlgebraElement:
    """a ↦ diag(a, a)"""
    z = a.parent.zero()
    return from_entries(a, z, z, a)


def direct_sum(M: FiniteVNAlgebra, N: FiniteVNAlgebra) -> FiniteVNAlgebra:
    """
    直和 M ⊕ N，作用在 H_M ⊕ H_N 上

    Examples
    --------
    >>> direct_sum(FiniteVNAlgebra.standard([1]), FiniteVNAlgebra.standard([1])).block_dims
    (1, 1)
    """
    m, n = M.ambient_dim, N.ambient_dim
    frames = [np.vstack([U, np.zeros((n, U.shape[1]))]) for U in M.frames]
    frames += [np.vstack([np.zeros((m, V.shape[1])), V]) for V in N.frames]
    return FiniteVNAlgebra(
        M.block_dims + N.block_dims,
        M.multiplicities + N.multiplicities,
        tuple(frames),
        None,
        summands=(M, N),
    )


def _summands(S: FiniteVNAlgebra) -> Tuple[FiniteVNAlgebra, FiniteVNAlgebra]:
    if S.summands is None:
        raise AlgebraError("该代数不是由 direct_sum 构造的")
    return S.summands


def inject_left(x: AlgebraElement, S: FiniteVNAlgebra) -> AlgebraElement:
    M, N = _summands(S)
    if not x.parent.compatible(M):
        raise AlgebraError("元素不属于直和的第一个分量")
    return S.element(list(x.blocks) + list(N.zero().blocks))


def inject_right(y: AlgebraElement, S: FiniteVNAlgebra) -> AlgebraElement:
    M, N = _summands(S)
    if not y.parent.compatible(N):
        raise AlgebraError("元素不属于直和的第二个分量")
    return S.element(list(M.zero().blocks) + list(y.blocks))


def project_left(z: AlgebraElement) -> AlgebraElement:
    M, _ = _summands(z.parent)
    return M.element(z.blocks[: len(M.block_dims)])


def project_right(z: AlgebraElement) -> AlgebraElement:
    M, N = _summands(z.parent)
    return N.element(z.blocks[len(M.block_dims) :])


def _positive_negative(h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    pos = (v * np.clip(w, 0, None)) @ v.conj().T
    neg = (v * np.clip(-w, 0, None)) @ v.conj().T
    return pos, neg


def canonical_decomposition(
    x: AlgebraElement,
) -> Tuple[AlgebraElement, AlgebraElement, AlgebraElement, AlgebraElement]:
    """
    把压缩元素分解为四个正压缩 x = x1p - x1m + i (x2p - x2m)

    先取 Hermite 实部与虚部，再各自做谱分解得到正部与负部

    Parameters
    ----------
    x : AlgebraElement
        满足 ‖x‖ ≤ 1 的元素

    Returns
    -------
    Tuple[AlgebraElement, AlgebraElement, AlgebraElement, AlgebraElement]
        ``(x1p, x1m, x2p, x2m)``

    Raises
    ------
    AlgebraError
        ‖x‖ > 1
    """
    norm = op_norm(x)
    if norm > 1 + NORM_BOUND_TOL:
        raise AlgebraError(f"canonical_decomposition 要求 ‖x‖ ≤ 1，实际为 {norm}")
    parts = [[], [], [], []]
    for b in x.blocks:
        re = (b + b.conj().T) / 2
        im = (b - b.conj().T) / 2j
        for slot, block in zip(parts, _positive_negative(re) + _positive_negative(im)):
            slot.append(block)
    x1p, x1m, x2p, x2m = (x.parent.element(p) for p in parts)
    return x1p, x1m, x2p, x2m


def is_positive_contraction(x: AlgebraElement, tol: float = POSITIVITY_TOL) -> bool:
    """
    x = x* 且全部特征值位于 [-tol, 1 + tol]

    Examples
    --------
    >>> M = FiniteVNAlgebra.standard([2])
    >>> is_positive_contraction(M.element([np.diag([1.5, 0])]))
    False
    """
    if tol < 0:
        raise AlgebraError("tol 不能为负")
    for b in x.blocks:
        if np.abs(b - b.conj().T).max(initial=0.0) > tol:
            return False
        w = np.linalg.eigvalsh((b + b.conj().T) / 2)
        if w.min() < -tol or w.max() > 1 + tol:
            return False
    return True


def trace_pairing(xi: AlgebraElement, x: AlgebraElement) -> complex:
    """迹配对 ⟨ξ, x⟩ = Σ_k tr(ξ_k x_k)，用于把预对偶等同于代数本身"""
    xi._check(x)
    return complex(sum(np.sum(a.T * b) for a, b in zip(xi.blocks, x.blocks)))
