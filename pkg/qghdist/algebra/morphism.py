from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..common.exceptions import AlgebraError
from ..utils import SeedLike, as_rng
from .config import EMBEDDING_TOL
from .core import AlgebraElement, ElementBatch, FiniteVNAlgebra, amplify2


@dataclass(frozen=True, eq=False)
class AlgebraIsomorphism:
    """
    块置换加各块酉共轭给出的 * 同构 ψ: source → target

    目标代数第 j 块为 ``unitaries[j] @ x[permutation[j]] @ unitaries[j]*``
    """

    source: FiniteVNAlgebra
    target: FiniteVNAlgebra
    permutation: Tuple[int, ...]
    unitaries: Tuple[np.ndarray, ...]

    def __post_init__(self):
        perm = tuple(int(i) for i in self.permutation)
        us = tuple(np.asarray(u, dtype=complex) for u in self.unitaries)
        k = len(self.target.block_dims)
        if sorted(perm) != list(range(len(self.source.block_dims))) or len(perm) != k:
            raise AlgebraError(f"{perm} 不是块的置换")
        for j, (i, u) in enumerate(zip(perm, us)):
            d = self.target.block_dims[j]
            if self.source.block_dims[i] != d or u.shape != (d, d):
                raise AlgebraError(f"第 {j} 块的维数不匹配")
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "unitaries", us)

    @classmethod
    def identity(
        cls, source: FiniteVNAlgebra, target: Optional[FiniteVNAlgebra] = None
    ) -> "AlgebraIsomorphism":
        target = source if target is None else target
        return cls(
            source,
            target,
            tuple(range(len(source.block_dims))),
            tuple(np.eye(d, dtype=complex) for d in source.block_dims),
        )

    @classmethod
    def conjugation(
        cls, algebra: FiniteVNAlgebra, unitaries: Sequence[np.ndarray]
    ) -> "AlgebraIsomorphism":
        """各块分别做酉共轭的自同构"""
        return cls(algebra, algebra, tuple(range(len(algebra.block_dims))), tuple(unitaries))

    @classmethod
    def random_conjugation(
        cls, algebra: FiniteVNAlgebra, seed: SeedLike = None
    ) -> "AlgebraIsomorphism":
        """各块取 Haar 随机酉矩阵（QR 分解并修正相位）"""
        rng = as_rng(seed)
        us = []
        for d in algebra.block_dims:
            z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
            q, r = np.linalg.qr(z)
            us.append(q * (np.diag(r) / np.abs(np.diag(r))))
        return cls.conjugation(algebra, us)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if not x.parent.compatible(self.source):
            raise AlgebraError("元素不属于同构的定义域")
        blocks = [u @ x.blocks[i] @ u.conj().T for i, u in zip(self.permutation, self.unitaries)]
        return self.target.element(blocks)

    def apply_batch(self, batch: ElementBatch) -> ElementBatch:
        return ElementBatch(
            tuple(
                u @ batch.blocks[i] @ u.conj().T
                for i, u in zip(self.permutation, self.unitaries)
            )
        )

    def inverse(self) -> "AlgebraIsomorphism":
        perm = [0] * len(self.permutation)
        us = [None] * len(self.permutation)
        for j, i in enumerate(self.permutation):
            perm[i] = j
            us[i] = self.unitaries[j].conj().T
        return AlgebraIsomorphism(self.target, self.source, tuple(perm), tuple(us))

    def amplify2(self) -> "AlgebraIsomorphism":
        """逐位置作用的 ψ ⊗ id_2"""
        return AlgebraIsomorphism(
            amplify2(self.source),
            amplify2(self.target),
            self.permutation,
            tuple(np.kron(np.eye(2), u) for u in self.unitaries),
        )

    def check(self, tol: float = EMBEDDING_TOL) -> bool:
        """各块共轭矩阵是否为酉矩阵（从而 ψ 幺正、保 * 、保乘法且可逆）"""
        return all(
            np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() <= tol
            for u in self.unitaries
        )
