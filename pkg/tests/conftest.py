import numpy as np
import pytest

from qghdist.algebra import FiniteVNAlgebra


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def scalar():
    """ℂ 作用在 ℂ 上，Ω = 1"""
    return FiniteVNAlgebra.standard([1], omega=[1.0])


@pytest.fixture
def entangled():
    """M_2 以重数 2 作用在 ℂ⁴ 上，Ω 为极大纠缠向量"""
    omega = np.zeros(4, dtype=complex)
    omega[0] = omega[3] = 1 / np.sqrt(2)
    return FiniteVNAlgebra((2,), (2,), (np.eye(4, dtype=complex),), omega)


@pytest.fixture
def diag2():
    return FiniteVNAlgebra.diagonal(2, omega=np.ones(2) / np.sqrt(2))


def random_kernel(rng, n):
    return np.diag(rng.uniform(0.5, 2.0, n)) + 0.1 * rng.standard_normal((n, n))
