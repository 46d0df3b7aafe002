import numpy as np
import pytest

from qghdist.algebra import (
    AlgebraIsomorphism,
    FiniteVNAlgebra,
    amplify2,
    canonical_decomposition,
    diagonal_embed,
    direct_sum,
    entry,
    from_entries,
    generated_algebra,
    inject_left,
    inject_right,
    is_positive_contraction,
    op_norm,
    project_left,
    project_right,
    separating_reduction,
    trace_pairing,
)
from qghdist.common import AlgebraError, SeparatingError

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


class TestOpNorm:
    def test_identity(self):
        assert op_norm(FiniteVNAlgebra.standard([3]).identity()) == pytest.approx(1.0)

    def test_diagonal_block(self):
        M = FiniteVNAlgebra.standard([2])
        assert op_norm(M.element([np.diag([3.0, -4.0])])) == pytest.approx(4.0)

    def test_random_hermitian(self, rng):
        M = FiniteVNAlgebra.standard([4])
        x = M.random_element(rng, hermitian=True)
        expected = np.abs(np.linalg.eigvalsh(x.blocks[0])).max()
        np.testing.assert_allclose(op_norm(x), expected, rtol=1e-10)

    def test_max_over_blocks(self):
        M = FiniteVNAlgebra.standard([1, 2])
        x = M.element([np.array([[0.5]]), 2 * np.eye(2)])
        assert op_norm(x) == pytest.approx(2.0)


class TestConstructions:
    def test_amplify2_dims(self):
        assert amplify2(FiniteVNAlgebra.standard([1])).block_dims == (2,)
        assert amplify2(FiniteVNAlgebra.standard([2, 1])).block_dims == (4, 2)

    def test_amplify2_cached(self):
        M = FiniteVNAlgebra.standard([2, 1])
        assert amplify2(M) is amplify2(M)
        assert amplify2(M).base is M

    def test_entries_round_trip(self, rng):
        M = FiniteVNAlgebra.standard([2, 1])
        a, b, c, d = (M.random_element(rng) for _ in range(4))
        X = from_entries(a, b, c, d)
        for (i, j), part in zip(((0, 0), (0, 1), (1, 0), (1, 1)), (a, b, c, d)):
            np.testing.assert_allclose(entry(X, i, j).embed(), part.embed())

    def test_diagonal_embed(self, rng):
        M = FiniteVNAlgebra.standard([2])
        a = M.random_element(rng)
        X = diagonal_embed(a)
        np.testing.assert_allclose(entry(X, 1, 1).embed(), a.embed())
        assert op_norm(entry(X, 0, 1)) == 0.0

    def test_entry_requires_amplified(self, rng):
        M = FiniteVNAlgebra.standard([2])
        with pytest.raises(AlgebraError):
            entry(M.random_element(rng), 0, 0)

    def test_direct_sum(self, rng):
        C = FiniteVNAlgebra.standard([1])
        S = direct_sum(C, C)
        assert S.block_dims == (1, 1)
        assert S.ambient_dim == 2

        M, N = FiniteVNAlgebra.standard([2]), FiniteVNAlgebra.standard([1])
        S = direct_sum(M, N)
        x, y = M.random_element(rng), N.random_element(rng)
        z = inject_left(x, S) + inject_right(y, S)
        np.testing.assert_allclose(project_left(z).embed(), x.embed())
        np.testing.assert_allclose(project_right(z).embed(), y.embed())
        assert S.check_embedding()

    def test_inject_wrong_summand(self, rng):
        M, N = FiniteVNAlgebra.standard([2]), FiniteVNAlgebra.standard([1])
        with pytest.raises(AlgebraError):
            inject_right(M.random_element(rng), direct_sum(M, N))


class TestEmbedding:
    @pytest.mark.parametrize("dims", [[1], [2, 1], [3, 1, 2]])
    def test_standard_embedding(self, dims):
        assert FiniteVNAlgebra.standard(dims).check_embedding()

    def test_multiplicative(self, rng, entangled):
        for M in (FiniteVNAlgebra.standard([2, 1]), entangled):
            x, y = M.random_element(rng), M.random_element(rng)
            np.testing.assert_allclose(M.embed(x @ y), M.embed(x) @ M.embed(y), atol=1e-12)
            np.testing.assert_allclose(M.embed(x.adjoint()), M.embed(x).conj().T)

    def test_element_from_ambient(self, rng, entangled):
        x = entangled.random_element(rng)
        back = entangled.element_from_ambient(x.embed(), tol=1e-10)
        np.testing.assert_allclose(back.blocks[0], x.blocks[0], atol=1e-12)

    def test_element_from_ambient_rejects(self, entangled):
        with pytest.raises(AlgebraError):
            entangled.element_from_ambient(np.diag([1.0, 0, 0, 0]), tol=1e-10)

    def test_bad_frame_shape(self):
        with pytest.raises(AlgebraError):
            FiniteVNAlgebra((2,), (1,), (np.eye(3),))

    def test_trace_pairing(self, rng):
        M = FiniteVNAlgebra.standard([2, 1])
        xi, x = M.random_element(rng), M.random_element(rng)
        expected = sum(np.trace(a @ b) for a, b in zip(xi.blocks, x.blocks))
        np.testing.assert_allclose(trace_pairing(xi, x), expected)


class TestSeparating:
    def test_diagonal(self):
        assert FiniteVNAlgebra.diagonal(3).is_separating(np.ones(3))
        assert not FiniteVNAlgebra.diagonal(3).is_separating(np.array([1.0, 1.0, 0.0]))

    def test_full_matrix_not_separating(self):
        assert not FiniteVNAlgebra.full_matrix(2).is_separating(np.array([1.0, 0.0]))

    def test_multiplicity_makes_separating(self, entangled):
        assert entangled.separating

    def test_no_omega(self):
        assert not FiniteVNAlgebra.standard([1]).separating

    def test_reduction(self):
        A = FiniteVNAlgebra.diagonal(3, omega=np.array([1.0, 1.0, 0.0]))
        reduced = separating_reduction(A)
        assert reduced.block_dims == (1, 1)
        assert reduced.multiplicities == (2, 1)
        assert reduced.separating
        assert reduced.check_embedding()

    def test_reduction_noop(self):
        A = FiniteVNAlgebra.diagonal(2, omega=np.ones(2))
        assert separating_reduction(A).block_dims == (1, 1)

    def test_reduction_requires_abelian(self):
        with pytest.raises(AlgebraError):
            separating_reduction(FiniteVNAlgebra.full_matrix(2, omega=np.array([1.0, 0.0])))

    def test_reduction_zero_omega(self):
        with pytest.raises(SeparatingError):
            separating_reduction(FiniteVNAlgebra.diagonal(2, omega=np.zeros(2)))


class TestCanonicalDecomposition:
    def test_positive(self, rng):
        M = FiniteVNAlgebra.standard([2])
        p = M.element([np.diag([0.25, 0.75])])
        parts = canonical_decomposition(p)
        np.testing.assert_allclose(parts[0].blocks[0], p.blocks[0], atol=1e-12)
        for part in parts[1:]:
            assert op_norm(part) <= 1e-12

    def test_imaginary(self):
        M = FiniteVNAlgebra.standard([2])
        p = M.element([np.array([[0.5, 0.25], [0.25, 0.5]])])
        x1p, x1m, x2p, x2m = canonical_decomposition(1j * p)
        np.testing.assert_allclose(x2p.blocks[0], p.blocks[0], atol=1e-12)
        for part in (x1p, x1m, x2m):
            assert op_norm(part) <= 1e-12

    def test_reconstruction(self, rng):
        M = FiniteVNAlgebra.standard([3, 1])
        for _ in range(20):
            x = M.random_element(rng)
            x = x / (1.01 * op_norm(x))
            parts = canonical_decomposition(x)
            total = parts[0] - parts[1] + 1j * (parts[2] - parts[3])
            assert op_norm(total - x) <= 1e-12
            assert all(is_positive_contraction(part) for part in parts)

    def test_not_contraction(self):
        M = FiniteVNAlgebra.standard([1])
        with pytest.raises(AlgebraError):
            canonical_decomposition(M.element([np.array([[2.0]])]))


class TestPositiveContraction:
    def test_identity(self):
        assert is_positive_contraction(FiniteVNAlgebra.standard([3]).identity())

    def test_too_large(self):
        M = FiniteVNAlgebra.standard([2])
        assert not is_positive_contraction(M.element([np.diag([1.5, 0.0])]), tol=1e-9)

    def test_projection(self):
        M = FiniteVNAlgebra.standard([2])
        assert is_positive_contraction(M.element([(np.eye(2) + PAULI_X) / 2]))

    def test_not_hermitian(self):
        M = FiniteVNAlgebra.standard([2])
        assert not is_positive_contraction(M.element([np.array([[0.5, 0.1], [0.0, 0.5]])]))


class TestGeneratedAlgebra:
    def test_commuting(self):
        A = generated_algebra([np.diag([1.0, 1.0, 2.0])], seed=0)
        assert A.block_dims == (1, 1)
        assert sorted(A.multiplicities) == [1, 2]

    def test_full_matrix(self):
        A = generated_algebra([PAULI_X, PAULI_Z], seed=0)
        assert A.block_dims == (2,)
        assert A.multiplicities == (1,)

    def test_multiplicity(self):
        mats = [np.kron(PAULI_X, np.eye(2)), np.kron(PAULI_Z, np.eye(2))]
        A = generated_algebra(mats, seed=0)
        assert A.block_dims == (2,)
        assert A.multiplicities == (2,)
        for g in mats:
            A.element_from_ambient(g, tol=1e-8)

    def test_omega_attached(self):
        A = generated_algebra([PAULI_Z], omega=np.array([1.0, 1.0]) / np.sqrt(2), seed=0)
        assert A.separating

    def test_shape_mismatch(self):
        with pytest.raises(AlgebraError):
            generated_algebra([np.eye(2), np.eye(3)])


class TestIsomorphism:
    def test_random_conjugation(self, rng):
        M = FiniteVNAlgebra.standard([2, 1])
        psi = AlgebraIsomorphism.random_conjugation(M, rng)
        assert psi.check()
        x, y = M.random_element(rng), M.random_element(rng)
        np.testing.assert_allclose(psi(x @ y).embed(), (psi(x) @ psi(y)).embed(), atol=1e-12)
        np.testing.assert_allclose(psi(x.adjoint()).embed(), psi(x).adjoint().embed(), atol=1e-12)
        np.testing.assert_allclose(psi.inverse()(psi(x)).embed(), x.embed(), atol=1e-12)

    def test_permutation(self):
        M = FiniteVNAlgebra.standard([1, 1])
        psi = AlgebraIsomorphism(M, M, (1, 0), (np.eye(1), np.eye(1)))
        x = M.element([np.array([[1.0]]), np.array([[2.0]])])
        np.testing.assert_allclose(psi(x).blocks[0], [[2.0]])
        np.testing.assert_allclose(psi.inverse()(psi(x)).blocks[1], [[2.0]])

    def test_amplify2(self, rng):
        M = FiniteVNAlgebra.standard([2])
        psi = AlgebraIsomorphism.random_conjugation(M, rng)
        a, b = M.random_element(rng), M.random_element(rng)
        X = from_entries(a, b, b, a)
        np.testing.assert_allclose(
            entry(psi.amplify2()(X), 0, 1).embed(), psi(b).embed(), atol=1e-12
        )

    def test_dimension_mismatch(self):
        M, N = FiniteVNAlgebra.standard([2]), FiniteVNAlgebra.standard([1])
        with pytest.raises(AlgebraError):
            AlgebraIsomorphism(M, N, (0,), (np.eye(1),))
