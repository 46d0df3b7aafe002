from math import comb

import numpy as np
import pandas as pd
import pytest

from qghdist.common import FockError, SeparatingError
from qghdist.freefield import (
    CoefficientMap,
    FreeFieldConfig,
    LipNormMode,
    TruncatedFock,
    contraction_profile,
    dispersion,
    energies,
    field_operator,
    free_lip_norm,
    linear_envelope,
    local_algebra,
    mass_gap_bound,
    mass_sweep,
    mode_coefficients,
    semigroup,
    weyl,
)
from qghdist.freefield.config import SWEEP_COLUMNS

SMALL_FOCK = TruncatedFock((0.5, 1.0), 2)


@pytest.fixture
def small_config():
    return FreeFieldConfig(
        masses=(0.5, 0.0, 0.25),
        generators=((0.6, 0.3),),
        fock=SMALL_FOCK,
        net_count=32,
    )


class TestFock:
    @pytest.mark.parametrize("modes", [1, 2, 3, 4])
    @pytest.mark.parametrize("cutoff", [0, 1, 3, 6])
    def test_dimension(self, modes, cutoff):
        fock = TruncatedFock(tuple(range(1, modes + 1)), cutoff)
        assert fock.dim == comb(modes + cutoff, cutoff)
        assert tuple(fock.numbers[0]) == (0,) * modes

    def test_invalid(self):
        with pytest.raises(FockError):
            TruncatedFock((), 2)
        with pytest.raises(FockError):
            TruncatedFock((-1.0,), 2)
        with pytest.raises(FockError):
            TruncatedFock((1.0,), -1)

    def test_dispersion(self):
        assert dispersion(3.0, 4.0) == 5.0
        assert dispersion(0.0, 2.0) == 2.0
        with pytest.raises(FockError):
            dispersion(-1.0, 1.0)

    def test_energies(self):
        fock = TruncatedFock((1.0, 2.0), 3)
        E = energies(fock, 0.0)
        assert E[fock.index[(2, 1)]] == pytest.approx(4.0)
        assert E[0] == 0.0

    def test_semigroup(self):
        fock = TruncatedFock((1.0, 2.0), 3)
        G = semigroup(fock, 0.5, 2.0)
        assert G[0, 0] == 1.0
        np.testing.assert_allclose(np.diag(G), np.exp(-2.0 * energies(fock, 0.5)))
        with pytest.raises(FockError):
            semigroup(fock, 0.5, 0.0)


class TestWeyl:
    def test_field_zero(self):
        fock = TruncatedFock((1.0, 2.0), 2)
        assert not field_operator(fock, [0, 0]).any()
        np.testing.assert_array_equal(weyl(fock, [0, 0]), np.eye(fock.dim))

    def test_field_hermitian(self, rng):
        fock = TruncatedFock((0.5, 1.0, 2.0), 3)
        f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        phi = field_operator(fock, f)
        np.testing.assert_allclose(phi, phi.conj().T)

    def test_single_mode_closed_form(self):
        fock = TruncatedFock((1.0,), 1)
        c = 0.8 - 0.6j
        phi = field_operator(fock, [c])
        expected = np.cos(abs(c)) * np.eye(2) + 1j * np.sin(abs(c)) * phi / abs(c)
        np.testing.assert_allclose(weyl(fock, [c]), expected, atol=1e-12)

    def test_unitary(self, rng):
        fock = TruncatedFock((0.5, 1.0, 2.0), 4)
        for _ in range(50):
            f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            W = weyl(fock, f)
            np.testing.assert_allclose(W.conj().T @ W, np.eye(fock.dim), atol=1e-10)

    def test_coefficient_pairs(self):
        fock = TruncatedFock((1.0,), 1)
        np.testing.assert_allclose(field_operator(fock, [[0.0, 2.0]]), field_operator(fock, [2j]))

    def test_wrong_length(self):
        with pytest.raises(FockError):
            field_operator(TruncatedFock((1.0, 2.0), 1), [1.0])


class TestLocalAlgebra:
    def test_identity_generator(self):
        A = local_algebra(TruncatedFock((1.0,), 2), [(0,)], seed=0)
        assert A.block_dims == (1,)
        assert A.separating

    def test_single_generator_abelian(self):
        A = local_algebra(TruncatedFock((1.0,), 1), [(1,)], seed=0)
        assert A.block_dims == (1, 1)
        assert A.separating

    def test_full_matrix_not_separating(self):
        A = local_algebra(TruncatedFock((1.0,), 1), [(1,), (1j,)], seed=0)
        assert A.block_dims == (2,)
        assert not A.separating

    def test_reduction(self):
        fock = TruncatedFock((0.5, 1.0), 1)
        raw = local_algebra(fock, [(0.6, 0.3)], reduce=False, seed=0)
        reduced = local_algebra(fock, [(0.6, 0.3)], reduce=True, seed=0)
        assert not raw.separating
        assert reduced.separating
        assert reduced.ambient_dim == fock.dim

    def test_no_generators(self):
        with pytest.raises(FockError):
            local_algebra(SMALL_FOCK, [])


class TestLipNorm:
    def test_identity(self):
        A = local_algebra(SMALL_FOCK, [(0.6, 0.3)], seed=0)
        L = free_lip_norm(SMALL_FOCK, 0.5, 1.0, A)
        assert L(A.identity()) == pytest.approx(1.0)

    def test_requires_separating(self):
        fock = TruncatedFock((1.0,), 1)
        A = local_algebra(fock, [(1,), (1j,)], seed=0)
        with pytest.raises(SeparatingError):
            free_lip_norm(fock, 0.0, 1.0, A)

    def test_mass_gap_closed_form(self):
        fock = TruncatedFock((1.0,), 1)
        expected = abs(np.exp(-np.sqrt(2.0)) - np.exp(-1.0))
        assert mass_gap_bound(fock, 0.0, 1.0, 1.0) == pytest.approx(expected)
        assert mass_gap_bound(fock, 0.3, 0.3) == 0.0

    def test_linear_envelope(self, rng):
        fock = TruncatedFock((0.5, 1.0, 2.0), 4)
        for m, m2 in rng.uniform(0, 2, size=(20, 2)):
            for beta in (0.5, 1.0, 3.0):
                assert mass_gap_bound(fock, m, m2, beta) <= linear_envelope(fock, m, m2, beta) + 1e-12

    def test_contraction_profile(self):
        profile = contraction_profile(SMALL_FOCK, [0.0, 0.5, 1.0])
        assert list(profile.columns) == ["mass", "max_entry", "vacuum_entry", "argmax"]
        assert (profile["max_entry"] == 1.0).all()
        assert (profile["vacuum_entry"] == 1.0).all()
        assert (profile["argmax"] == 0).all()


class TestConfig:
    def test_sorted_masses(self, small_config):
        assert small_config.masses == (0.0, 0.25, 0.5)

    def test_enums_from_strings(self):
        config = FreeFieldConfig(
            generators=((1, 0),),
            fock=SMALL_FOCK,
            coefficient_map="mass_dependent",
            lipnorm="intrinsic",
        )
        assert config.coefficient_map is CoefficientMap.mass_dependent
        assert config.lipnorm is LipNormMode.intrinsic

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"beta": 0.0},
            {"masses": ()},
            {"masses": (-0.1, 0.5)},
            {"generators": ((0.0, 0.0),)},
            {"generators": ((1.0,),)},
            {"generators": ()},
        ],
    )
    def test_invalid(self, kwargs):
        params = {"generators": ((0.6, 0.3),), "fock": SMALL_FOCK, **kwargs}
        with pytest.raises(FockError):
            FreeFieldConfig(**params)

    def test_default_generators_fit_default_fock(self):
        config = FreeFieldConfig()
        assert len(config.generators[0]) == config.fock.modes

    def test_mode_coefficients(self):
        fock = TruncatedFock((1.0,), 1)
        assert mode_coefficients(fock, [2.0], 0.0)[0] == 2.0
        assert mode_coefficients(fock, [2.0], 0.0, "mass_dependent")[0].real == pytest.approx(np.sqrt(2))
        with pytest.raises(FockError):
            mode_coefficients(TruncatedFock((0.0,), 1), [1.0], 0.0, "mass_dependent")


class TestMassSweep:
    def test_transported(self, small_config):
        df = mass_sweep(small_config, 0.0, threads=2, progress=False)
        assert list(df.columns) == SWEEP_COLUMNS
        assert list(df["m_prime"]) == [0.0, 0.25, 0.5]
        assert df.loc[0].tolist() == [0.0, 0.0, 0.0, 0.0]
        assert (np.diff(df["certified_bound"]) > 0).all()
        assert (df["qgh_upper"] <= df["certified_bound"] + 1e-9).all()
        assert (df["net_sup"] <= df["certified_bound"] + 1e-12).all()
        envelope = small_config.beta * SMALL_FOCK.cutoff * df["m_prime"]
        assert (df["certified_bound"] <= envelope + 1e-12).all()

    def test_thread_count_irrelevant(self, small_config):
        one = mass_sweep(small_config, 0.0, threads=1, progress=False)
        many = mass_sweep(small_config, 0.0, threads=3, progress=False)
        pd.testing.assert_frame_equal(one, many)

    def test_intrinsic(self, small_config):
        config = FreeFieldConfig(
            masses=small_config.masses,
            generators=small_config.generators,
            fock=SMALL_FOCK,
            lipnorm="intrinsic",
            net_count=32,
        )
        df = mass_sweep(config, 0.0, threads=2, progress=False)
        reference = mass_sweep(small_config, 0.0, threads=2, progress=False)
        np.testing.assert_allclose(df["certified_bound"], reference["certified_bound"])
        assert np.isfinite(df["qgh_upper"]).all()
        assert (df["qgh_upper"] >= 0).all()

    def test_not_separating(self):
        config = FreeFieldConfig(
            masses=(0.0, 0.5),
            generators=((0.6, 0.3),),
            fock=TruncatedFock((0.5, 1.0), 1),
            reduce_to_separating=False,
            net_count=16,
        )
        with pytest.raises(SeparatingError):
            mass_sweep(config, 0.0, progress=False)
