import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pmcs import fock
from pmcs.errors import ConvergenceError
from pmcs.weyl import ModulationParams

small_complex = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


class TestLadders:
    def test_annihilation_entry(self):
        a, _ = fock.ladder_ops(8)
        assert a.matrix[0, 1] == 1.0

    def test_commutator_structure(self):
        # [a, a†] = I everywhere except the truncation corner, which is 1 - D.
        # sqrt(n)*sqrt(n) is not exactly n in floats, hence machine tolerance.
        for dim in (12, 64):
            a, ad = fock.ladder_ops(dim)
            comm = a.matrix @ ad.matrix - ad.matrix @ a.matrix - np.eye(dim)
            corner = comm[dim - 1, dim - 1].real
            assert corner == pytest.approx(-dim, rel=4e-15)
            comm = comm.copy()
            comm[dim - 1, dim - 1] = 0.0
            off = np.abs(comm)
            off_diag = off - np.diag(np.diag(off))
            assert np.max(off_diag) == 0.0
            assert np.max(np.diag(off)) < 4e-14 * dim

    def test_number_operator_exact(self):
        dim = 40
        nop = fock.number_operator(dim)
        assert np.array_equal(nop.matrix, np.diag(np.arange(dim)).astype(complex))
        a, ad = fock.ladder_ops(dim)
        assert np.max(np.abs(ad.matrix @ a.matrix - nop.matrix)) < 4e-14 * dim

    def test_dim_cap(self):
        with pytest.raises(ValueError):
            fock.ladder_ops(300)


class TestCoherentState:
    def test_vacuum(self):
        vec, report = fock.coherent_state(0.0, 8)
        expected = np.zeros(8, complex)
        expected[0] = 1.0
        assert np.array_equal(vec.amplitudes, expected)
        assert report.converged and report.tail_mass == 0.0

    def test_mean_photon_number(self):
        vec, _ = fock.coherent_state(1.0, 40)
        nop = fock.number_operator(40)
        assert fock.expectation(nop, vec).real == pytest.approx(1.0, abs=1e-10)

    def test_normalized(self):
        vec, _ = fock.coherent_state(2j, 60)
        assert vec.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_unconverged_truncation_raises(self):
        with pytest.raises(ConvergenceError):
            fock.coherent_state(4.0, 16)

    @given(small_complex, small_complex)
    def test_overlap_formula(self, z1, z2):
        v1, _ = fock.coherent_state(z1, 60)
        v2, _ = fock.coherent_state(z2, 60)
        got = v1.inner(v2)
        ref = np.exp(-(abs(z1) ** 2 + abs(z2) ** 2) / 2 + np.conj(z1) * z2)
        assert got == pytest.approx(ref, abs=1e-10)

    def test_eigenvalue_property(self):
        vec, _ = fock.coherent_state(0.7 - 0.4j, 40)
        a, _ = fock.ladder_ops(40)
        assert fock.expectation(a, vec) == pytest.approx(0.7 - 0.4j, abs=1e-10)


class TestSuperposedPower:
    def test_identity_power(self):
        vec, _ = fock.coherent_state(0.5, 32)
        out = fock.apply_superposed_power(ModulationParams(1, 1, 0), vec)
        assert out is vec

    def test_single_creation_on_vacuum(self):
        vec, _ = fock.coherent_state(0.0, 16)
        out = fock.apply_superposed_power(ModulationParams(0, 1, 1), vec)
        expected = np.zeros(16, complex)
        expected[1] = 1.0
        assert np.allclose(out.amplitudes, expected, atol=1e-15)

    def test_annihilation_eigenvalue(self):
        zeta = 1.2 + 0.3j
        vec, _ = fock.coherent_state(zeta, 50)
        out = fock.apply_superposed_power(ModulationParams(1, 0, 1), vec)
        assert np.allclose(out.amplitudes, zeta * vec.amplitudes, atol=1e-12)

    @given(
        st.integers(min_value=0, max_value=3),
        st.integers(min_value=0, max_value=3),
        st.complex_numbers(max_magnitude=1.2, allow_nan=False, allow_infinity=False),
    )
    def test_power_composition(self, na, nb, mu):
        vec, _ = fock.coherent_state(0.8, 64)
        p_ab = ModulationParams(mu, 1.0, na + nb)
        combined = fock.apply_superposed_power(p_ab, vec)
        step_a = fock.apply_superposed_power(ModulationParams(mu, 1.0, na), vec)
        step_b = fock.apply_superposed_power(ModulationParams(mu, 1.0, nb), step_a)
        scale = max(1.0, float(np.max(np.abs(combined.amplitudes))))
        assert np.allclose(combined.amplitudes, step_b.amplitudes, atol=1e-12 * scale)

    def test_headroom_guard(self):
        vec, _ = fock.coherent_state(0.0, 16)
        with pytest.raises(ValueError):
            fock.apply_superposed_power(ModulationParams(0, 1, 5), vec)


class TestDisplacement:
    def test_zero_is_exact_identity(self):
        disp = fock.displacement(0.0, 12)
        assert np.array_equal(disp.matrix, np.eye(12, dtype=complex))

    @pytest.mark.parametrize("gamma", [0.5, -1.3 + 0.8j, 2.0j, 1.9 - 0.4j])
    def test_displaced_vacuum_is_coherent(self, gamma):
        dim = 60
        disp = fock.displacement(gamma, dim)
        vac = np.zeros(dim, complex)
        vac[0] = 1.0
        got = disp.matrix @ vac
        ref, _ = fock.coherent_state(gamma, dim)
        assert np.max(np.abs(got - ref.amplitudes)) < 1e-9

    def test_group_inverse(self):
        dim = 60
        gamma = 1.1 + 0.6j
        prod = fock.displacement(gamma, dim).matrix @ fock.displacement(-gamma, dim).matrix
        half = dim // 2
        assert np.max(np.abs((prod - np.eye(dim))[:half, :half])) < 1e-9

    def test_unitarity_lower_block(self):
        dim = 60
        disp = fock.displacement(1.5 - 0.9j, dim)
        gram = disp.matrix.conj().T @ disp.matrix
        half = dim // 2
        assert np.max(np.abs((gram - np.eye(dim))[:half, :half])) < 1e-9


class TestExpNumber:
    def test_identity(self):
        op = fock.operator_exp_number(0.0, 10)
        assert np.array_equal(op.matrix, np.eye(10, dtype=complex))

    def test_halving_weights(self):
        op = fock.operator_exp_number(math.log(2.0), 12)
        assert np.allclose(np.diag(op.matrix), 0.5 ** np.arange(12), rtol=1e-14)

    def test_growth_weights_for_s_above_one(self):
        # s = 1.2 gives the ratio (s+1)/(s-1) = 11, i.e. lam = -ln 11.
        op = fock.operator_exp_number(-math.log(11.0), 8)
        assert np.allclose(np.diag(op.matrix), 11.0 ** np.arange(8), rtol=1e-12)

    def test_overflow_guard(self):
        with pytest.raises(ValueError):
            fock.operator_exp_number(-20.0, 256)


class TestTrace:
    def test_identity_trace(self):
        vec, _ = fock.coherent_state(0.9, 40)
        assert fock.density_and_trace(vec, fock.identity(40)) == pytest.approx(1.0, abs=1e-12)

    def test_number_trace(self):
        vec, _ = fock.coherent_state(1.0, 40)
        nop = fock.number_operator(40)
        assert fock.density_and_trace(vec, nop).real == pytest.approx(1.0, abs=1e-10)

    def test_vacuum_parity(self):
        vec, _ = fock.coherent_state(0.0, 16)
        parity = fock.FockOperator(np.diag((-1.0) ** np.arange(16)).astype(complex), label="parity")
        assert fock.density_and_trace(vec, parity) == pytest.approx(1.0)

    def test_nondecaying_summand_raises(self):
        vec, _ = fock.coherent_state(1.5, 28)
        growth = fock.FockOperator(np.diag(11.0 ** np.arange(28)).astype(complex))
        with pytest.raises(ConvergenceError, match="s=1.2-like"):
            fock.density_and_trace(vec, growth, context="s=1.2-like")


class TestVectors:
    def test_minimum_dimension(self):
        with pytest.raises(ValueError):
            fock.FockVector(np.array([1.0, 0.0], dtype=complex))

    def test_normalize_invariant(self):
        vec = fock.FockVector(np.array([3.0, 4.0, 0.0, 0.0], dtype=complex))
        assert vec.normalized().norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_padding_preserves_amplitudes(self):
        vec, _ = fock.coherent_state(0.5, 16)
        padded = vec.padded(32)
        assert padded.dim == 32
        assert np.array_equal(padded.amplitudes[:16], vec.amplitudes)
        assert np.all(padded.amplitudes[16:] == 0)

    def test_default_dim_rule(self):
        zeta, n_pow = 1.5 + 0.5j, 3
        mean = abs(zeta) ** 2
        expected = math.ceil(mean + 10 * math.sqrt(mean + 1)) + 4 * n_pow + 16
        assert fock.default_dim(zeta, n_pow) == expected
