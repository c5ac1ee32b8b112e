import math

import numpy as np
import pytest

from pmcs import wavefunctions as wf
from pmcs.errors import ConvergenceError

VALID_LEVELS = (0, 3, 4, 5, 6, 7)


class TestPotential:
    def test_origin_exact(self):
        assert wf.potential(0.0) == -8.0

    def test_numerator_zero_point(self):
        assert wf.potential(1 / math.sqrt(2)) == pytest.approx(0.5, abs=1e-12)

    def test_harmonic_asymptote(self):
        assert 1.0 < wf.potential(10.0) / 100.0 < 1.01


class TestEigenfunctions:
    def test_ground_state_at_origin(self):
        assert wf.eigenfunction(0, 0.0) == pytest.approx(math.sqrt(2 / math.sqrt(math.pi)), rel=1e-14)

    def test_n3_vanishes_at_origin(self):
        assert wf.eigenfunction(3, 0.0) == 0.0

    @pytest.mark.parametrize("n", [0, 3, 4, 5, 6, 7, 8, 9, 10])
    def test_gaussian_decay(self, n):
        # |psi_n(8)| < 1e-10 only holds through n = 6 (n = 10 gives ~9e-9);
        # higher levels need a slightly larger abscissa for the same bound.
        if n <= 6:
            assert abs(wf.eigenfunction(n, 8.0)) < 1e-10
        assert abs(wf.eigenfunction(n, 9.5)) < 1e-10

    @pytest.mark.parametrize("n", [1, 2, -1])
    def test_invalid_levels_rejected(self, n):
        with pytest.raises(ValueError):
            wf.eigenfunction(n, 0.0)
        with pytest.raises(ValueError):
            wf.energy(n)

    @pytest.mark.parametrize("n", VALID_LEVELS)
    def test_parity(self, n):
        x = np.linspace(0.05, 6.0, 37)
        left = wf.eigenfunction(n, -x)
        right = (-1.0) ** n * wf.eigenfunction(n, x)
        assert np.max(np.abs(left - right)) <= 1e-12 * max(1.0, np.max(np.abs(right)))

    def test_eigenstate_record(self):
        st = wf.EigenState.for_level(4)
        assert st.energy == 2.5
        assert st.norm_const == pytest.approx(math.sqrt(6 / (16 * 24 * math.sqrt(math.pi))), rel=1e-14)
        with pytest.raises(ValueError):
            wf.EigenState.for_level(2)

    @pytest.mark.parametrize("n", VALID_LEVELS)
    def test_linear_spectrum(self, n):
        assert wf.energy(n) == n - 1.5


class TestOrthonormality:
    def test_ground_state_normalized(self):
        assert wf.orthonormality_check(0, 0) == pytest.approx(1.0, abs=1e-8)

    def test_parity_orthogonality(self):
        assert wf.orthonormality_check(3, 4) == pytest.approx(0.0, abs=1e-8)

    def test_n3_normalized(self):
        assert wf.orthonormality_check(3, 3) == pytest.approx(1.0, abs=1e-8)

    def test_full_matrix(self):
        for i, n1 in enumerate(VALID_LEVELS):
            for n2 in VALID_LEVELS[i:]:
                value = wf.orthonormality_check(n1, n2)
                target = 1.0 if n1 == n2 else 0.0
                assert abs(value - target) < 1e-7

    def test_under_resolved_grid_rejected(self):
        with pytest.raises(ConvergenceError):
            wf.orthonormality_check(6, 6, wf.GaussLegendreSpec(half_width=9.0, panels=1, order=2))


class TestSchrodingerResidual:
    @pytest.mark.parametrize("n", [0, 3, 4, 5])
    def test_residual_small(self, n):
        assert wf.schrodinger_residual(n) < 1e-4

    def test_wrong_energy_has_large_residual(self):
        # sanity: the residual is actually sensitive to the eigenvalue
        x = np.arange(-8.0, 8.0 + 5e-4, 1e-3)
        psi = wf.eigenfunction(0, x)
        lap = (psi[:-2] - 2 * psi[1:-1] + psi[2:]) / 1e-6
        wrong = 0.5 * (-lap + wf.potential(x[1:-1]) * psi[1:-1]) - (wf.energy(0) + 1.0) * psi[1:-1]
        assert np.linalg.norm(wrong) / np.linalg.norm(psi[1:-1]) > 0.5
