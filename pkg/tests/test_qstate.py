import numpy as np
import pytest
import scipy.linalg

from conftest import ptrace_naive, random_density, random_hermitian, random_unitary
from qstrobe.qstate import (ANCILLA, BELL_BASIS, ENV, HADAMARD, ID2, PAULI_X,
                            PAULI_Y, PAULI_Z, PHI_PLUS, SYSTEM,
                            InvariantViolation, apply_unitary, dagger, density,
                            distance_up_to_phase, eig_hermitian, expm_hermitian,
                            partial_trace, partial_transpose,
                            require_density_matrix, tensor)

KET0 = np.array([1, 0], dtype=complex)
KET00 = np.array([1, 0, 0, 0], dtype=complex)


class TestTensor:
    def test_identity(self):
        assert np.array_equal(tensor(ID2, ID2), np.eye(4))

    def test_pauli_z_with_identity(self):
        assert np.array_equal(tensor(PAULI_Z, ID2), np.diag([1, 1, -1, -1]).astype(complex))

    def test_hadamard_pair_on_00(self):
        # expanding (H|0>) (x) (H|0>) by hand gives four +1/2 amplitudes
        psi = tensor(HADAMARD, HADAMARD) @ KET00
        assert np.allclose(psi, np.full(4, 0.5), atol=1e-15)

    def test_three_factors(self):
        out = tensor(PAULI_X, ID2, PAULI_Z)
        assert out.shape == (8, 8)
        assert np.array_equal(out, np.kron(PAULI_X, np.kron(ID2, PAULI_Z)))


class TestPartialTrace:
    def test_product_state_factorizes(self):
        rho = tensor(density(PHI_PLUS), ID2 / 2)
        reduced = partial_trace(rho, (ANCILLA, SYSTEM))
        assert np.allclose(reduced, density(PHI_PLUS), atol=1e-14)

    def test_bell_marginal_is_mixed(self):
        reduced = partial_trace(density(PHI_PLUS), 1)
        assert np.allclose(reduced, ID2 / 2, atol=1e-14)

    def test_against_index_summation_oracle(self, rng):
        for _ in range(20):
            rho = random_density(rng, 8)
            for keep in [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]:
                assert np.allclose(partial_trace(rho, keep),
                                   ptrace_naive(rho, 3, keep), atol=1e-12)

    def test_keep_all_is_identity(self, rng):
        rho = random_density(rng, 8)
        assert np.allclose(partial_trace(rho, (0, 1, 2)), rho, atol=1e-15)

    def test_composes(self, rng):
        rho = random_density(rng, 8)
        via_two = partial_trace(partial_trace(rho, (ANCILLA, SYSTEM)), 1)
        assert np.allclose(via_two, partial_trace(rho, SYSTEM), atol=1e-13)

    def test_trace_preserved(self, rng):
        rho = random_density(rng, 8)
        assert abs(np.trace(partial_trace(rho, (0, 2))) - 1) < 1e-12

    def test_invalid_subsystem(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, (2,))
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, ())


class TestPartialTranspose:
    def test_product_state_stays_psd(self, rng):
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 2)
        pt = partial_transpose(tensor(rho_a, rho_b), 1)
        assert np.allclose(pt, tensor(rho_a, rho_b.T), atol=1e-14)
        assert np.linalg.eigvalsh(pt).min() > -1e-12

    def test_bell_state_minimum_eigenvalue(self):
        w = np.linalg.eigvalsh(partial_transpose(density(PHI_PLUS), 1))
        assert abs(w.min() + 0.5) < 1e-12

    def test_maximally_mixed_unchanged(self):
        rho = np.eye(4, dtype=complex) / 4
        assert np.allclose(partial_transpose(rho, 0), rho, atol=1e-15)

    def test_involution_trace_hermiticity(self, rng):
        rho = random_density(rng, 8)
        for sub in range(3):
            pt = partial_transpose(rho, sub)
            assert np.allclose(partial_transpose(pt, sub), rho, atol=1e-15)
            assert abs(np.trace(pt) - 1) < 1e-12
            assert np.max(np.abs(pt - dagger(pt))) < 1e-12

    def test_invalid_subsystem(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(4) / 4, 5)


class TestEigHermitian:
    def test_pauli_z(self):
        w, _ = eig_hermitian(PAULI_Z)
        assert np.allclose(w, [1, -1])

    def test_pauli_x_eigenvectors(self):
        w, v = eig_hermitian(PAULI_X)
        assert np.allclose(w, [1, -1])
        plus = (np.array([1, 1]) / np.sqrt(2)).astype(complex)
        assert abs(abs(np.vdot(plus, v[:, 0])) - 1) < 1e-12

    def test_reconstruction_residual(self, rng):
        for _ in range(10):
            m = random_hermitian(rng, 8)
            w, v = eig_hermitian(m)
            resid = np.max(np.abs((v * w) @ dagger(v) - m))
            assert resid <= 1e-9 * np.max(np.abs(m))
            assert np.all(np.diff(w) <= 1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvariantViolation):
            eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


class TestExpmHermitian:
    def test_zero_time(self, rng):
        assert np.allclose(expm_hermitian(random_hermitian(rng, 4), 0.0), np.eye(4), atol=1e-14)

    def test_sigma_y_gives_rotation(self):
        for phi in np.linspace(-np.pi, np.pi, 17):
            expected = np.cos(phi) * ID2 - 1j * np.sin(phi) * PAULI_Y
            assert np.allclose(expm_hermitian(PAULI_Y, phi), expected, atol=1e-12)

    def test_sigma_z_pi_is_minus_identity(self):
        assert np.allclose(expm_hermitian(PAULI_Z, np.pi), -ID2, atol=1e-12)

    def test_semigroup_property(self, rng):
        h = random_hermitian(rng, 8)
        combined = expm_hermitian(h, 0.7) @ expm_hermitian(h, 0.4)
        assert np.max(np.abs(combined - expm_hermitian(h, 1.1))) < 1e-9

    def test_against_scipy(self, rng):
        for _ in range(5):
            h = random_hermitian(rng, 8)
            t = rng.uniform(-2, 2)
            assert np.allclose(expm_hermitian(h, t),
                               scipy.linalg.expm(-1j * h * t), atol=1e-10)

    def test_result_is_unitary(self, rng):
        u = expm_hermitian(random_hermitian(rng, 8), 1.3)
        assert np.max(np.abs(dagger(u) @ u - np.eye(8))) < 1e-10


class TestApplyUnitary:
    def test_identity(self, rng):
        rho = random_density(rng, 4)
        assert np.allclose(apply_unitary(rho, np.eye(4)), rho, atol=1e-15)

    def test_pauli_x_flips(self):
        assert np.allclose(apply_unitary(density(KET0), PAULI_X),
                           np.diag([0, 1]).astype(complex), atol=1e-15)

    def test_spectrum_invariant(self, rng):
        rho = random_density(rng, 8)
        u = random_unitary(rng, 8)
        before = np.sort(np.linalg.eigvalsh(rho))
        after = np.sort(np.linalg.eigvalsh(apply_unitary(rho, u)))
        assert np.allclose(before, after, atol=1e-12)
        require_density_matrix(apply_unitary(rho, u))

    def test_dim_mismatch(self, rng):
        with pytest.raises(ValueError):
            apply_unitary(random_density(rng, 4), ID2)

    def test_rejects_non_unitary(self, rng):
        with pytest.raises(InvariantViolation):
            apply_unitary(random_density(rng, 2), np.array([[1, 0], [0, 2]], dtype=complex))


class TestDistanceUpToPhase:
    def test_same_matrix(self, rng):
        u = random_unitary(rng, 4)
        assert distance_up_to_phase(u, u) < 1e-14

    def test_sign_flip(self, rng):
        u = random_unitary(rng, 4)
        assert distance_up_to_phase(u, -u) < 1e-14

    def test_arbitrary_global_phase(self, rng):
        u = random_unitary(rng, 4)
        for theta in rng.uniform(-np.pi, np.pi, 10):
            assert distance_up_to_phase(np.exp(1j * theta) * u, u) < 1e-13

    def test_identity_vs_pauli_x(self):
        # min over theta of max|I - e^{i theta} sigma_x|: any phase keeps
        # the unit off-diagonal magnitude, so the distance is exactly 1
        assert abs(distance_up_to_phase(ID2, PAULI_X) - 1.0) < 1e-14

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            distance_up_to_phase(ID2, np.eye(4))


def test_bell_basis_is_unitary():
    assert np.max(np.abs(dagger(BELL_BASIS) @ BELL_BASIS - np.eye(4))) < 1e-14
