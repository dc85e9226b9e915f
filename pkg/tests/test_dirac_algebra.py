import numpy as np
import pytest

from diracssf.dirac_algebra import (
    anticommutation_residual,
    charge_conjugate_potential,
    charge_conjugation_matrix,
    commutant_form,
    dirac_matrices,
    validate_alpha12_commutant,
)


def random_hermitian(rng, n=4):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def test_beta_is_diagonal_signature():
    dm = dirac_matrices()
    assert np.array_equal(dm.beta, np.diag([1.0, 1.0, -1.0, -1.0]))


def test_alpha1_squares_to_identity():
    dm = dirac_matrices()
    assert np.max(np.abs(dm.alpha1 @ dm.alpha1 - np.eye(4))) == 0.0


def test_anticommutation_relations_exact():
    assert anticommutation_residual(dirac_matrices()) < 1e-15


def test_matrices_hermitian_and_unitary():
    dm = dirac_matrices()
    for mat in (*dm.alphas, dm.beta):
        assert np.max(np.abs(mat - mat.conj().T)) == 0.0
        assert np.max(np.abs(mat @ mat.conj().T - np.eye(4))) == 0.0


def test_charge_conjugation_reverses_diagonal():
    v = np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex)
    out = charge_conjugate_potential(v)
    assert np.allclose(np.diag(out).real, [4.0, 3.0, 2.0, 1.0], atol=1e-15)


def test_charge_conjugation_identity_invariant():
    assert np.allclose(charge_conjugate_potential(np.eye(4)), np.eye(4))


def test_charge_conjugation_entry_pattern(rng):
    # entry (1,2) of the image equals -conj(V[4,3]) in 1-based indexing
    for _ in range(20):
        v = random_hermitian(rng)
        out = charge_conjugate_potential(v)
        assert abs(out[0, 1] - (-np.conj(v[3, 2]))) < 1e-14
        assert abs(out[0, 0] - v[3, 3]) < 1e-14
        assert abs(out[1, 1] - v[2, 2]) < 1e-14


def test_charge_conjugation_is_involution(rng):
    for _ in range(10):
        v = random_hermitian(rng)
        twice = charge_conjugate_potential(charge_conjugate_potential(v))
        assert np.max(np.abs(twice - v)) < 1e-13


def test_charge_conjugation_preserves_spectrum(rng):
    v = random_hermitian(rng)
    out = charge_conjugate_potential(v)
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(v), atol=1e-12)


def test_charge_conjugation_unitary_squares_to_identity():
    u = charge_conjugation_matrix()
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-15
    assert np.max(np.abs(u @ u - np.eye(4))) < 1e-15


def test_charge_conjugation_rejects_non_hermitian():
    with pytest.raises(ValueError):
        charge_conjugate_potential(np.triu(np.ones((4, 4))))


def test_commutant_pattern_accepted():
    v = commutant_form(1.0, 2.0, 1j)
    ok, res = validate_alpha12_commutant(v)
    assert ok and res < 1e-15


def test_commutant_rejects_unpaired_diagonal():
    # diag(1,0,0,0) breaks the pairing of entries (1,1) and (4,4);
    # oracle: direct commutator with alpha_1 is nonzero
    dm = dirac_matrices()
    v = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    assert np.max(np.abs(v @ dm.alpha1 - dm.alpha1 @ v)) > 0.4
    ok, res = validate_alpha12_commutant(v)
    assert not ok and res > 0.4


def test_commutant_identity_accepted():
    ok, res = validate_alpha12_commutant(np.eye(4, dtype=complex))
    assert ok and res == 0.0


def test_commutant_pattern_matches_commutator_bothways(rng):
    # randomized agreement sweep of the two detection routes
    for _ in range(50):
        v = commutant_form(rng.standard_normal(), rng.standard_normal(),
                           rng.standard_normal() + 1j * rng.standard_normal())
        ok, _ = validate_alpha12_commutant(v)
        assert ok
    for _ in range(50):
        v = random_hermitian(rng)
        expected = np.max(np.abs(v - commutant_form(v[0, 0].real, v[1, 1].real,
                                                    v[0, 2]))) < 1e-12
        ok, _ = validate_alpha12_commutant(v)
        assert ok == expected
