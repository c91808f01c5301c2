"""
Tests for spectral/.

Covers:
  - Jacobi eigensolver against scipy's symmetric driver
  - Gelfand radius on the two-state chain in each norm, nilpotent input
  - eigenvalue-1 multiplicity
  - reversible spectrum, pi-perp norm, NotReversible
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import eigh

from chain.core import StationaryDist, stationary, validate_chain
from errors import BadParameters, NormEvaluation, NotReversible
from measures.norms import WeightFunction
from schemas import NormSpace
from spectral.analysis import (
    L2pi,
    LinfV,
    LinfV0,
    eigenvalue_one_multiplicity,
    gelfand_radius,
    pi_perp_norm,
    reversible_spectrum,
)
from spectral.jacobi import jacobi_eigh, symmetric_eigh


class TestJacobi:
    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_matches_lapack(self, n):
        rng = np.random.default_rng(n)
        A = rng.normal(size=(n, n))
        A = A + A.T
        values, vectors = jacobi_eigh(A)
        assert values == pytest.approx(eigh(A, eigvals_only=True), abs=1e-10)
        assert vectors @ np.diag(values) @ vectors.T == pytest.approx(A, abs=1e-9)

    def test_rejects_asymmetric(self):
        with pytest.raises(BadParameters):
            jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_large_matrix_goes_to_lapack(self):
        A = np.diag(np.arange(5.0))
        values, _ = symmetric_eigh(A, max_states=3)
        assert values == pytest.approx(np.arange(5.0))


class TestGelfand:
    def test_sup_norm_radius_of_centered_kernel(self, two_state, two_state_pi):
        centered = two_state.P - two_state_pi.projector()
        report = gelfand_radius(centered, LinfV(WeightFunction.constant(2)))
        assert report.radius == pytest.approx(0.5, abs=1e-6)
        assert report.norm_space == NormSpace.LINF_V
        assert not report.converged

    def test_zero_mean_radius_of_kernel(self, two_state, two_state_pi):
        report = gelfand_radius(two_state.P, LinfV0(WeightFunction.constant(2), two_state_pi))
        assert report.radius == pytest.approx(0.5, abs=1e-6)

    def test_l2_radius(self, two_state, two_state_pi):
        centered = two_state.P - two_state_pi.projector()
        report = gelfand_radius(centered, L2pi(two_state_pi))
        assert report.radius == pytest.approx(0.5, abs=1e-6)

    def test_iterates_are_powers_of_two(self, two_state, two_state_pi):
        centered = two_state.P - two_state_pi.projector()
        report = gelfand_radius(centered, LinfV(WeightFunction.constant(2)), n_max=64)
        assert [it.n for it in report.gelfand_iterates] == [1, 2, 4, 8, 16, 32, 64]

    def test_uniform_chain_has_zero_radius(self, uniform4):
        pi = stationary(uniform4)
        report = gelfand_radius(uniform4.P - pi.projector(), LinfV(WeightFunction.constant(4)))
        assert report.radius <= 1e-12

    def test_nilpotent(self):
        K = np.array([[0.0, 1.0], [0.0, 0.0]])
        report = gelfand_radius(K, LinfV(WeightFunction.constant(2)))
        assert report.radius == 0.0

    def test_periodic_chain_has_unit_radius(self, flip):
        pi = stationary(flip)
        report = gelfand_radius(flip.P - pi.projector(), LinfV(WeightFunction.constant(2)))
        assert report.radius == pytest.approx(1.0, abs=1e-9)

    def test_weighted_norm_needs_positive_pi(self, two_state):
        degenerate = StationaryDist(pi=np.array([1.0, 0.0]))
        with pytest.raises(NormEvaluation):
            gelfand_radius(two_state.P, L2pi(degenerate))


class TestMultiplicity:
    def test_irreducible_chain(self, two_state):
        assert eigenvalue_one_multiplicity(two_state) == 1

    def test_identity(self):
        assert eigenvalue_one_multiplicity(validate_chain(np.eye(3))) == 3

    def test_two_closed_classes(self):
        chain = validate_chain([[0.5, 0.5, 0, 0], [0.5, 0.5, 0, 0], [0, 0, 0.2, 0.8], [0, 0, 0.6, 0.4]])
        assert eigenvalue_one_multiplicity(chain) == 2


class TestReversibleSpectrum:
    def test_two_state(self, two_state, two_state_pi):
        spectrum = reversible_spectrum(two_state, two_state_pi)
        assert spectrum.eigenvalues == pytest.approx([1.0, 0.5], abs=1e-12)
        assert spectrum.gap == pytest.approx(0.5)
        assert spectrum.top_multiplicity == 1

    def test_eigenvalues_descending(self, reversible10):
        spectrum = reversible_spectrum(reversible10, stationary(reversible10))
        assert spectrum.eigenvalues == sorted(spectrum.eigenvalues, reverse=True)
        assert spectrum.eigenvalues[0] == pytest.approx(1.0, abs=1e-10)
        assert all(-1.0 <= lam <= 1.0 for lam in spectrum.eigenvalues)

    def test_matches_nonsymmetric_eigenvalues(self, reversible10):
        spectrum = reversible_spectrum(reversible10, stationary(reversible10))
        direct = np.sort(np.linalg.eigvals(reversible10.P).real)[::-1]
        assert spectrum.eigenvalues == pytest.approx(direct.tolist(), abs=1e-9)

    def test_flip_has_minus_one(self, flip):
        spectrum = reversible_spectrum(flip, stationary(flip))
        assert spectrum.eigenvalues == pytest.approx([1.0, -1.0], abs=1e-12)
        assert spectrum.second_largest_modulus == pytest.approx(1.0)

    def test_pi_perp_norm(self, two_state, two_state_pi):
        assert pi_perp_norm(two_state, two_state_pi) == pytest.approx(0.5, abs=1e-12)

    def test_pi_perp_norm_matches_second_modulus(self, reversible10):
        pi = stationary(reversible10)
        spectrum = reversible_spectrum(reversible10, pi)
        assert pi_perp_norm(reversible10, pi) == pytest.approx(spectrum.second_largest_modulus, abs=1e-10)

    def test_rotation_is_not_reversible(self, rotation3):
        with pytest.raises(NotReversible) as info:
            reversible_spectrum(rotation3, stationary(rotation3))
        assert info.value.residual > 0
