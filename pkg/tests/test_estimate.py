import math

import numpy as np
import pytest

from qmetro import (
    BasisTag,
    DistributionFamily,
    InvalidDistributionError,
    InvalidFamilyError,
    Observable,
    Povm,
    classical_fisher,
    collective_ops,
    cramer_rao,
    css,
    error_propagation,
    ghz,
    moments,
    mz_two_mode,
    parity_sector_povm,
    povm_family,
    povm_probabilities,
    projective_povm,
    qfi_from_family,
    qfi_generator,
    ramsey,
    rotate,
    run_monte_carlo,
    twin_fock,
)
from qmetro.spinops import evolve


def spin_obs(n, which="z"):
    ops = collective_ops(n)
    return Observable(getattr(ops, f"j{which}"), ops.basis_tag)


def ramsey_single_family():
    return DistributionFamily(
        outcome_labels=("down", "up"),
        prob_at=lambda phi: np.array(
            [math.cos(phi / 2) ** 2, math.sin(phi / 2) ** 2]
        ),
    )


def bernoulli_family():
    return DistributionFamily(
        outcome_labels=("heads", "tails"),
        prob_at=lambda theta: np.array([theta, 1.0 - theta]),
        derivative=lambda theta: np.array([1.0, -1.0]),
    )


class TestClassicalFisher:
    def test_single_atom_ramsey_flat(self):
        family = ramsey_single_family()
        for phi in np.linspace(0.05, math.pi - 0.05, 25):
            assert classical_fisher(family, phi) == pytest.approx(1.0, abs=1e-9)

    def test_bernoulli_analytic(self):
        # d/dtheta of the two-outcome sum gives 1/(theta(1-theta))
        family = bernoulli_family()
        assert classical_fisher(family, 0.3) == pytest.approx(
            1.0 / (0.3 * 0.7), rel=1e-12
        )
        assert classical_fisher(family, 0.3) == pytest.approx(
            4.761904761904762, rel=1e-12
        )

    def test_bernoulli_finite_difference_agrees(self):
        family = DistributionFamily(
            outcome_labels=("heads", "tails"),
            prob_at=lambda theta: np.array([theta, 1.0 - theta]),
        )
        assert classical_fisher(family, 0.3) == pytest.approx(
            1.0 / (0.3 * 0.7), rel=1e-9
        )

    def test_theta_independent_is_zero(self):
        family = DistributionFamily(
            outcome_labels=("x", "y", "z"),
            prob_at=lambda theta: np.array([0.2, 0.3, 0.5]),
        )
        assert classical_fisher(family, 1.234) == 0.0

    def test_negative_probability_rejected(self):
        family = DistributionFamily(
            outcome_labels=("a", "b"),
            prob_at=lambda theta: np.array([1.2, -0.2]),
        )
        with pytest.raises(InvalidDistributionError):
            classical_fisher(family, 0.5)

    def test_unnormalized_rejected(self):
        family = DistributionFamily(
            outcome_labels=("a", "b"),
            prob_at=lambda theta: np.array([0.5, 0.4]),
        )
        with pytest.raises(InvalidDistributionError):
            classical_fisher(family, 0.5)

    def test_outcome_permutation_invariance(self):
        base = ramsey_single_family()
        flipped = DistributionFamily(
            outcome_labels=("up", "down"),
            prob_at=lambda phi: base.prob_at(phi)[::-1],
        )
        for phi in (0.4, 1.1, 2.6):
            assert classical_fisher(base, phi) == pytest.approx(
                classical_fisher(flipped, phi), abs=1e-8
            )

    def test_outcome_refinement_never_loses_information(self):
        # merging outcomes can only lose information
        n = 4
        state_family = lambda phi: ramsey(css(n, 0.0, 0.0), phi)
        fine = povm_family(state_family, projective_povm(BasisTag("spin", n)))
        ops = collective_ops(n)
        up = np.diag((np.diag(ops.jz).real > 0).astype(complex))
        coarse_povm = Povm((up, np.eye(n + 1) - up), BasisTag("spin", n))
        coarse = povm_family(state_family, coarse_povm)
        for phi in (0.5, 1.2):
            assert classical_fisher(fine, phi) >= classical_fisher(coarse, phi) - 1e-9


class TestPovm:
    def test_css_dicke_projection_is_binomial(self):
        n = 6
        state = css(n, math.pi / 2, 0.0)
        probs = povm_probabilities(state, projective_povm(state.basis_tag))
        expected = np.array([math.comb(n, k) for k in range(n + 1)]) / 2**n
        np.testing.assert_allclose(probs, expected, atol=1e-12)

    def test_identity_povm(self):
        povm = Povm((np.eye(3, dtype=complex),), BasisTag("spin", 2))
        probs = povm_probabilities(css(2, 0.7, 0.1), povm)
        assert probs[0] == pytest.approx(1.0, abs=1e-12)

    def test_parity_sectors_on_twin_fock_at_zero_phase(self):
        state = mz_two_mode(twin_fock(1), 0.0)
        povm = parity_sector_povm("b", state.cutoff)
        probs = povm_probabilities(state, povm)
        np.testing.assert_allclose(probs, [1.0, 0.0], atol=1e-12)

    def test_completeness_enforced(self):
        half = 0.5 * np.eye(2, dtype=complex)
        with pytest.raises(ValueError, match="identity"):
            Povm((half,), BasisTag("spin", 1))

    def test_psd_enforced(self):
        e1 = np.diag([1.5, 0.0]).astype(complex)
        e2 = np.diag([-0.5, 1.0]).astype(complex)
        with pytest.raises(ValueError, match="positive"):
            Povm((e1, e2), BasisTag("spin", 1))

    def test_basis_mismatch(self):
        povm = projective_povm(BasisTag("spin", 2))
        with pytest.raises(ValueError, match="basis"):
            povm_probabilities(css(3, 0.2, 0.0), povm)


class TestQfi:
    @pytest.mark.parametrize("n", [1, 2, 10, 50])
    def test_ghz_generator_jz(self, n):
        assert qfi_generator(ghz(n), spin_obs(n)) == pytest.approx(
            n**2, abs=1e-8
        )

    def test_generator_eigenstate_zero(self):
        assert qfi_generator(css(4, 0.0, 0.0), spin_obs(4)) == pytest.approx(
            0.0, abs=1e-12
        )

    @pytest.mark.parametrize("n", [1, 3, 12])
    def test_equator_css_jz(self, n):
        state = css(n, math.pi / 2, 0.0)
        assert qfi_generator(state, spin_obs(n)) == pytest.approx(n, abs=1e-8)

    @pytest.mark.parametrize(
        "state,which",
        [
            (css(5, math.pi / 2, 0.0), "z"),
            (css(5, 1.1, 0.7), "x"),
            (ghz(7), "z"),
            (rotate(ghz(4), (0.0, 1.0, 0.0), 0.4), "y"),
        ],
    )
    def test_family_form_matches_generator_form(self, state, which):
        n = state.n_particles
        obs = spin_obs(n, which)

        def family(theta):
            return evolve(state.amplitudes, obs.matrix, theta)

        expected = qfi_generator(state, obs)
        got = qfi_from_family(family, 0.35)
        assert got == pytest.approx(expected, rel=1e-6, abs=1e-9)

    def test_global_phase_family_is_zero(self):
        base = css(3, 0.8, 0.2).amplitudes

        def family(theta):
            return np.exp(1j * theta) * base

        assert qfi_from_family(family, 0.5) == pytest.approx(0.0, abs=1e-8)

    def test_norm_drift_rejected(self):
        base = css(3, 0.8, 0.2).amplitudes

        def family(theta):
            return (1.0 + theta) * base

        with pytest.raises(InvalidFamilyError):
            qfi_from_family(family, 0.5)


class TestCramerRao:
    def test_standard_quantum_limit(self):
        for n in (4, 25, 10_000):
            assert cramer_rao(1.0, n) == pytest.approx(1.0 / math.sqrt(n))

    def test_heisenberg_limit(self):
        for n in (2, 10, 50):
            assert cramer_rao(float(n**2), 1) == pytest.approx(1.0 / n)

    def test_zero_information_is_infinite(self):
        assert math.isinf(cramer_rao(0.0, 7))

    def test_invalid_repetitions(self):
        with pytest.raises(ValueError):
            cramer_rao(1.0, 0)

    def test_negative_fisher_rejected(self):
        with pytest.raises(ValueError):
            cramer_rao(-1.0, 1)


class TestErrorPropagation:
    @pytest.mark.parametrize("n", [2, 10, 100])
    def test_css_ramsey_reaches_sql(self, n):
        initial = css(n, 0.0, 0.0)
        jz = spin_obs(n)

        def signal(phi):
            return moments(ramsey(initial, phi), jz)[0]

        def noise(phi):
            return math.sqrt(moments(ramsey(initial, phi), jz)[1])

        for phi in (0.6, math.pi / 2, 2.2):
            prop = error_propagation(signal, noise, phi)
            assert not prop.stationary
            assert prop.value == pytest.approx(1.0 / math.sqrt(n), abs=1e-8)

    def test_stationary_point_flagged(self):
        prop = error_propagation(lambda t: 1.0, lambda t: 0.5, 0.3)
        assert prop.stationary
        assert math.isinf(prop.value)


class TestBoundConsistency:
    """Classical Fisher <= QFI; error propagation >= quantum bound."""

    def _configurations(self):
        configs = []
        for n, theta in ((3, 1.1), (6, math.pi / 2)):
            state = css(n, theta, 0.4)
            obs = spin_obs(n)
            family = lambda t, s=state, o=obs: evolve(s.amplitudes, o.matrix, t)
            configs.append((n, state, obs, family))
        g = ghz(5)
        obs = spin_obs(5)
        configs.append(
            (5, g, obs, lambda t, s=g, o=obs: evolve(s.amplitudes, o.matrix, t))
        )
        return configs

    def test_classical_fisher_bounded_by_qfi(self):
        for n, state, obs, family in self._configurations():
            qfi = qfi_generator(state, obs)
            povm = projective_povm(BasisTag("spin", n))

            def tagged_family(t):
                from qmetro import CollectiveSpinState

                return CollectiveSpinState(n, family(t))

            fisher = classical_fisher(povm_family(tagged_family, povm), 0.3)
            assert fisher <= qfi + 1e-6

    def test_error_propagation_respects_qcrb(self):
        for n, state, obs, family in self._configurations():
            qfi = qfi_generator(state, obs)
            if qfi == 0.0:
                continue
            from qmetro import CollectiveSpinState

            def signal(t):
                return moments(CollectiveSpinState(n, family(t)), obs)[0]

            def noise(t):
                return math.sqrt(moments(CollectiveSpinState(n, family(t)), obs)[1])

            prop = error_propagation(signal, noise, 0.3)
            if math.isfinite(prop.value):
                assert prop.value >= cramer_rao(qfi, 1) - 1e-8


class TestMonteCarlo:
    def test_same_seed_bit_exact(self):
        family = bernoulli_family()
        a = run_monte_carlo(family, 0.5, 500, 20, seed=7, search_interval=(0.01, 0.99))
        b = run_monte_carlo(family, 0.5, 500, 20, seed=7, search_interval=(0.01, 0.99))
        assert np.array_equal(a.estimates, b.estimates)
        assert a.mse == b.mse

    def test_different_seed_differs(self):
        family = bernoulli_family()
        a = run_monte_carlo(family, 0.5, 500, 20, seed=7, search_interval=(0.01, 0.99))
        b = run_monte_carlo(family, 0.5, 500, 20, seed=8, search_interval=(0.01, 0.99))
        assert not np.array_equal(a.estimates, b.estimates)

    def test_bernoulli_mse_tracks_crb(self):
        family = bernoulli_family()
        run = run_monte_carlo(
            family, 0.5, 10_000, 200, seed=5, search_interval=(0.01, 0.99)
        )
        crb_variance = 1.0 / (10_000 * classical_fisher(family, 0.5))
        assert 1.0 <= run.mse / crb_variance <= 1.3

    def test_theta_outside_interval_rejected(self):
        with pytest.raises(ValueError, match="interval"):
            run_monte_carlo(
                bernoulli_family(), 0.999, 10, 2, seed=0, search_interval=(0.01, 0.99)
            )

    def test_uninformative_family_pins_grid_argmax(self):
        # flat likelihood: the grid argmax convention picks the first point
        family = DistributionFamily(
            outcome_labels=("only",),
            prob_at=lambda theta: np.array([1.0]),
        )
        run = run_monte_carlo(
            family, 0.5, 1, 3, seed=0, search_interval=(0.0, 1.0)
        )
        assert np.all(run.estimates <= 1.0 / 511 + 1e-9)
        assert run.mse > 0.2  # far above any informative bound

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            run_monte_carlo(bernoulli_family(), 0.5, 0, 5, 0, (0.0, 1.0))
        with pytest.raises(ValueError):
            run_monte_carlo(bernoulli_family(), 0.5, 5, 0, 0, (0.0, 1.0))
