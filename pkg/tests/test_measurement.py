"""Tests for the measurement engine: Kraus pairs, guessing, reversal, closed forms."""

import math

import numpy as np
import pytest

from wmtradeoff.qubit import PureState, STATE_H, STATE_V, apply_operator, pure_overlap
from wmtradeoff.measurement import (
    WeakMeasurement,
    analytic_gmax,
    analytic_prev,
    kraus_pair,
    optimal_guess,
    outcome_distribution,
    per_state_gain,
    per_state_reversal_prob,
    reversal_operator,
    tradeoff_sum,
)

GRID = [round(0.05 * k, 10) for k in range(21)]


def brute_force_branch_probability(wm, state, r):
    """Independent oracle: squared norm of the branch image, raw numpy."""
    diag = (
        [math.sqrt(1 - wm.epsilon), math.sqrt(1 - wm.eta)]
        if r == 1
        else [math.sqrt(wm.epsilon), math.sqrt(wm.eta)]
    )
    image = np.array(diag) * state.amplitudes
    return float(np.sum(np.abs(image) ** 2))


class TestWeakMeasurement:
    @pytest.mark.parametrize("bad", [-0.2, 1.2, math.nan])
    def test_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            WeakMeasurement(bad, 0.5)

    def test_diagonal_degenerate_flag(self):
        assert WeakMeasurement(0.3, 0.3).is_diagonal_degenerate
        assert not WeakMeasurement(0.0, 0.0).is_diagonal_degenerate
        assert not WeakMeasurement(1.0, 1.0).is_diagonal_degenerate
        assert not WeakMeasurement(0.3, 0.7).is_diagonal_degenerate


class TestKrausPair:
    def test_no_measurement_limit(self):
        a1, a2 = kraus_pair(WeakMeasurement(0.0, 0.0))
        np.testing.assert_allclose(a1.matrix, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(a2.matrix, np.zeros((2, 2)), atol=1e-15)

    def test_projective_limit(self):
        a1, a2 = kraus_pair(WeakMeasurement(0.0, 1.0))
        np.testing.assert_allclose(a1.matrix, np.diag([1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(a2.matrix, np.diag([0.0, 1.0]), atol=1e-15)

    def test_flagship_cell_entries(self):
        a1, _ = kraus_pair(WeakMeasurement(0.25, 0.75))
        np.testing.assert_allclose(
            a1.matrix, np.diag([math.sqrt(0.75), math.sqrt(0.25)]), atol=1e-15
        )

    def test_completeness_on_grid(self):
        for e in GRID:
            for h in GRID:
                a1, a2 = kraus_pair(WeakMeasurement(e, h))
                total = a1.matrix.conj().T @ a1.matrix + a2.matrix.conj().T @ a2.matrix
                np.testing.assert_allclose(total, np.eye(2), atol=1e-12)

    def test_branch_probabilities_sum_to_one(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            wm = WeakMeasurement(rng.uniform(), rng.uniform())
            st = PureState(rng.uniform(), rng.uniform(0, 2 * math.pi))
            p1, _ = apply_operator(kraus_pair(wm)[0], st)
            p2, _ = apply_operator(kraus_pair(wm)[1], st)
            assert p1 + p2 == pytest.approx(1.0, abs=1e-12)


class TestOptimalGuess:
    def test_flagship_guesses(self):
        wm = WeakMeasurement(0.25, 0.75)
        assert optimal_guess(wm, 1) == STATE_H
        assert optimal_guess(wm, 2) == STATE_V

    def test_mirrored_guesses(self):
        wm = WeakMeasurement(0.75, 0.25)
        assert optimal_guess(wm, 1) == STATE_V
        assert optimal_guess(wm, 2) == STATE_H

    def test_projective_outcome_identifies_state(self):
        assert optimal_guess(WeakMeasurement(0.0, 1.0), 2) == STATE_V

    def test_tie_collapses_to_h(self):
        wm = WeakMeasurement(0.4, 0.4)
        assert optimal_guess(wm, 1) == STATE_H
        assert optimal_guess(wm, 2) == STATE_H

    def test_invalid_outcome_index(self):
        with pytest.raises(ValueError):
            optimal_guess(WeakMeasurement(0.2, 0.8), 3)

    @pytest.mark.parametrize("eps,eta", [(0.25, 0.75), (0.75, 0.25), (0.1, 0.9)])
    def test_guess_maximizes_haar_objective(self, eps, eta):
        # Brute-force oracle: among basis guesses, the returned one attains
        # the larger Haar-sampled mean of p(r) * |<guess|phi>|^2.
        wm = WeakMeasurement(eps, eta)
        rng = np.random.default_rng(77)
        states = [PureState(rng.uniform(), rng.uniform(0, 2 * math.pi)) for _ in range(20000)]
        for r in (1, 2):
            scores = {}
            for label, guess in (("H", STATE_H), ("V", STATE_V)):
                scores[label] = np.mean(
                    [
                        brute_force_branch_probability(wm, st, r) * pure_overlap(guess, st)
                        for st in states
                    ]
                )
            best = max(scores, key=scores.get)
            chosen = "H" if optimal_guess(wm, r) == STATE_H else "V"
            assert chosen == best
            assert abs(scores["H"] - scores["V"]) > 0.01  # comfortable separation


class TestOutcomeDistribution:
    def test_eigenstate_probabilities(self):
        rec1, rec2 = outcome_distribution(WeakMeasurement(0.25, 0.75), STATE_H)
        assert rec1.probability == pytest.approx(0.75, abs=1e-12)
        assert rec2.probability == pytest.approx(0.25, abs=1e-12)
        assert rec1.post_state.isclose(STATE_H)
        assert rec2.post_state.isclose(STATE_H)

    def test_balanced_state_probability(self):
        # Hand expansion: p(1) = 1 - (eps + eta)/2 at alpha = 0.5, also
        # cross-checked against the brute-force amplitude oracle.
        rng = np.random.default_rng(3)
        st = PureState(0.5, 0.0)
        for _ in range(50):
            wm = WeakMeasurement(rng.uniform(), rng.uniform())
            rec1, rec2 = outcome_distribution(wm, st)
            assert rec1.probability == pytest.approx(
                1.0 - (wm.epsilon + wm.eta) / 2.0, abs=1e-12
            )
            assert rec1.probability == pytest.approx(
                brute_force_branch_probability(wm, st, 1), abs=1e-12
            )
            assert rec1.probability + rec2.probability == pytest.approx(1.0, abs=1e-12)

    def test_projective_split(self):
        rec1, rec2 = outcome_distribution(WeakMeasurement(0.0, 1.0), PureState(0.3))
        assert rec1.probability == pytest.approx(0.3, abs=1e-12)
        assert rec1.post_state.isclose(STATE_H)
        assert rec2.probability == pytest.approx(0.7, abs=1e-12)
        assert rec2.post_state.isclose(STATE_V)

    def test_guess_fidelity_recomputable(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            wm = WeakMeasurement(rng.uniform(), rng.uniform())
            st = PureState(rng.uniform(), rng.uniform(0, 2 * math.pi))
            for rec in outcome_distribution(wm, st):
                assert rec.guess_fidelity == pytest.approx(
                    pure_overlap(rec.guess, st), abs=1e-12
                )


class TestPerStateGain:
    def test_flagship_endpoint(self):
        assert per_state_gain(WeakMeasurement(0.25, 0.75), PureState(0.0)) == pytest.approx(
            0.75, abs=1e-12
        )

    def test_flagship_balanced(self):
        assert per_state_gain(WeakMeasurement(0.25, 0.75), PureState(0.5)) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_flagship_polynomial(self):
        # Hand-derived integrand at (0.25, 0.75): 0.75 - alpha + alpha^2.
        wm = WeakMeasurement(0.25, 0.75)
        for alpha in np.linspace(0.0, 1.0, 21):
            expected = 0.75 - alpha + alpha * alpha
            assert per_state_gain(wm, PureState(float(alpha))) == pytest.approx(
                expected, abs=1e-12
            )

    def test_degenerate_gain_is_alpha_pointwise(self):
        for eps in (0.0, 0.3, 0.8):
            wm = WeakMeasurement(eps, eps)
            for alpha in (0.0, 0.2, 0.5, 0.9, 1.0):
                assert per_state_gain(wm, PureState(alpha)) == pytest.approx(
                    alpha, abs=1e-12
                )

    def test_degenerate_gain_mean_is_half(self):
        wm = WeakMeasurement(0.3, 0.3)
        alphas = [0.02 * i for i in range(51)]
        mean = sum(per_state_gain(wm, PureState(a)) for a in alphas) / 51
        assert mean == pytest.approx(0.5, abs=1e-12)

    def test_phase_invariance(self):
        wm = WeakMeasurement(0.25, 0.75)
        for alpha in (0.0, 0.3, 0.5, 0.77, 1.0):
            gains = {
                per_state_gain(wm, PureState(alpha, ph))
                for ph in (0.0, math.pi / 3, math.pi / 2, math.pi, 1.7)
            }
            assert max(gains) - min(gains) <= 1e-12


class TestAnalyticGmax:
    def test_projective_maximum(self):
        assert analytic_gmax(WeakMeasurement(0.0, 1.0)) == pytest.approx(2 / 3, abs=1e-12)

    def test_identity_minimum(self):
        assert analytic_gmax(WeakMeasurement(0.0, 0.0)) == pytest.approx(0.5, abs=1e-12)

    def test_flagship_value(self):
        assert analytic_gmax(WeakMeasurement(0.25, 0.75)) == pytest.approx(3.5 / 6, abs=1e-12)

    def test_range_on_grid(self):
        for e in GRID:
            for h in GRID:
                g = analytic_gmax(WeakMeasurement(e, h))
                assert 0.5 - 1e-12 <= g <= 2 / 3 + 1e-12

    def test_symmetries_exact(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            e, h = rng.uniform(), rng.uniform()
            g = analytic_gmax(WeakMeasurement(e, h))
            assert abs(analytic_gmax(WeakMeasurement(h, e)) - g) <= 1e-15
            assert abs(analytic_gmax(WeakMeasurement(1 - e, 1 - h)) - g) <= 1e-15


class TestReversalOperator:
    def test_flagship_flip_and_composition(self):
        wm = WeakMeasurement(0.25, 0.75)
        rev = reversal_operator(wm, 1)
        np.testing.assert_allclose(rev.matrix, np.diag([0.5, math.sqrt(0.75)]), atol=1e-15)
        product = rev.matrix @ kraus_pair(wm)[0].matrix
        np.testing.assert_allclose(product, math.sqrt(0.1875) * np.eye(2), atol=1e-12)

    def test_projective_cannot_be_reversed(self):
        wm = WeakMeasurement(0.0, 1.0)
        rev = reversal_operator(wm, 1)
        np.testing.assert_allclose(rev.matrix, np.diag([0.0, 1.0]), atol=1e-15)
        product = rev.matrix @ kraus_pair(wm)[0].matrix
        np.testing.assert_allclose(product, np.zeros((2, 2)), atol=1e-15)

    def test_degenerate_flip_is_identity_operation(self):
        wm = WeakMeasurement(0.4, 0.4)
        np.testing.assert_allclose(
            reversal_operator(wm, 1).matrix, kraus_pair(wm)[0].matrix, atol=1e-15
        )

    def test_composition_proportional_to_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            wm = WeakMeasurement(rng.uniform(), rng.uniform())
            for r in (1, 2):
                product = reversal_operator(wm, r).matrix @ kraus_pair(wm)[r - 1].matrix
                assert abs(product[0, 1]) <= 1e-15
                assert abs(product[1, 0]) <= 1e-15
                assert abs(product[0, 0] - product[1, 1]) <= 1e-12

    def test_physicality(self):
        for e in GRID:
            for h in GRID:
                for r in (1, 2):
                    assert reversal_operator(WeakMeasurement(e, h), r).is_physical_kraus


class TestReversalExactness:
    def test_hundred_random_triples(self):
        rng = np.random.default_rng(99)
        tested = 0
        while tested < 100:
            wm = WeakMeasurement(rng.uniform(), rng.uniform())
            st = PureState(rng.uniform(), rng.uniform(0, 2 * math.pi))
            r = int(rng.integers(1, 3))
            prob, post = apply_operator(kraus_pair(wm)[r - 1], st)
            if post is None:
                continue
            prob_rev, recovered = apply_operator(reversal_operator(wm, r), post)
            if recovered is None:
                continue
            assert pure_overlap(st, recovered) == pytest.approx(1.0, abs=1e-12)
            tested += 1


class TestPerStateReversalProb:
    def test_flagship_constant_over_states(self):
        wm = WeakMeasurement(0.25, 0.75)
        for i in range(51):
            value = per_state_reversal_prob(wm, PureState(0.02 * i))
            assert value == pytest.approx(0.375, abs=1e-12)

    def test_identity_channel_fully_reversible(self):
        assert per_state_reversal_prob(
            WeakMeasurement(0.0, 0.0), PureState(0.3, 1.0)
        ) == pytest.approx(1.0, abs=1e-12)

    def test_projective_irreversible(self):
        assert per_state_reversal_prob(
            WeakMeasurement(0.0, 1.0), PureState(0.3, 1.0)
        ) == pytest.approx(0.0, abs=1e-12)

    def test_matches_closed_form_everywhere(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            wm = WeakMeasurement(rng.uniform(), rng.uniform())
            st = PureState(rng.uniform(), rng.uniform(0, 2 * math.pi))
            assert per_state_reversal_prob(wm, st) == pytest.approx(
                analytic_prev(wm), abs=1e-12
            )


class TestAnalyticPrev:
    def test_endpoints(self):
        assert analytic_prev(WeakMeasurement(0.0, 0.0)) == pytest.approx(1.0, abs=1e-12)
        assert analytic_prev(WeakMeasurement(1.0, 0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_center(self):
        assert analytic_prev(WeakMeasurement(0.5, 0.5)) == pytest.approx(0.5, abs=1e-12)

    def test_range_and_symmetries(self):
        for e in GRID:
            for h in GRID:
                p = analytic_prev(WeakMeasurement(e, h))
                assert -1e-12 <= p <= 1.0 + 1e-12
                assert abs(analytic_prev(WeakMeasurement(h, e)) - p) <= 1e-15
                assert abs(analytic_prev(WeakMeasurement(1 - e, 1 - h)) - p) <= 1e-15


class TestTradeoffSum:
    def test_boundary_is_four(self):
        for h in GRID:
            assert tradeoff_sum(WeakMeasurement(0.0, h)) == pytest.approx(4.0, abs=1e-12)
            assert tradeoff_sum(WeakMeasurement(1.0, h)) == pytest.approx(4.0, abs=1e-12)
            assert tradeoff_sum(WeakMeasurement(h, 0.0)) == pytest.approx(4.0, abs=1e-12)
            assert tradeoff_sum(WeakMeasurement(h, 1.0)) == pytest.approx(4.0, abs=1e-12)

    def test_center_minimum(self):
        assert tradeoff_sum(WeakMeasurement(0.5, 0.5)) == pytest.approx(3.5, abs=1e-12)

    def test_flagship_value(self):
        assert tradeoff_sum(WeakMeasurement(0.25, 0.75)) == pytest.approx(3.875, abs=1e-12)
