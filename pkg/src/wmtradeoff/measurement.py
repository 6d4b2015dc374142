"""Two-outcome diagonal weak measurement of a polarization qubit.

A measurement is parameterized by the pair (epsilon, eta) in [0,1]^2. Outcome
1 keeps the amplitudes (sqrt(1-epsilon), sqrt(1-eta)) and outcome 2 the
complementary pair (sqrt(epsilon), sqrt(eta)), so the two branch operators
always satisfy the completeness relation. Reversal operators are obtained by
flipping the two diagonal coefficients of the branch operator, without any
rescaling: this is the convention under which the mean reversal probability
equals (1-epsilon)(1-eta) + epsilon*eta for every input state.

Closed forms implemented here:

    gmax(epsilon, eta) = (3 + |eta - epsilon|) / 6
    prev(epsilon, eta) = 1 - epsilon - eta + 2*epsilon*eta
    6*gmax + prev      = 4 on the boundary of the parameter square,
                         with interior minimum 3.5 at (0.5, 0.5).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubit import (
    CONSTRUCTION_ATOL,
    Operator2,
    PureState,
    STATE_H,
    STATE_V,
    apply_operator,
    pure_overlap,
)

# Parameter pairs closer than this count as a degenerate (beam-splitter) tie.
TIE_ATOL = 1e-12


@dataclass(frozen=True)
class WeakMeasurement:
    """The (epsilon, eta) parameter pair of a two-outcome weak measurement."""

    epsilon: float
    eta: float

    def __post_init__(self) -> None:
        for name in ("epsilon", "eta"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError("measurement parameters must be finite")
            if v < -CONSTRUCTION_ATOL or v > 1.0 + CONSTRUCTION_ATOL:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))

    @property
    def is_diagonal_degenerate(self) -> bool:
        """True for the excluded beam-splitter case epsilon == eta not in {0, 1}."""
        if abs(self.epsilon - self.eta) >= TIE_ATOL:
            return False
        return self.epsilon not in (0.0, 1.0)


@dataclass(frozen=True)
class OutcomeRecord:
    """One measurement branch: probability, post state, and optimal guess.

    ``post_state`` is ``None`` when the branch annihilates the input.
    ``guess_fidelity`` is the squared overlap of the guess with the input
    state (not with the post-measurement state).
    """

    outcome_index: int
    probability: float
    post_state: PureState | None
    guess: PureState
    guess_fidelity: float

    def __post_init__(self) -> None:
        if self.outcome_index not in (1, 2):
            raise ValueError(f"outcome index must be 1 or 2, got {self.outcome_index!r}")
        for name in ("probability", "guess_fidelity"):
            v = float(getattr(self, name))
            if not -CONSTRUCTION_ATOL <= v <= 1.0 + CONSTRUCTION_ATOL:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


def _check_outcome_index(r: int) -> None:
    if r not in (1, 2):
        raise ValueError(f"outcome index must be 1 or 2, got {r!r}")


def kraus_pair(wm: WeakMeasurement) -> tuple[Operator2, Operator2]:
    """Branch operators diag(sqrt(1-e), sqrt(1-h)) and diag(sqrt(e), sqrt(h))."""
    e, h = wm.epsilon, wm.eta
    first = Operator2.diagonal(math.sqrt(1.0 - e), math.sqrt(1.0 - h))
    second = Operator2.diagonal(math.sqrt(e), math.sqrt(h))
    return first, second


def optimal_guess(wm: WeakMeasurement, r: int) -> PureState:
    """Best basis-state guess given the observed outcome.

    Outcome 1 weights H more heavily when epsilon < eta, so the guess is |H>
    there and |V> when epsilon > eta; outcome 2 guesses the opposite branch.
    Within the tie tolerance both rules fall back to |H>, which makes the
    per-state gain of a degenerate measurement equal the H-weight itself.
    """
    _check_outcome_index(r)
    if wm.epsilon < wm.eta - TIE_ATOL:
        return STATE_H if r == 1 else STATE_V
    if wm.epsilon > wm.eta + TIE_ATOL:
        return STATE_V if r == 1 else STATE_H
    return STATE_H


def outcome_distribution(
    wm: WeakMeasurement, state: PureState
) -> tuple[OutcomeRecord, OutcomeRecord]:
    """Both measurement branches for one input state.

    Branch probabilities always sum to 1; annihilated branches carry a
    ``None`` post state and a vanishing probability.
    """
    records = []
    for r, op in zip((1, 2), kraus_pair(wm)):
        prob, post = apply_operator(op, state)
        guess = optimal_guess(wm, r)
        records.append(OutcomeRecord(r, prob, post, guess, pure_overlap(guess, state)))
    return records[0], records[1]


def per_state_gain(wm: WeakMeasurement, state: PureState) -> float:
    """Outcome-averaged guess fidelity sum_r p(r) * |<guess_r|phi>|^2."""
    return sum(rec.probability * rec.guess_fidelity for rec in outcome_distribution(wm, state))


def analytic_gmax(wm: WeakMeasurement) -> float:
    """State-averaged maximal estimation fidelity, (3 + |eta - epsilon|) / 6."""
    return (3.0 + abs(wm.eta - wm.epsilon)) / 6.0


def reversal_operator(wm: WeakMeasurement, r: int) -> Operator2:
    """Coefficient-flipped partner of branch ``r``.

    The product with its branch operator is proportional to the identity:
    sqrt((1-e)(1-h)) * I for outcome 1 and sqrt(e*h) * I for outcome 2. No
    rescaling to unit largest singular value is applied.
    """
    _check_outcome_index(r)
    e, h = wm.epsilon, wm.eta
    if r == 1:
        return Operator2.diagonal(math.sqrt(1.0 - h), math.sqrt(1.0 - e))
    return Operator2.diagonal(math.sqrt(h), math.sqrt(e))


def per_state_reversal_prob(wm: WeakMeasurement, state: PureState) -> float:
    """Success probability of reversing the measurement on one input state.

    Evaluates sum_r p(r) * |<phi|R_r|phi_r>|^2 with |phi_r> the normalized
    post state of branch r. Annihilated branches contribute zero. The result
    is state independent and equals ``analytic_prev``.
    """
    amps = state.amplitudes
    total = 0.0
    for r, op in zip((1, 2), kraus_pair(wm)):
        prob, post = apply_operator(op, state)
        if post is None:
            continue
        rev = reversal_operator(wm, r)
        amp = np.vdot(amps, rev.matrix @ post.amplitudes)
        total += prob * float(abs(amp) ** 2)
    return total


def analytic_prev(wm: WeakMeasurement) -> float:
    """Mean reversal probability, 1 - epsilon - eta + 2*epsilon*eta."""
    return 1.0 - wm.epsilon - wm.eta + 2.0 * wm.epsilon * wm.eta


def tradeoff_sum(wm: WeakMeasurement) -> float:
    """The tradeoff combination 6*gmax + prev."""
    return 6.0 * analytic_gmax(wm) + analytic_prev(wm)
