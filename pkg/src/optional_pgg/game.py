"""Payoffs for the public goods game with generalized optional participation.

Groups of M players are sampled from an infinite well-mixed population of
cooperators, defectors and non-participants.  Cooperators pay a unit cost
into a pool that is multiplied by the enhancement factor and shared among
the participants; non-participants take an outside payoff ``alpha`` and
inject ``beta`` (help when positive, damage when negative), shared equally
among the participants.  This module provides the closed-form expected
payoffs, an independent brute-force oracle for them, and the population
mean payoff that drives the dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._kernels import LONE_PARTICIPANT_EPS, gap_kernel, payoffs_kernel

#: Tolerance on the simplex constraint after construction / normalization.
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class GameParams:
    """Model parameters.

    group_size : sampled group size M (integer, at least 3)
    enhancement : pool multiplication factor r, 1 < r < M
    alpha : outside payoff of a non-participant, in [-1, 1]
    beta : per-non-participant influence on the participants, in [-1, 1]
    mu : mutation rate, in [0, 1]
    cost : contribution cost, fixed at 1
    """

    group_size: int
    enhancement: float
    alpha: float
    beta: float
    mu: float = 0.0
    cost: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.group_size, int) or self.group_size < 3:
            raise ValueError(f"group_size must be an integer >= 3, got {self.group_size!r}")
        if not 1.0 < self.enhancement < self.group_size:
            raise ValueError(
                f"enhancement must satisfy 1 < r < group_size, got r={self.enhancement}"
            )
        if not -1.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [-1, 1], got {self.alpha}")
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta}")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        if self.cost != 1.0:
            raise ValueError("the contribution cost is fixed at 1")

    def with_mu(self, mu: float) -> "GameParams":
        return GameParams(self.group_size, self.enhancement, self.alpha, self.beta, mu)


@dataclass(frozen=True)
class SimplexState:
    """Population fractions of cooperators (x), defectors (y), non-participants (z)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name, value in (("x", self.x), ("y", self.y), ("z", self.z)):
            if value < -SIMPLEX_TOL:
                raise ValueError(f"{name} = {value} is negative beyond tolerance")
        if abs(self.x + self.y + self.z - 1.0) > SIMPLEX_TOL:
            raise ValueError(
                f"fractions must sum to 1 within {SIMPLEX_TOL}, got {self.x + self.y + self.z}"
            )

    @classmethod
    def from_components(cls, x: float, y: float, z: float) -> "SimplexState":
        """Build a state from non-negative weights, normalizing exactly."""
        if x < 0.0 or y < 0.0 or z < 0.0:
            raise ValueError(f"components must be non-negative, got ({x}, {y}, {z})")
        total = x + y + z
        if total <= 0.0:
            raise ValueError("at least one component must be positive")
        return cls(x / total, y / total, z / total)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class PayoffTriple:
    """Expected payoffs of a cooperator, a defector and a non-participant."""

    pi_c: float
    pi_d: float
    pi_n: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.pi_c, self.pi_d, self.pi_n)


def payoff_gap(params: GameParams, z: float) -> float:
    """Defector-minus-cooperator expected payoff, a function of z only.

    Evaluated with the explicit geometric sum for (1 - z**M) / (1 - z), so
    the z = 1 limit comes out exactly 0 with no cancellation.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    return gap_kernel(params.group_size, params.enhancement, z)


def mean_payoffs(params: GameParams, state: SimplexState) -> PayoffTriple:
    """Closed-form expected payoffs at a population state.

    A non-participant always receives exactly ``alpha``.  When the
    participant mass x + y underflows, everyone is effectively abstaining
    and all three payoffs are ``alpha`` by convention; participant payoffs
    carry zero population weight there, so the choice is inert.
    """
    pi_c, pi_d, pi_n = payoffs_kernel(
        params.group_size, params.enhancement, params.alpha, params.beta,
        state.x, state.y, state.z,
    )
    return PayoffTriple(pi_c, pi_d, pi_n)


def population_mean(params: GameParams, state: SimplexState, payoffs: PayoffTriple) -> float:
    """Average payoff in the whole population."""
    return state.x * payoffs.pi_c + state.y * payoffs.pi_d + state.z * payoffs.pi_n


def brute_force_payoffs(params: GameParams, state: SimplexState) -> PayoffTriple:
    """Exact expected payoffs by enumerating all co-player compositions.

    This is the oracle for :func:`mean_payoffs` and deliberately shares no
    code with it: the M - 1 co-players of a focal player are enumerated as
    (cooperators, defectors, non-participants) compositions with exact
    multinomial weights.  A focal participant who draws only non-participant
    co-players cannot form a group; the accounting then credits the
    abstention payoff plus the pooled influence of the M - 1
    non-participants, which is the convention embedded in the closed forms
    and in the edge dynamics built on them.
    """
    m = params.group_size
    r = params.enhancement
    alpha = params.alpha
    beta = params.beta
    x, y, z = state.as_tuple()

    if abs(x + y) < LONE_PARTICIPANT_EPS:
        return PayoffTriple(alpha, alpha, alpha)

    exp_c = 0.0
    exp_d = 0.0
    for n_coop in range(m):
        for n_def in range(m - n_coop):
            n_out = m - 1 - n_coop - n_def
            weight = (
                math.comb(m - 1, n_coop)
                * math.comb(m - 1 - n_coop, n_def)
                * x**n_coop * y**n_def * z**n_out
            )
            participants = n_coop + n_def
            if participants == 0:
                pay_d = alpha + beta * (m - 1)
                pay_c = pay_d
            else:
                group = participants + 1
                pay_d = (r * n_coop + beta * n_out) / group
                pay_c = (r * (n_coop + 1) + beta * n_out) / group - params.cost
            exp_d += weight * pay_d
            exp_c += weight * pay_c
    return PayoffTriple(exp_c, exp_d, alpha)
