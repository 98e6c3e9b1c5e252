"""Resource trade-offs: entanglement savings and classical-communication cost.

Prior information about the input buys two things: a target fidelity can be
met with a less entangled pure resource, and the Bell-measurement record
compresses below 2 bits because the outcomes stop being equiprobable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BlochDirection, InputDistribution
from .distributions import cos_moments

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class BellOutcomeDistribution:
    """Probabilities of the four Bell outcomes (phi+, phi-, psi+, psi-).

    The analytic forms for Schmidt-basis-aligned resources obey the +/-
    symmetry p_phi_plus = p_phi_minus, p_psi_plus = p_psi_minus; empirical
    frequencies only satisfy it up to sampling noise, so the constructor
    checks positivity and normalization but not the symmetry itself.
    """

    p_phi_plus: float
    p_phi_minus: float
    p_psi_plus: float
    p_psi_minus: float

    def __post_init__(self) -> None:
        t = self.as_tuple()
        if any(p < 0.0 for p in t):
            raise ValueError(f"negative probability in {t}")
        if abs(sum(t) - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities {t} do not sum to 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_phi_plus, self.p_phi_minus, self.p_psi_plus, self.p_psi_minus)


def required_entanglement(c_target: float, dist: InputDistribution) -> float:
    """Least pure-state concurrence reaching the uniform-ensemble fidelity.

    Solves  F(dist; C') = (2 + c_target)/3  for C' using the pure-state
    average fidelity F = 1 - (1 - C')<sin^2 theta>/2, then clamps at zero
    (below that the classical strategy already suffices):

        C' = max{0, 1 - 2 (1 - c_target) / (3 <sin^2 theta>)}.

    The uniform sphere gives back c_target itself.
    """
    if not 0.0 <= c_target <= 1.0:
        raise ValueError(f"c_target={c_target!r} outside [0, 1]")
    s2 = 1.0 - cos_moments(dist)[2]
    if s2 <= 0.0:
        return 0.0
    return max(0.0, 1.0 - 2.0 * (1.0 - c_target) / (3.0 * s2))


def bell_probabilities_pointwise(alpha: float, direction: BlochDirection) -> BellOutcomeDistribution:
    """Bell-outcome probabilities for input direction theta, resource weight alpha.

    p(phi+/-) = (alpha cos^2(theta/2) + (1-alpha) sin^2(theta/2)) / 2 and
    the psi pair with the roles of the half-angle terms swapped; the
    azimuth never enters.
    """
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha={alpha!r} outside [0, 1/2]")
    ch = math.cos(0.5 * direction.theta) ** 2
    sh = 1.0 - ch
    p_phi = 0.5 * (alpha * ch + (1.0 - alpha) * sh)
    p_psi = 0.5 * (alpha * sh + (1.0 - alpha) * ch)
    return BellOutcomeDistribution(p_phi, p_phi, p_psi, p_psi)


def bell_probabilities_averaged(alpha: float, dist: InputDistribution) -> BellOutcomeDistribution:
    """Ensemble-averaged Bell-outcome probabilities.

    Averaging the pointwise form gives
        p(phi+/-) = (1 - (1 - 2 alpha) <cos theta>) / 4,
        p(psi+/-) = (1 + (1 - 2 alpha) <cos theta>) / 4.
    Uniform inputs or a maximally entangled resource make all four 1/4.
    """
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha={alpha!r} outside [0, 1/2]")
    m1 = cos_moments(dist)[1]
    bias = (1.0 - 2.0 * alpha) * m1
    p_phi = 0.25 * (1.0 - bias)
    p_psi = 0.25 * (1.0 + bias)
    return BellOutcomeDistribution(p_phi, p_phi, p_psi, p_psi)


def cc_cost(outcomes: BellOutcomeDistribution) -> float:
    """Shannon entropy of the outcome record in bits; 0 log 0 := 0.

    The source-coding lower bound on classical communication per round.
    """
    h = 0.0
    for p in outcomes.as_tuple():
        if p > 0.0:
            h -= p * math.log2(p)
    return h
