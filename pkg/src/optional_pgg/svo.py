"""Social value orientation of the non-participation strategy.

The pair (alpha, beta) is read as a vector whose angle separates four
behavioral motives, from altruistic (helping the game while forgoing own
payoff) down to competitive (harming it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Category boundaries in degrees; a boundary angle belongs to the category
#: above it (the more altruistic one).
ALTRUISTIC_MIN_DEG = 57.15
PROSOCIAL_MIN_DEG = 22.45
INDIVIDUALISTIC_MIN_DEG = -12.04

SVO_LABELS = ("altruistic", "prosocial", "individualistic", "competitive")


@dataclass(frozen=True)
class SvoClass:
    """Orientation angle in degrees and its category label.

    ``extrapolated`` is set when the angle falls outside (-90, 90), i.e. for
    alpha < 0, where the four categories are applied by plain angle
    extension rather than by the defining enumeration.
    """

    theta_deg: float
    label: str
    extrapolated: bool = False


def label_for_angle(theta_deg: float) -> str:
    """Category of an orientation angle; boundary angles go to the upper category."""
    if theta_deg >= ALTRUISTIC_MIN_DEG:
        return "altruistic"
    if theta_deg >= PROSOCIAL_MIN_DEG:
        return "prosocial"
    if theta_deg >= INDIVIDUALISTIC_MIN_DEG:
        return "individualistic"
    return "competitive"


def classify_svo(alpha: float, beta: float) -> SvoClass:
    """Classify the motive behind a non-participant's (alpha, beta) pair.

    The angle is the quadrant-aware arctangent of beta over alpha, so
    alpha < 0 maps to |theta| > 90 degrees.  Raises ValueError at
    alpha = beta = 0 where the orientation is undefined.
    """
    if alpha == 0.0 and beta == 0.0:
        raise ValueError("orientation is undefined at alpha = beta = 0")
    theta = math.degrees(math.atan2(beta, alpha))
    return SvoClass(
        theta_deg=theta,
        label=label_for_angle(theta),
        extrapolated=abs(theta) > 90.0,
    )
