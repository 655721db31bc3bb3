import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from enrichfem.core.exceptions import EnrichmentError

logger = logging.getLogger("service.enrichment")

# |alpha - x_{k+1} - gamma| below DEGENERACY_TOLERANCE * h_k makes m2 undefined.
DEGENERACY_TOLERANCE = 1e-10
# Relative size of [beta] below which gamma is undefined.
CONTRAST_TOLERANCE = 1e-12


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def gamma_from_lambda(lam: float, beta_minus: float, beta_plus: float) -> float:
    """Jump parameter gamma = -lam * beta^- * beta^+ / [beta] of [p] = gamma [p']."""
    if beta_minus <= 0 or beta_plus <= 0:
        raise EnrichmentError(f"Diffusivity limits must be positive, got {beta_minus}, {beta_plus}")
    jump = beta_plus - beta_minus
    if abs(jump) < CONTRAST_TOLERANCE * max(beta_minus, beta_plus):
        raise EnrichmentError(
            "gamma is undefined for a diffusivity that is continuous at the interface; "
            "use gamma = 0 with a continuous interface instead"
        )
    return -lam * beta_minus * beta_plus / jump


@dataclass(frozen=True)
class EnrichmentFunction:
    """Piecewise-linear psi on [x_k, x_k1], breaking at alpha with [psi] = gamma [psi']."""

    element: int
    x_k: float
    x_k1: float
    alpha: float
    gamma: float
    m1: float
    m2: float

    @property
    def slope_jump(self) -> float:
        return self.m2 - self.m1

    @property
    def value_jump(self) -> float:
        return self.m2 * (self.alpha - self.x_k1) - self.m1 * (self.alpha - self.x_k)

    def values(self, x: np.ndarray, side: Side) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if side == Side.LEFT:
            on_left = (x >= self.x_k) & (x <= self.alpha)
            on_right = (x > self.alpha) & (x <= self.x_k1)
        else:
            on_left = (x >= self.x_k) & (x < self.alpha)
            on_right = (x >= self.alpha) & (x <= self.x_k1)

        value = np.where(on_left, self.m1 * (x - self.x_k), 0.0)
        value = np.where(on_right, self.m2 * (x - self.x_k1), value)
        slope = np.where(on_left, self.m1, 0.0)
        slope = np.where(on_right, self.m2, slope)
        return value, slope


def build_enrichment(x_k: float, x_k1: float, alpha: float, gamma: float, element: int = 0) -> EnrichmentFunction:
    if not x_k < alpha < x_k1:
        raise EnrichmentError(f"Interface {alpha!r} is not strictly inside [{x_k}, {x_k1}]")

    h = x_k1 - x_k
    denominator = alpha - x_k1 - gamma
    if abs(denominator) < DEGENERACY_TOLERANCE * h:
        raise EnrichmentError(
            f"degenerate enrichment denominator; change mesh size "
            f"(element {element}, alpha={alpha!r}, gamma={gamma!r})"
        )

    m1 = (alpha - x_k1) / h
    m2 = (alpha - x_k - gamma) * (alpha - x_k1) / (h * denominator)
    logger.debug(f"Enrichment on element {element}: m1={m1:.6e}, m2={m2:.6e}, gamma={gamma:.6e}")
    return EnrichmentFunction(element=element, x_k=x_k, x_k1=x_k1, alpha=alpha, gamma=gamma, m1=m1, m2=m2)


def eval_enrichment(psi: EnrichmentFunction, x: float, side: Side) -> Tuple[float, float]:
    value, slope = psi.values(np.array([x]), Side(side))
    return float(value[0]), float(slope[0])
