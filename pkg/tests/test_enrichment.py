import numpy as np
import pytest

from enrichfem.core.exceptions import EnrichmentError
from enrichfem.services.enrichment import Side, build_enrichment, eval_enrichment, gamma_from_lambda


def test_gamma_from_lambda() -> None:
    assert gamma_from_lambda(1 / 243, 1.0, 1.35) == pytest.approx(-1 / 63, rel=1e-12)
    assert gamma_from_lambda(0.5, 1.0, 2.0) == pytest.approx(-1.0)


@pytest.mark.parametrize("beta_minus, beta_plus", [(1.0, 1.0), (0.0, 1.0), (1.0, -2.0)])
def test_gamma_from_lambda_rejects(beta_minus, beta_plus) -> None:
    with pytest.raises(EnrichmentError):
        gamma_from_lambda(0.1, beta_minus, beta_plus)


def test_injection_interface_slopes() -> None:
    psi = build_enrichment(0.0, 1 / 8, 1 / 9, -1 / 63)
    assert psi.m1 == pytest.approx(-1 / 9, rel=1e-12)
    assert psi.m2 == pytest.approx(-64 / 9, rel=1e-10)
    assert abs(psi.m1) < 1


def test_vanishes_at_endpoints_and_outside() -> None:
    psi = build_enrichment(0.25, 0.5, 0.3, -0.07, element=1)
    for side in Side:
        assert eval_enrichment(psi, 0.25, side)[0] == 0.0
        assert eval_enrichment(psi, 0.5, side)[0] == 0.0
        assert eval_enrichment(psi, 0.1, side) == (0.0, 0.0)
        assert eval_enrichment(psi, 0.75, side) == (0.0, 0.0)


def test_jump_identity_randomized(rng) -> None:
    checked = 0
    while checked < 1000:
        x_k = rng.uniform(0.0, 1.0)
        h = rng.uniform(0.01, 1.0)
        x_k1 = x_k + h
        alpha = x_k + h * rng.uniform(0.05, 0.95)
        gamma = rng.choice([-1.0, 1.0]) * h * rng.uniform(0.2, 2.0)
        if not x_k < alpha < x_k1 or abs(alpha - x_k1 - gamma) < 0.05 * h:
            continue

        psi = build_enrichment(x_k, x_k1, alpha, gamma, element=checked)
        left, left_slope = eval_enrichment(psi, alpha, Side.LEFT)
        right, right_slope = eval_enrichment(psi, alpha, Side.RIGHT)
        value_jump = right - left
        slope_jump = right_slope - left_slope

        assert abs(value_jump - gamma * slope_jump) <= 1e-13 * abs(gamma * slope_jump)
        expected = (alpha - x_k1) / (alpha - x_k1 - gamma)
        assert slope_jump == pytest.approx(expected, rel=1e-12)
        assert eval_enrichment(psi, x_k, Side.RIGHT)[0] == 0.0
        assert eval_enrichment(psi, x_k1, Side.LEFT)[0] == 0.0
        checked += 1


def test_zero_gamma_gives_continuous_enrichment(rng) -> None:
    for _ in range(100):
        x_k = rng.uniform(0.0, 1.0)
        h = rng.uniform(0.05, 1.0)
        x_k1 = x_k + h
        alpha = x_k + h * rng.uniform(0.05, 0.95)
        psi = build_enrichment(x_k, x_k1, alpha, 0.0)

        assert psi.value_jump == pytest.approx(0.0, abs=1e-14)
        assert psi.slope_jump == pytest.approx(1.0, abs=1e-14)
        x = np.linspace(x_k, x_k1, 11)
        continuous = np.where(
            x < alpha, (x - x_k) * (alpha - x_k1) / h, (alpha - x_k) * (x - x_k1) / h
        )
        values, _ = psi.values(x, Side.RIGHT)
        np.testing.assert_allclose(values, continuous, rtol=0, atol=1e-14)


def test_degenerate_denominator_is_rejected() -> None:
    with pytest.raises(EnrichmentError, match="degenerate enrichment denominator"):
        build_enrichment(0.0, 1.0, 0.5, -0.5)


def test_interface_outside_element_is_rejected() -> None:
    with pytest.raises(EnrichmentError):
        build_enrichment(0.0, 0.125, 0.2, 0.0)
