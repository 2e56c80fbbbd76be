"""
Unit tests for the math primitives.

Tests binary entropy and decibel conversions, including their domain checks.
"""

import math

import numpy as np
import pytest

from app.core.exceptions import DomainValueException
from app.domain.services.primitives import binary_entropy, db_to_transmission


class TestBinaryEntropy:
    """Test the Shannon entropy of a Bernoulli variable."""

    def test_endpoints_are_zero(self):
        """Should return 0 at x = 0 and x = 1."""
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_maximum_at_half(self):
        """Should return exactly one bit at x = 1/2."""
        assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)

    def test_symmetry(self):
        """Should be symmetric around 1/2."""
        for x in (0.01, 0.1, 0.3):
            assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), rel=1e-12)

    def test_known_value(self):
        """Should match the closed form at 1%."""
        expected = -0.01 * math.log2(0.01) - 0.99 * math.log2(0.99)
        assert binary_entropy(0.01) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("x", [-0.1, 1.1, math.nan])
    def test_out_of_domain_raises(self, x):
        """Should raise DomainValueException outside [0, 1]."""
        with pytest.raises(DomainValueException):
            binary_entropy(x)

    def test_domain_error_is_value_error(self):
        """Should be catchable as a ValueError."""
        with pytest.raises(ValueError):
            binary_entropy(2.0)

    def test_concave(self):
        """Should lie above every chord."""
        rng = np.random.default_rng(12)
        for a, b in rng.random((200, 2)):
            midpoint = binary_entropy((a + b) / 2)
            assert midpoint >= (binary_entropy(a) + binary_entropy(b)) / 2 - 1e-12


class TestDecibels:
    """Test loss conversions."""

    def test_zero_loss_is_full_transmission(self):
        """Should give transmission 1 at 0 dB."""
        assert db_to_transmission(0.0) == 1.0

    def test_ten_db_is_tenth(self):
        """Should give 0.1 at 10 dB."""
        assert db_to_transmission(10.0) == pytest.approx(0.1, rel=1e-15)

    def test_twenty_km_of_fibre(self):
        """Should give 0.39811 for 4 dB."""
        assert db_to_transmission(4.0) == pytest.approx(0.39811, abs=1e-5)

    def test_half_power_point(self):
        """Should give one half at 3.0103 dB."""
        assert db_to_transmission(3.0103) == pytest.approx(0.5, abs=1e-5)

    @pytest.mark.parametrize("a, b", [(0.0, 4.0), (1.5, 2.5), (4.9, 12.0), (0.01, 30.0)])
    def test_losses_multiply(self, a, b):
        """Should turn added losses into multiplied transmissions."""
        assert db_to_transmission(a + b) == pytest.approx(
            db_to_transmission(a) * db_to_transmission(b), rel=1e-12
        )

    @pytest.mark.parametrize("loss", [-1.0, math.nan])
    def test_negative_loss_raises(self, loss):
        """Should reject negative or non-numeric losses."""
        with pytest.raises(DomainValueException):
            db_to_transmission(loss)
