"""
Unit tests for the analytic oracle.

Tests the click-landing and acceptance distributions and the expected
statistics of ideal devices, where closed forms are available.
"""

import math

import pytest

from app.application.services.analytic_oracle import (
    AnalyticOracle,
    accepted_distribution,
    any_click_probability,
    landing_distribution,
)
from app.core.enums import Protocol, SimulationMode
from tests.conftest import noiseless_config


def analytic(protocol: Protocol, **changes):
    return noiseless_config(
        protocol, mode=SimulationMode.ANALYTIC, frames=1_000_000, **changes
    )


class TestLandingDistribution:
    """Test where one detector's clicks land within a frame."""

    def test_sums_to_one(self):
        """Should be a probability distribution."""
        distribution = landing_distribution([0.2, 0.5, 0.1], 0.1)

        assert sum(distribution.values()) == pytest.approx(1.0)

    def test_without_crosstalk(self):
        """Should keep clicks in their own slot."""
        distribution = landing_distribution([0.3], 0.0)

        assert distribution == {(): pytest.approx(0.7), (0,): pytest.approx(0.3)}

    def test_crosstalk_moves_clicks(self):
        """Should move a click to either neighbour with half the crosstalk each."""
        distribution = landing_distribution([1.0], 0.2)

        assert distribution[(-1,)] == pytest.approx(0.1)
        assert distribution[(0,)] == pytest.approx(0.8)
        assert distribution[(1,)] == pytest.approx(0.1)

    def test_any_click_probability(self):
        """Should combine independent slots."""
        assert any_click_probability([0.5, 0.5]) == pytest.approx(0.75)


class TestAcceptedDistribution:
    """Test dead time, frame bounds and slot acceptance."""

    def test_sums_to_one(self):
        """Should stay normalised after filtering."""
        landings = landing_distribution([0.4, 0.6, 0.3], 0.05)

        result = accepted_distribution(landings, 3, 1.5, 0.9, 0.8)

        assert sum(result.values()) == pytest.approx(1.0)

    def test_dead_time_drops_second_click(self):
        """Should drop a click inside the previous click's dead time."""
        result = accepted_distribution({(0, 1): 1.0}, 3, 2.0, 1.0, 1.0)

        assert result[(0,)] == pytest.approx(1.0)
        assert (0, 1) not in result

    def test_clicks_outside_frame_are_lost(self):
        """Should drop positions outside the examined slots."""
        result = accepted_distribution({(-1,): 0.5, (2,): 0.5}, 2, 0.0, 1.0, 1.0)

        assert result[()] == pytest.approx(1.0)

    def test_dead_detector_sees_nothing(self):
        """Should give the empty set with probability 1 - alive."""
        result = accepted_distribution({(0,): 1.0}, 2, 0.0, 1.0, 0.25)

        assert result[()] == pytest.approx(0.75)
        assert result[(0,)] == pytest.approx(0.25)

    def test_acceptance_thins_clicks(self):
        """Should keep each click with the slot acceptance."""
        result = accepted_distribution({(0, 1): 1.0}, 2, 0.0, 0.5, 1.0)

        assert result[(0, 1)] == pytest.approx(0.25)
        assert result[()] == pytest.approx(0.25)


class TestNoiselessExpectations:
    """Test expected statistics against closed forms for ideal devices."""

    def test_bb84_gains(self):
        """Should detect 1 - exp(-mu) of frames in every class, without errors."""
        stats = AnalyticOracle(analytic(Protocol.BB84)).expected_stats()

        signal = stats.tally("signal")
        decoy = stats.tally("decoy")
        assert signal.frames_sent == pytest.approx(800_000)
        assert signal.detections / signal.frames_sent == pytest.approx(1 - math.exp(-0.5))
        assert decoy.detections / decoy.frames_sent == pytest.approx(1 - math.exp(-0.1))
        assert stats.tally("vacuum").detections == pytest.approx(0.0)
        assert stats.total().errors == pytest.approx(0.0)
        assert signal.sifted_z > 0 and signal.sifted_x > 0

    def test_dps_sifted_bits(self):
        """Should decode 1 - exp(-mu) of the bits, all at the right port."""
        stats = AnalyticOracle(analytic(Protocol.DPS)).expected_stats()
        tally = stats.total()

        assert tally.frames_sent == pytest.approx(1_000_000)
        assert tally.sifted / tally.frames_sent == pytest.approx(1 - math.exp(-0.5))
        assert stats.wrong_port == pytest.approx(0.0)

    def test_cow_key_and_monitor(self):
        """Should sift non-decoy frames from the key tap and see a perfect fringe."""
        stats = AnalyticOracle(analytic(Protocol.COW)).expected_stats()
        tally = stats.total()

        assert tally.sifted / tally.frames_sent == pytest.approx(0.9 * (1 - math.exp(-0.25)))
        assert tally.errors == pytest.approx(0.0)
        assert stats.monitor_max > 0
        assert stats.monitor_min == pytest.approx(0.0)

    def test_duration(self):
        """Should cover frames / clock seconds of emission."""
        stats = AnalyticOracle(analytic(Protocol.BB84)).expected_stats()

        assert stats.duration == pytest.approx(1_000_000 / 500e6)
