"""
Unit tests for the preset catalog.
"""

import pytest

from app.core.enums import EveBoundKind, Protocol
from app.core.exceptions import ConfigurationException


class TestPresetCatalog:
    """Test preset lookup and the shipped device settings."""

    def test_names(self, catalog):
        """Should list the three shipped presets in order."""
        assert catalog.names() == ["bb84-table1", "cow-table1", "dps-table1"]

    def test_unknown_preset(self, catalog):
        """Should raise ConfigurationException naming the available presets."""
        with pytest.raises(ConfigurationException, match="bb84-table1"):
            catalog.get("qkd-9000")

    def test_bb84_preset(self, bb84_config):
        """Should carry the BB84 chip settings at 20 km."""
        assert bb84_config.protocol == Protocol.BB84
        assert bb84_config.transmitter.clock_rate == 560e6
        assert bb84_config.transmitter.class_names == ("signal", "decoy", "vacuum")
        assert bb84_config.channel.length_km == 20.0
        assert bb84_config.delay_bins == 1

    def test_cow_preset(self, cow_config):
        """Should route 10% of the light to the monitor."""
        assert cow_config.protocol == Protocol.COW
        assert cow_config.receiver.tbs_monitor_fraction == pytest.approx(0.1)
        assert cow_config.transmitter.phase_randomize is False
        assert cow_config.eve_bound == EveBoundKind.COLLECTIVE

    def test_dps_preset(self, dps_config):
        """Should use 1024-pulse trains on a one-bin delay."""
        assert dps_config.protocol == Protocol.DPS
        assert dps_config.transmitter.dps_train_length == 1024
        assert dps_config.delay_bins == 1

    def test_preset_dict_lists_fitted_knobs(self, catalog):
        """Should expose the fitted parameters next to the configuration."""
        data = catalog.get("bb84-table1").to_dict()

        assert data["fitted"]["channel.excess_loss_db"] == 4.9
        assert data["config"]["preset"] == "bb84-table1"

    def test_build_returns_fresh_config(self, catalog):
        """Should build equal but independent configurations."""
        assert catalog.build("cow-table1") == catalog.build("cow-table1")
