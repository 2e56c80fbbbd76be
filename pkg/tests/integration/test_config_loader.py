"""
Integration tests for the configuration loader.

Tests flat config parsing, validation, preset layering and overrides with
real config files.
"""

import pytest

from app.core.enums import Protocol, ReportFormat, SimulationMode
from app.core.exceptions import ConfigurationException
from app.infrastructure.config.config_loader import (
    ConfigLoader,
    apply_overrides,
    parse_flat_config,
    validate_config_tree,
)


@pytest.fixture
def loader() -> ConfigLoader:
    return ConfigLoader()


def write_config(tmp_path, text: str) -> str:
    path = tmp_path / "experiment.conf"
    path.write_text(text)
    return str(path)


class TestParseFlatConfig:
    """Test the section.key = value format."""

    def test_parses_values(self):
        """Should parse JSON literals and keep bare words as strings."""
        tree = parse_flat_config(
            "# comment\n"
            "experiment.protocol = cow\n"
            "experiment.distances = [0, 10, 20]\n"
            "channel.length_km = 12.5   # inline comment\n"
            "transmitter.phase_randomize = false\n"
        )

        assert tree == {
            "experiment": {"protocol": "cow", "distances": [0, 10, 20]},
            "channel": {"length_km": 12.5},
            "transmitter": {"phase_randomize": False},
        }

    @pytest.mark.parametrize(
        "line",
        ["channel.length_km", "length_km = 3", "channel.a.b = 1", ".x = 1"],
    )
    def test_malformed_lines(self, line):
        """Should reject lines that are not section.key = value."""
        with pytest.raises(ConfigurationException, match=":1:"):
            parse_flat_config(line)

    def test_duplicate_key(self):
        """Should reject repeated keys."""
        with pytest.raises(ConfigurationException, match="duplicate"):
            parse_flat_config("channel.length_km = 1\nchannel.length_km = 2\n")


class TestValidateConfigTree:
    """Test section validation."""

    def test_unknown_key(self):
        """Should reject keys outside the known sections."""
        with pytest.raises(ConfigurationException, match="channel.lenght_km"):
            validate_config_tree({"channel": {"lenght_km": 3}})

    def test_unknown_section(self):
        """Should reject unknown sections."""
        with pytest.raises(ConfigurationException):
            validate_config_tree({"laser": {"power": 3}})

    def test_bad_enum(self):
        """Should reject unknown protocols."""
        with pytest.raises(ConfigurationException):
            validate_config_tree({"experiment": {"protocol": "e91"}})


class TestConfigLoader:
    """Test building configurations from presets and files."""

    def test_preset_only(self, loader):
        """Should load a preset unchanged."""
        config = loader.load(preset="dps-table1")

        assert config.protocol == Protocol.DPS
        assert config.preset == "dps-table1"

    def test_file_overrides_preset(self, loader, tmp_path):
        """Should layer file keys over the preset named in the file."""
        path = write_config(
            tmp_path,
            "experiment.preset = bb84-table1\n"
            "experiment.mode = analytic\n"
            "experiment.seed = 11\n"
            "channel.length_km = 35\n"
            "detector.dark_count_rate = 250\n"
            "security.ec_efficiency = 1.16\n"
            "output.format = jsonlines\n"
            "output.dir = runs\n",
        )

        config = loader.load(path)

        assert config.protocol == Protocol.BB84
        assert config.mode == SimulationMode.ANALYTIC
        assert config.seed == 11
        assert config.channel.length_km == 35.0
        assert config.channel.excess_loss_db == 4.9
        assert config.detector.dark_count_rate == 250.0
        assert config.detector.efficiency == 0.45
        assert config.ec_efficiency == 1.16
        assert config.report_format == ReportFormat.JSONLINES
        assert config.output_dir == "runs"

    def test_explicit_preset_wins(self, loader, tmp_path):
        """Should prefer the preset argument over experiment.preset."""
        path = write_config(tmp_path, "experiment.preset = bb84-table1\n")

        assert loader.load(path, "cow-table1").protocol == Protocol.COW

    def test_protocol_without_preset(self, loader, tmp_path):
        """Should build from defaults when only a protocol is given."""
        path = write_config(
            tmp_path,
            "experiment.protocol = dps\n"
            "transmitter.clock_rate = 1.6666666666666667e9\n"
            'transmitter.intensity_classes = [["signal", 0.2, 1.0]]\n',
        )

        config = loader.load(path)

        assert config.protocol == Protocol.DPS
        assert config.transmitter.signal_class.mean_photons == 0.2
        assert config.preset is None

    def test_needs_preset_or_protocol(self, loader, tmp_path):
        """Should raise when neither a preset nor a protocol is given."""
        path = write_config(tmp_path, "channel.length_km = 3\n")

        with pytest.raises(ConfigurationException, match="preset"):
            loader.load(path)

    def test_invalid_values(self, loader, tmp_path):
        """Should report device validation errors as configuration errors."""
        path = write_config(
            tmp_path, "experiment.preset = cow-table1\nreceiver.tbs_monitor_fraction = 1.5\n"
        )

        with pytest.raises(ConfigurationException, match="TBS"):
            loader.load(path)

    def test_off_grid_delay(self, loader, tmp_path):
        """Should reject an AMZI delay off the 300 ps grid."""
        path = write_config(
            tmp_path, "experiment.preset = bb84-table1\nreceiver.amzi_delay_steps = 3\n"
        )

        with pytest.raises(ConfigurationException, match="whole number"):
            loader.load(path)

    def test_missing_file(self, loader, tmp_path):
        """Should raise ConfigurationException for unreadable files."""
        with pytest.raises(ConfigurationException, match="Cannot read"):
            loader.load(str(tmp_path / "absent.conf"))

    def test_unknown_preset(self, loader):
        """Should raise ConfigurationException for unknown presets."""
        with pytest.raises(ConfigurationException, match="Unknown preset"):
            loader.load(preset="nope")


class TestApplyOverrides:
    """Test command-line style overrides."""

    def test_none_is_ignored(self, bb84_config):
        """Should return the configuration unchanged without overrides."""
        assert apply_overrides(bb84_config, seed=None, frames=None) is bb84_config

    def test_overrides_apply(self, bb84_config):
        """Should replace the given fields."""
        config = apply_overrides(bb84_config, seed=9, mode="analytic", frames=10)

        assert config.seed == 9
        assert config.mode == SimulationMode.ANALYTIC
        assert config.frames == 10

    def test_invalid_override(self, bb84_config):
        """Should raise ConfigurationException when validation fails."""
        with pytest.raises(ConfigurationException):
            apply_overrides(bb84_config, mode="montecarlo", frames=100)

    def test_invalid_enum_override(self, bb84_config):
        """Should raise ConfigurationException for unknown enum values."""
        with pytest.raises(ConfigurationException):
            apply_overrides(bb84_config, report_format="xml")
