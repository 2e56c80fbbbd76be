import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from app.application.services.preset_catalog import PresetCatalog
from app.core.enums import EveBoundKind, Protocol, ReportFormat, SimulationMode
from app.core.exceptions import ConfigurationException, QKDBenchException
from app.domain.entities.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)


class _Section(BaseModel):
    class Config:
        extra = "forbid"


class ExperimentSection(_Section):
    protocol: Optional[Protocol] = None
    preset: Optional[str] = None
    frames: Optional[int] = None
    seed: Optional[int] = None
    mode: Optional[SimulationMode] = None
    distances: Optional[List[float]] = None


class TransmitterSection(_Section):
    clock_rate: Optional[float] = None
    bin_separation: Optional[float] = None
    pulse_fwhm: Optional[float] = None
    extinction_db: Optional[float] = None
    intensity_classes: Optional[List[Tuple[str, float, float]]] = None
    phase_randomize: Optional[bool] = None
    z_basis_probability: Optional[float] = None
    cow_decoy_probability: Optional[float] = None
    dps_train_length: Optional[int] = None
    phase_noise_sigma: Optional[float] = None


class ChannelSection(_Section):
    length_km: Optional[float] = None
    atten_db_per_km: Optional[float] = None
    excess_loss_db: Optional[float] = None


class ReceiverSection(_Section):
    tbs_monitor_fraction: Optional[float] = None
    amzi_delay_steps: Optional[int] = None
    amzi_phase: Optional[float] = None
    amzi_arm_imbalance_db: Optional[float] = None
    insertion_loss_db: Optional[float] = None
    key_path_loss_db: Optional[float] = None
    slot_window: Optional[float] = None
    slot_crosstalk_prob: Optional[float] = None
    delay_tolerance: Optional[float] = None


class DetectorSection(_Section):
    efficiency: Optional[float] = None
    dark_count_rate: Optional[float] = None
    jitter_sigma: Optional[float] = None
    dead_time: Optional[float] = None
    dark_count_prob_per_slot: Optional[float] = None


class SecuritySection(_Section):
    ec_efficiency: Optional[float] = None
    eve_bound: Optional[EveBoundKind] = None


class OutputSection(_Section):
    dir: Optional[str] = None
    format: Optional[ReportFormat] = None


class ConfigFile(_Section):
    """Validated contents of a flat ``section.key = value`` experiment file."""

    experiment: ExperimentSection = ExperimentSection()
    transmitter: TransmitterSection = TransmitterSection()
    channel: ChannelSection = ChannelSection()
    receiver: ReceiverSection = ReceiverSection()
    detector: DetectorSection = DetectorSection()
    security: SecuritySection = SecuritySection()
    output: OutputSection = OutputSection()


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def parse_flat_config(text: str, source: str = "<config>") -> Dict[str, Dict[str, Any]]:
    """Parse ``section.key = value`` lines into a nested dict.

    Values are JSON literals when they parse as such, bare strings otherwise.
    """

    tree: Dict[str, Dict[str, Any]] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split(" #", 1)[0].strip()
        if not stripped or stripped.startswith("#"):
            continue

        key, sep, raw = stripped.partition("=")
        key = key.strip()
        section, dot, name = key.partition(".")
        if not sep or not dot or not section or not name or "." in name:
            raise ConfigurationException(
                f"{source}:{number}: expected 'section.key = value', got '{stripped}'"
            )
        if name in tree.get(section, {}):
            raise ConfigurationException(f"{source}:{number}: duplicate key '{key}'")
        tree.setdefault(section, {})[name] = _parse_value(raw.strip())
    return tree


def validate_config_tree(tree: Dict[str, Dict[str, Any]], source: str = "<config>") -> ConfigFile:
    try:
        return ConfigFile(**tree)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in error['loc'])}: {error['msg']}" for error in exc.errors()
        )
        raise ConfigurationException(f"{source}: {problems}") from exc


def _set(target: Dict[str, Any], values: BaseModel, renames: Optional[Dict[str, str]] = None):
    renames = renames or {}
    for name, value in values.model_dump(exclude_none=True).items():
        target[renames.get(name, name)] = value


class ConfigLoader:
    """Builds ExperimentConfig from presets, config files and overrides."""

    def __init__(self, presets: Optional[PresetCatalog] = None):
        self.presets = presets or PresetCatalog()

    def read(self, path: str) -> ConfigFile:
        file_path = Path(path)
        try:
            text = file_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationException(
                f"Cannot read config file {path}: {exc.strerror}"
            ) from exc
        return validate_config_tree(parse_flat_config(text, str(file_path)), str(file_path))

    def build(
        self, config_file: Optional[ConfigFile] = None, preset: Optional[str] = None
    ) -> ExperimentConfig:
        """Preset values first, then the file's keys on top."""

        config_file = config_file or ConfigFile()
        preset = preset or config_file.experiment.preset

        if preset:
            data = self.presets.build(preset).to_dict()
        elif config_file.experiment.protocol is not None:
            data = {"protocol": config_file.experiment.protocol}
        else:
            raise ConfigurationException(
                "Either a preset or experiment.protocol must be given"
            )

        for section in ("transmitter", "channel", "receiver", "detector"):
            nested = dict(data.get(section, {}))
            _set(nested, getattr(config_file, section))
            data[section] = nested

        experiment = config_file.experiment.model_dump(
            exclude_none=True, exclude={"preset", "distances"}
        )
        data.update(experiment)
        _set(data, config_file.security)
        _set(data, config_file.output, {"dir": "output_dir", "format": "report_format"})
        data["preset"] = preset

        try:
            return ExperimentConfig.from_dict(data)
        except QKDBenchException as exc:
            raise ConfigurationException(exc.message) from exc
        except TypeError as exc:
            raise ConfigurationException(f"Invalid configuration: {exc}") from exc

    def load(self, path: Optional[str] = None, preset: Optional[str] = None) -> ExperimentConfig:
        config_file = self.read(path) if path else None
        config = self.build(config_file, preset)
        logger.debug("Loaded %s configuration (preset=%s, file=%s)", config.protocol.value, preset, path)
        return config


def apply_overrides(config: ExperimentConfig, **changes: Any) -> ExperimentConfig:
    """Replace top-level fields, skipping ``None`` values; validation reruns."""

    changes = {k: v for k, v in changes.items() if v is not None}
    if not changes:
        return config
    try:
        return replace(config, **changes)
    except QKDBenchException as exc:
        raise ConfigurationException(exc.message) from exc
    except ValueError as exc:
        raise ConfigurationException(str(exc)) from exc
