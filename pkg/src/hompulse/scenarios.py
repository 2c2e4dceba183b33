"""Named experimental scenarios and their configuration files.

A scenario bundles the pulse trains, the phase process, the detector, the
electronic delay and the scan. The six named scenarios correspond to the
singles and coincidence measurements of the experiment; ``custom`` starts
from the same defaults and is meant to be filled in from a config file.

Config files are TOML::

    schema_version = 1
    scenario = "hom_delayed"
    seed = 7
    trials_per_point = 20000

    [physics]
    mean_photon_number = 0.05
    slot_offset_m = 18

    [physics.phase]
    kind = "independent_rf_fm_noise"
    deviation_fraction = 0.25

    [scan]
    start_um = -40
    stop_um = 40
    step_um = 2
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass

import numpy as np

from .clicksim import DetectorModel, scan_positions
from .config import PulseTrainConfig
from .phase import IndependentRF, IndependentRFWithFMNoise, PhaseProcess, Synchronized

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_VERSION = 1
DELAYED_SLOT_OFFSET = 18

SCENARIOS = (
    "mz_synchronized",
    "mz_independent",
    "hom_overlapped",
    "hom_delayed",
    "hom_fm_overlapped",
    "hom_fm_delayed",
    "custom",
)

PHASE_KINDS = {
    "synchronized": Synchronized,
    "independent_rf": IndependentRF,
    "independent_rf_fm_noise": IndependentRFWithFMNoise,
}


class ConfigError(ValueError):
    """Invalid or inconsistent scenario configuration."""


@dataclass(frozen=True)
class ScanRange:
    start_um: float = -60.0
    stop_um: float = 60.0
    step_um: float = 1.0

    def __post_init__(self):
        if not self.step_um > 0:
            raise ConfigError("scan step_um must be > 0")
        if not self.start_um < self.stop_um:
            raise ConfigError("scan start_um must be < stop_um")

    def positions(self) -> np.ndarray:
        return scan_positions(self.start_um, self.stop_um, self.step_um)


# fringe scans: lambda/30 steps over four fringes either side of zero delay;
# both span 120 points including zero delay
FRINGE_SCAN = ScanRange(-1.56, 1.534, 0.026)
DIP_SCAN = ScanRange(-60.0, 59.0, 1.0)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "hom_overlapped"
    pulses: PulseTrainConfig = PulseTrainConfig()
    process: PhaseProcess = IndependentRF()
    detector: DetectorModel = DetectorModel()
    slot_offset_m: int = 0
    scan: ScanRange = DIP_SCAN
    trials_per_point: int = 100_000
    seed: int = 42

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.slot_offset_m < 0:
            raise ConfigError("slot_offset_m must be >= 0")

    @property
    def tau_d(self) -> float:
        return self.slot_offset_m * self.pulses.slot_period

    def to_dict(self) -> dict:
        process = dataclasses.asdict(self.process)
        process["kind"] = next(k for k, cls in PHASE_KINDS.items() if isinstance(self.process, cls))
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "seed": self.seed,
            "trials_per_point": self.trials_per_point,
            "physics": {
                "wavelength_nm": self.pulses.wavelength,
                "bandwidth_nm": self.pulses.bandwidth,
                "repetition_rate_mhz": self.pulses.repetition_rate,
                "mean_photon_number": self.pulses.mean_photon_number,
                "intensity_ratio": self.pulses.intensity_ratio,
                "intensity_statistics": self.pulses.intensity_statistics,
                "detector_efficiency": self.detector.efficiency,
                "slot_offset_m": self.slot_offset_m,
                "tau_d_ns": self.tau_d,
                "phase": process,
            },
            "scan": dataclasses.asdict(self.scan),
        }


def named_scenario(name: str) -> ScenarioConfig:
    """Default configuration of a named scenario."""
    fm = IndependentRFWithFMNoise(dphi_ij=0.0, rf_frequency=40.0, deviation_fraction=0.5)
    table = {
        "mz_synchronized": dict(process=Synchronized(0.0), scan=FRINGE_SCAN),
        "mz_independent": dict(process=IndependentRF(), scan=FRINGE_SCAN),
        "hom_overlapped": dict(process=IndependentRF()),
        "hom_delayed": dict(process=IndependentRF(), slot_offset_m=DELAYED_SLOT_OFFSET),
        "hom_fm_overlapped": dict(process=fm),
        "hom_fm_delayed": dict(process=fm, slot_offset_m=DELAYED_SLOT_OFFSET),
        "custom": {},
    }
    if name not in table:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    return ScenarioConfig(scenario=name, **table[name])


_PHYSICS_KEYS = {
    "wavelength_nm": "wavelength",
    "bandwidth_nm": "bandwidth",
    "repetition_rate_mhz": "repetition_rate",
    "mean_photon_number": "mean_photon_number",
    "intensity_ratio": "intensity_ratio",
    "intensity_statistics": "intensity_statistics",
}
_PHASE_KEYS = {"phi0", "dphi_ij", "rf_frequency", "deviation_fraction"}


def _reject_unknown(section: dict, allowed, where: str):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _phase_from_table(table: dict, current: PhaseProcess) -> PhaseProcess:
    _reject_unknown(table, _PHASE_KEYS | {"kind"}, "[physics.phase]")
    if "kind" in table:
        kind = table["kind"]
        if kind not in PHASE_KINDS:
            raise ConfigError(f"unknown phase kind {kind!r}; choose from {', '.join(PHASE_KINDS)}")
        cls = PHASE_KINDS[kind]
    else:
        cls = type(current)
    fields = {f.name for f in dataclasses.fields(cls)}
    misplaced = set(table) - fields - {"kind"}
    if misplaced:
        raise ConfigError(f"{', '.join(sorted(misplaced))} not valid for phase kind {cls.__name__}")
    base = dataclasses.asdict(current) if isinstance(current, cls) else {}
    base.update({k: v for k, v in table.items() if k != "kind"})
    return cls(**base)


def scenario_from_mapping(data: dict) -> ScenarioConfig:
    """Build a scenario from a parsed config document (defaults from its named scenario)."""
    _reject_unknown(data, {"schema_version", "scenario", "seed", "trials_per_point", "physics", "scan"}, "config")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
    try:
        base = named_scenario(data.get("scenario", "custom"))
        physics = dict(data.get("physics", {}))
        phase_table = physics.pop("phase", {})
        _reject_unknown(physics, set(_PHYSICS_KEYS) | {"detector_efficiency", "slot_offset_m", "tau_d_ns"},
                        "[physics]")
        physics.pop("tau_d_ns", None)  # derived; accepted so metadata files round-trip
        pulses = dataclasses.replace(
            base.pulses, **{_PHYSICS_KEYS[k]: v for k, v in physics.items() if k in _PHYSICS_KEYS}
        )
        detector = DetectorModel(physics.get("detector_efficiency", base.detector.efficiency))
        scan_table = data.get("scan", {})
        _reject_unknown(scan_table, {"start_um", "stop_um", "step_um"}, "[scan]")
        scan = dataclasses.replace(base.scan, **scan_table)
        return ScenarioConfig(
            scenario=base.scenario,
            pulses=pulses,
            process=_phase_from_table(phase_table, base.process),
            detector=detector,
            slot_offset_m=int(physics.get("slot_offset_m", base.slot_offset_m)),
            scan=scan,
            trials_per_point=int(data.get("trials_per_point", base.trials_per_point)),
            seed=int(data.get("seed", base.seed)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ScenarioConfig:
    with open(path, "rb") as handle:
        try:
            data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return scenario_from_mapping(data)


def with_overrides(config: ScenarioConfig, *, seed=None, trials=None) -> ScenarioConfig:
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if trials is not None:
        changes["trials_per_point"] = trials
    return dataclasses.replace(config, **changes) if changes else config

