"""Experiment configuration.

Config files are flat UTF-8 text, one ``section.key = value`` per line;
``#`` starts a comment.  Every key has a default, and the defaults
describe the 64-sensor, 25-user scenario with rank 5 and the PDB bound.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from ..array_model import ConfigurationError, ScenarioConfig, build_scenario
from ..bounds import BOUND_MODES, NOISE_MODES

ALGORITHMS = ("jio-sm-sg", "jio-sg", "fr-sg", "fr-sm-sg", "oracle")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean (true/false)")


def _algos(text: str) -> tuple[str, ...]:
    return tuple(a.strip() for a in text.split(",") if a.strip())


# key -> (attribute, parser, domain description)
_KEYS = {
    "scenario.m": ("m", int, "integer >= 1"),
    "scenario.q": ("q", int, "integer in [1, m]"),
    "scenario.snr_db": ("snr_db", float, "real number (dB)"),
    "scenario.inr_db": ("inr_db", float, "real number (dB)"),
    "scenario.theta0": ("theta0", float, "angle in (0, 180) degrees"),
    "scenario.doa_layout": ("doa_layout", str, "even | random"),
    "scenario.desired_power": ("desired_power", float, "real number > 0"),
    "scenario.spacing_ratio": ("spacing_ratio", float, "real number > 0"),
    "scenario.gamma": ("gamma", float, "nonzero real number"),
    "run.algorithms": ("algorithms", _algos, "comma list of " + ",".join(ALGORITHMS)),
    "run.runs": ("runs", int, "integer >= 1"),
    "run.snapshots": ("snapshots", int, "integer >= 1"),
    "run.seed": ("seed", int, "integer >= 0"),
    "run.workers": ("workers", int, "integer >= 1"),
    "jio.rank": ("rank", int, "integer in [1, m]"),
    "jio.mu_t": ("mu_T", float, "real number >= 0"),
    "jio.mu_w": ("mu_w", float, "real number >= 0"),
    "jio.normalized_projector": ("normalized_projector", _bool, "boolean"),
    "jio.reproject": ("reproject", _bool, "boolean"),
    "fr.mu": ("mu_fr", float, "real number >= 0"),
    "bound.mode": ("bound_mode", str, " | ".join(BOUND_MODES)),
    "bound.delta_fixed": ("delta_fixed", float, "real number >= 0"),
    "bound.alpha": ("alpha", float, "real number > 1"),
    "bound.beta": ("beta", float, "real number in [0, 1]"),
    "noise.mode": ("noise_mode", str, " | ".join(NOISE_MODES)),
    "noise.rho": ("noise_rho", float, "real number in [0, 1]"),
    "output.csv": ("csv", str, "file path"),
    "output.plot": ("plot", str, "file path"),
}


@dataclass(frozen=True)
class AlgorithmSpec:
    """One curve in an experiment: an algorithm kind plus parameter overrides."""

    kind: str
    label: str = ""
    overrides: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.kind not in ALGORITHMS:
            raise ConfigurationError(
                f"unknown algorithm {self.kind!r}; expected one of {', '.join(ALGORITHMS)}")
        if not self.label:
            object.__setattr__(self, "label", self.kind)


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 64
    q: int = 25
    snr_db: float = 10.0
    inr_db: float = 30.0
    theta0: float = 90.0
    doa_layout: str = "even"
    desired_power: float = 1.0
    spacing_ratio: float = 0.5
    gamma: float = 1.0
    algorithms: tuple[str, ...] = ("jio-sm-sg", "jio-sg", "fr-sg", "fr-sm-sg", "oracle")
    runs: int = 100
    snapshots: int = 1000
    seed: int = 2024
    workers: int = 1
    rank: int = 5
    mu_T: float = 1e-5
    mu_w: float = 1e-5
    normalized_projector: bool = True
    reproject: bool = False
    mu_fr: float = 7e-7
    bound_mode: str = "pdb"
    delta_fixed: float = 1.0
    alpha: float = 22.0
    beta: float = 0.99
    noise_mode: str = "known"
    noise_rho: float = 0.9
    csv: str = ""
    plot: str = ""
    extra: tuple[AlgorithmSpec, ...] = field(default=(), compare=True)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(key, value):
            raise ConfigurationError(
                f"{key} = {value!r} is invalid; expected {_KEYS[key][2]}")

        if self.m < 1:
            bad("scenario.m", self.m)
        if not 1 <= self.q <= self.m:
            bad("scenario.q", self.q)
        if not 0 < self.theta0 < 180:
            bad("scenario.theta0", self.theta0)
        if self.doa_layout not in ("even", "random"):
            bad("scenario.doa_layout", self.doa_layout)
        if not self.desired_power > 0:
            bad("scenario.desired_power", self.desired_power)
        if not self.spacing_ratio > 0:
            bad("scenario.spacing_ratio", self.spacing_ratio)
        if self.gamma == 0:
            bad("scenario.gamma", self.gamma)
        if not self.algorithms and not self.extra:
            bad("run.algorithms", "")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                bad("run.algorithms", a)
        if self.runs < 1:
            bad("run.runs", self.runs)
        if self.snapshots < 1:
            bad("run.snapshots", self.snapshots)
        if self.seed < 0:
            bad("run.seed", self.seed)
        if self.workers < 1:
            bad("run.workers", self.workers)
        if not 1 <= self.rank <= self.m:
            bad("jio.rank", self.rank)
        if self.mu_T < 0:
            bad("jio.mu_t", self.mu_T)
        if self.mu_w < 0:
            bad("jio.mu_w", self.mu_w)
        if self.mu_fr < 0:
            bad("fr.mu", self.mu_fr)
        if self.bound_mode not in BOUND_MODES:
            bad("bound.mode", self.bound_mode)
        if self.delta_fixed < 0:
            bad("bound.delta_fixed", self.delta_fixed)
        if not self.alpha > 1:
            bad("bound.alpha", self.alpha)
        if not 0 <= self.beta <= 1:
            bad("bound.beta", self.beta)
        if self.noise_mode not in NOISE_MODES:
            bad("noise.mode", self.noise_mode)
        if not 0 <= self.noise_rho <= 1:
            bad("noise.rho", self.noise_rho)

    @property
    def specs(self) -> tuple[AlgorithmSpec, ...]:
        return tuple(AlgorithmSpec(a) for a in self.algorithms) + tuple(self.extra)

    def scenario(self, rng=None) -> ScenarioConfig:
        return build_scenario(m=self.m, q=self.q, snr_db=self.snr_db, inr_db=self.inr_db,
                              theta0=self.theta0, layout=self.doa_layout,
                              desired_power=self.desired_power,
                              spacing_ratio=self.spacing_ratio, gamma=self.gamma, rng=rng)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


def parse_pairs(pairs: dict[str, str], base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Apply ``section.key -> text`` pairs on top of ``base`` (default config)."""
    changes = {}
    for key, text in pairs.items():
        if key not in _KEYS:
            raise ConfigurationError(f"unknown config key {key!r}")
        attr, parse, domain = _KEYS[key]
        try:
            changes[attr] = parse(text.strip())
        except ValueError:
            raise ConfigurationError(
                f"{key} = {text.strip()!r} is invalid; expected {domain}") from None
    return (base or ExperimentConfig()).replace(**changes)


def parse_text(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'section.key = value', got {raw!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def parse_config(text: str = "", overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Build a config from file text, then apply ``overrides`` (CLI flags win)."""
    pairs = parse_text(text)
    pairs.update(overrides or {})
    return parse_pairs(pairs)


def load_config(path, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, overrides)
