"""Domain types shared across the package: instances, arm statistics, run outcomes."""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    """Invalid instance, algorithm configuration or parameter domain."""


class InstanceFileError(ConfigError):
    pass


class Algorithm(str, enum.Enum):
    LILHDOC = "lilhdoc"
    HDOC = "hdoc"
    LUCBG = "lucbg"

    @classmethod
    def parse(cls, name: str) -> "Algorithm":
        key = name.strip().lower().replace("'", "").replace("-", "").replace("_", "")
        for algo in cls:
            if algo.value == key:
                return algo
        raise ConfigError(f"unknown algorithm {name!r}; expected one of lilhdoc, hdoc, lucbg")


class Label(str, enum.Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True)
class BanditInstance:
    """Bernoulli arms with a threshold; arms with mean >= threshold are good."""

    arm_means: Tuple[float, ...]
    threshold: float
    name: str = "instance"

    def __post_init__(self):
        means = tuple(float(m) for m in self.arm_means)
        object.__setattr__(self, "arm_means", means)
        object.__setattr__(self, "threshold", float(self.threshold))
        if len(means) < 1:
            raise ConfigError("instance needs at least one arm")
        for i, m in enumerate(means):
            if not (0.0 <= m <= 1.0):
                raise ConfigError(f"arm {i} mean {m} outside [0, 1]")
        if not (0.0 < self.threshold < 1.0):
            raise ConfigError(f"threshold {self.threshold} outside (0, 1)")

    @property
    def K(self) -> int:
        return len(self.arm_means)

    @property
    def good_arms(self) -> List[int]:
        return [i for i, m in enumerate(self.arm_means) if m >= self.threshold]

    @property
    def bad_arms(self) -> List[int]:
        return [i for i, m in enumerate(self.arm_means) if m < self.threshold]

    @property
    def m(self) -> int:
        return len(self.good_arms)

    @property
    def gaps(self) -> List[float]:
        return [abs(m - self.threshold) for m in self.arm_means]

    def pair_gap(self, i: int, j: int) -> float:
        return self.arm_means[i] - self.arm_means[j]

    @property
    def min_gap(self) -> float:
        """min(min_i gap_i, min_j (mu_(j) - mu_(j+1)) / 2) over means sorted descending."""
        srt = sorted(self.arm_means, reverse=True)
        adjacent = [(srt[j] - srt[j + 1]) / 2 for j in range(len(srt) - 1)]
        return min(self.gaps + adjacent)


def ground_truth(instance: BanditInstance) -> Tuple[List[int], List[int], List[float]]:
    return instance.good_arms, instance.bad_arms, instance.gaps


@dataclass
class ArmState:
    pulls: int = 0
    reward_sum: int = 0

    def update(self, reward: int) -> None:
        self.pulls += 1
        self.reward_sum += reward

    @property
    def mean(self) -> float:
        if self.pulls < 1:
            raise ValueError("empirical mean undefined before the first pull")
        return self.reward_sum / self.pulls


@dataclass(frozen=True)
class AlgoConfig:
    algorithm: Algorithm
    delta: float = 0.01
    seed: int = 0
    max_total_pulls: int = 500_000_000

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm.parse(self.algorithm)
                           if isinstance(self.algorithm, str) else self.algorithm)
        if not (0.0 < self.delta < 1.0):
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")
        if self.algorithm is Algorithm.LILHDOC and not self.delta < 1 / math.e:
            raise ConfigError("delta must be strictly below 1/e")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def validate_for(self, instance: BanditInstance) -> None:
        if self.max_total_pulls < instance.K:
            raise ConfigError(f"max_total_pulls={self.max_total_pulls} is below K={instance.K}")
        if self.algorithm is Algorithm.LILHDOC and instance.K < 2:
            raise ConfigError("instance too small for lil'HDoC parameterization (K < 2)")


class Event(NamedTuple):
    """One label emission; pulls/reward_sum are the arm's counters at that moment."""

    arm: int
    label: Label
    round: int
    pulls: int
    reward_sum: int


@dataclass
class RunOutcome:
    events: List[Event]
    tau_lambda: List[int]
    tau_stop: Optional[int]
    truncated: bool
    misclassified: bool
    pulls_per_arm: List[int]
    total_pulls: int = 0

    def tau(self, lam: int) -> Optional[int]:
        """Total samples at the lam-th good output, or None when never reached."""
        return self.tau_lambda[lam - 1] if 1 <= lam <= len(self.tau_lambda) else None


def score_outcome(outcome: RunOutcome, instance: BanditInstance) -> bool:
    good = set(instance.good_arms)
    for ev in outcome.events:
        if (ev.label is Label.GOOD) != (ev.arm in good):
            return True
    return False


@dataclass
class AggregateStats:
    algorithm: str
    lambda_stats: List[Tuple[float, float, int]]
    stop_stats: Tuple[float, float, int]
    runs: int
    truncated_runs: int = 0
    misclassified_runs: int = 0
    scale_divisor: float = 1.0

    def __post_init__(self):
        if self.scale_divisor <= 0:
            raise ValueError("scale_divisor must be positive")


def mean_std(values: Sequence[float]) -> Tuple[float, float, int]:
    """Population mean and standard deviation; (nan, nan, 0) for no values."""
    n = len(values)
    if n == 0:
        return math.nan, math.nan, 0
    mu = math.fsum(values) / n
    var = math.fsum((v - mu) ** 2 for v in values) / n
    return mu, math.sqrt(var), n


# ---------------------------------------------------------------------------
# instance files
#
# Grammar is the TOML subset:
#     name = "synthetic"
#     threshold = 0.004
#     means = [0.007, 0.006, 0.005]
# Unknown keys are rejected.

_INSTANCE_KEYS = {"name", "threshold", "means"}


def parse_instance(text: str, source: str = "<string>") -> BanditInstance:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InstanceFileError(f"{source}: {exc}") from None
    extra = set(data) - _INSTANCE_KEYS
    if extra:
        raise InstanceFileError(f"{source}: unknown key(s) {sorted(extra)}")
    for key in ("threshold", "means"):
        if key not in data:
            raise InstanceFileError(f"{source}: missing key {key!r}")
    means = data["means"]
    if not isinstance(means, list) or not all(
        isinstance(m, (int, float)) and not isinstance(m, bool) for m in means
    ):
        raise InstanceFileError(f"{source}: key 'means' must be an array of numbers")
    thr = data["threshold"]
    if not isinstance(thr, (int, float)) or isinstance(thr, bool):
        raise InstanceFileError(f"{source}: key 'threshold' must be a number")
    name = data.get("name", Path(source).stem)
    if not isinstance(name, str):
        raise InstanceFileError(f"{source}: key 'name' must be a string")
    try:
        return BanditInstance(tuple(means), thr, name)
    except ConfigError as exc:
        raise InstanceFileError(f"{source}: {exc}") from None


def load_instance(path) -> BanditInstance:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), str(path))


def _toml_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def dump_instance(instance: BanditInstance) -> str:
    # repr() of a float round-trips exactly
    name = _toml_string(instance.name)
    means = ", ".join(repr(m) for m in instance.arm_means)
    return f'name = {name}\nthreshold = {instance.threshold!r}\nmeans = [{means}]\n'


def save_instance(instance: BanditInstance, path) -> None:
    Path(path).write_text(dump_instance(instance), encoding="utf-8")
