"""
Experiment configuration for the command-line front end.

Values are resolved in order: explicit command-line flags, then a ``--config`` file of
``key=value`` lines, then ``WITNESS_*`` environment settings, then built-in defaults.
"""

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from cvwitness.base import ConfigError, InvalidParameterError, Settings
from cvwitness.sampling import MIN_SAMPLES
from cvwitness.witness import DEFAULT_PAIR, DEFAULT_TOL, Criterion, EprOperatorPair

DEFAULT_GRID = "0:1:0.05"
DEFAULT_SAMPLES = 1_000_000


def parse_pair(text: str) -> EprOperatorPair:
    """Parse ``g1,g2,h1,h2``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"Pair needs four comma-separated numbers, got '{text}'")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"Pair values must be numbers, got '{text}'") from None
    try:
        return EprOperatorPair(*values)
    except InvalidParameterError as e:
        raise ConfigError(str(e)) from e


def parse_grid(text: str) -> tuple[float, ...]:
    """
    Parse ``lo:hi:step`` (inclusive of hi) or an explicit comma-separated list.

    Raises:
        ConfigError: For malformed grids or values that are not strictly increasing
    """
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            if step <= 0 or hi < lo:
                raise ConfigError(f"Grid '{text}' needs lo <= hi and a positive step")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = tuple(float(v) for v in np.round(lo + step * np.arange(count), 12))
        else:
            values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"Malformed grid '{text}'") from None
    if not values:
        raise ConfigError("Grid is empty")
    if any(b <= a for a, b in zip(values, values[1:], strict=False)):
        raise ConfigError(f"Grid '{text}' is not strictly increasing")
    return values


def parse_bracket(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"Bracket needs 'lo,hi', got '{text}'")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"Bracket values must be numbers, got '{text}'") from None
    if not lo < hi:
        raise ConfigError(f"Bracket must satisfy lo < hi, got '{text}'")
    return lo, hi


def read_config_file(path: str | Path) -> dict[str, str]:
    """
    Read ``key=value`` lines. Blank lines and ``#`` comments are skipped.

    Keys are normalized to underscores so ``chunk-size`` and ``chunk_size`` match.

    Raises:
        ConfigError: With the line and column of a malformed entry
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    values: dict[str, str] = {}
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            column = len(line) - len(line.lstrip()) + 1
            raise ConfigError(f"Expected key=value in {path}", line=number, column=column)
        key = key.strip().replace("-", "_")
        if not key:
            raise ConfigError(f"Empty key in {path}", line=number, column=line.index("=") + 1)
        values[key] = value.strip()
    return values


@dataclass
class ExperimentConfig:
    """
    Fully resolved settings of one command.

    Attributes:
        state: State descriptor
        pair: EPR operator pair
        variable: Swept parameter name
        grid: Sweep grid, strictly increasing
        bracket: Threshold search interval
        tol: Threshold tolerance
        criterion: Criterion used by the threshold search
        samples: Sample count S per layout
        seed: RNG seed
        workers: Parallel workers
        chunk_size: Sampling proposals per chunk
        output: CSV destination (stdout when None)
        sample_prefix: Path prefix of the four sample files
        metrics_file: Prometheus textfile destination
        save_state: Path to write the built state to
        load_state: Path to read a state from instead of building one
        cutoff: Fock-oracle cutoff
    """

    state: str = "vacuum"
    pair: EprOperatorPair = DEFAULT_PAIR
    variable: str | None = None
    grid: tuple[float, ...] = field(default_factory=lambda: parse_grid(DEFAULT_GRID))
    bracket: tuple[float, float] = (0.0, 1.0)
    tol: float = DEFAULT_TOL
    criterion: Criterion = Criterion.FOURTH_ORDER
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    workers: int = 1
    chunk_size: int = 0
    output: str | None = None
    sample_prefix: str = "samples"
    metrics_file: str | None = None
    save_state: str | None = None
    load_state: str | None = None
    cutoff: int = 0

    def to_json_dict(self) -> dict[str, Any]:
        """Plain values for the metadata line of output files."""
        data = asdict(self)
        data["pair"] = list(self.pair.as_tuple())
        data["criterion"] = self.criterion.value
        data["grid"] = list(self.grid)
        data["bracket"] = list(self.bracket)
        return data


# Config-file spellings of option names.
_ALIASES = {"var": "variable", "prefix": "sample_prefix"}

# Converters from text (config file or flag) to typed values.
_CONVERTERS = {
    "state": str,
    "pair": parse_pair,
    "variable": str,
    "grid": parse_grid,
    "bracket": parse_bracket,
    "tol": float,
    "criterion": Criterion,
    "samples": int,
    "seed": lambda v: int(v, 0),
    "workers": int,
    "chunk_size": int,
    "output": str,
    "sample_prefix": str,
    "metrics_file": str,
    "save_state": str,
    "load_state": str,
    "cutoff": int,
}


def _convert(key: str, value: Any) -> Any:
    if not isinstance(value, str):
        return value
    try:
        return _CONVERTERS[key](value)
    except ConfigError:
        raise
    except (ValueError, InvalidParameterError) as e:
        raise ConfigError(f"Invalid value for '{key}': {value!r} ({e})") from e


def resolve_config(
    flags: dict[str, Any],
    file_values: dict[str, str] | None = None,
    settings: Settings | None = None,
    require_samples: bool = False,
) -> ExperimentConfig:
    """
    Merge explicit flags, config-file values and environment settings.

    Args:
        flags: Explicitly given command-line values (None means not given)
        file_values: Entries from a ``--config`` file
        settings: Environment settings supplying seed, workers, chunk size and cutoff
        require_samples: Enforce S ≥ 10⁴

    Returns:
        ExperimentConfig

    Raises:
        ConfigError: For unknown keys or invalid values
    """
    settings = settings or Settings.from_env()
    merged: dict[str, Any] = {}
    for key, value in (file_values or {}).items():
        key = _ALIASES.get(key, key)
        if key not in _CONVERTERS:
            raise ConfigError(f"Unknown config key '{key}'")
        merged[key] = _convert(key, value)
    for key, value in flags.items():
        if value is not None and key in _CONVERTERS:
            merged[key] = _convert(key, value)

    merged.setdefault("seed", settings.seed)
    merged.setdefault("workers", settings.workers)
    merged.setdefault("chunk_size", settings.chunk_size)
    merged.setdefault("cutoff", settings.fock_cutoff)
    merged.setdefault("metrics_file", settings.metrics_file)

    config = ExperimentConfig(**merged)
    if not 0 <= config.seed < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {config.seed}")
    if config.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {config.workers}")
    if config.tol <= 0:
        raise ConfigError(f"tol must be positive, got {config.tol}")
    if require_samples and config.samples < MIN_SAMPLES:
        raise ConfigError(f"samples must be >= {MIN_SAMPLES} for estimation, got {config.samples}")
    return config
