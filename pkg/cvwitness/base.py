"""
cvwitness Base Module

Shared error hierarchy and environment-backed settings for every cvwitness component.
"""

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

DEFAULT_SEED = 20240101
DEFAULT_CHUNK_SIZE = 262_144
DEFAULT_FOCK_CUTOFF = 30


class WitnessError(Exception):
    """Base class for all cvwitness errors."""


class InvalidParameterError(WitnessError, ValueError):
    """Argument outside its domain (efficiency, mode index, dimension, order)."""


class DegenerateComponentError(WitnessError):
    """A component covariance is singular or too badly conditioned to invert."""

    def __init__(self, index: int, condition_number: float):
        self.index = index
        self.condition_number = condition_number
        super().__init__(
            f"Component {index} has a degenerate covariance (condition number {condition_number:.3e})"
        )


class NonSymplecticError(WitnessError):
    """Matrix does not preserve the symplectic form."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"Matrix is not symplectic: ||S J S^T - J|| = {residual:.3e}")


class RealityCheckError(WitnessError):
    """A quantity that must be real came out complex: the state is not conjugate-paired."""

    def __init__(self, what: str, imag: float, tolerance: float):
        self.imag = imag
        super().__init__(
            f"{what} has imaginary residue {imag:.3e} above tolerance {tolerance:.3e}; "
            "the state components are not conjugate-paired"
        )


class PreconditionError(WitnessError):
    """State is not centered or not in standard form."""


class IllConditionedError(WitnessError):
    """Linear system for the coherent-ring amplitudes is ill-conditioned."""

    def __init__(self, condition_number: float):
        self.condition_number = condition_number
        super().__init__(
            f"Ring amplitude system is ill-conditioned (condition number {condition_number:.3e}); "
            "increase epsilon or lower the stellar rank"
        )


class PoorApproximationError(WitnessError):
    """Ring approximation leaves too much norm outside the target support."""

    def __init__(self, tail_norm: float):
        self.tail_norm = tail_norm
        super().__init__(f"Ring approximation tail norm {tail_norm:.3e} exceeds 10%")


class HeraldingError(WitnessError):
    """Heralding probability too small to normalize the conditional state."""


class SamplingError(WitnessError):
    """Rejection sampler found a negative target or a pathological acceptance rate."""


class SampleFileError(WitnessError):
    """Sample CSV file is malformed."""

    def __init__(self, path: str | Path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


class NoCrossingError(WitnessError):
    """Witness margin does not change sign on the bracket."""

    def __init__(self, lo: float, hi: float, margin_lo: float, margin_hi: float):
        self.bracket = (lo, hi)
        self.margins = (margin_lo, margin_hi)
        super().__init__(
            f"No crossing on [{lo:g}, {hi:g}]: margin {margin_lo:.6g} at {lo:g}, "
            f"{margin_hi:.6g} at {hi:g}"
        )


class CutoffLeakageError(WitnessError):
    """Fock-space truncation discards more norm than allowed, weighted by the fourth-moment scale."""

    def __init__(self, leakage: float, cutoff: int, limit: float):
        self.leakage = leakage
        self.cutoff = cutoff
        super().__init__(
            f"Weighted truncation leakage {leakage:.3e} at cutoff {cutoff} exceeds {limit:.1e}; "
            "raise the cutoff"
        )


class ConfigError(WitnessError):
    """Invalid CLI configuration, state descriptor, or config file entry."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        elif column is not None:
            location = f"column {column}: "
        super().__init__(f"{location}{message}")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw, 0)
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} is not an integer") from e


@dataclass(frozen=True)
class Settings:
    """
    Runtime settings resolved from the environment.

    Attributes:
        seed: Fallback RNG seed (``WITNESS_SEED``)
        workers: Parallel workers for sweeps and sampling chunks (``WITNESS_WORKERS``)
        chunk_size: Proposals per sampling chunk (``WITNESS_CHUNK_SIZE``)
        fock_cutoff: Default Fock-oracle cutoff (``WITNESS_FOCK_CUTOFF``)
        metrics_file: Prometheus textfile output path (``WITNESS_METRICS_FILE``)
    """

    seed: int = DEFAULT_SEED
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    fock_cutoff: int = DEFAULT_FOCK_CUTOFF
    metrics_file: str | None = None

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from ``WITNESS_*`` environment variables.

        Returns:
            Settings instance

        Raises:
            ConfigError: If a variable is present but malformed or out of range
        """
        settings = cls(
            seed=_env_int("WITNESS_SEED", DEFAULT_SEED),
            workers=_env_int("WITNESS_WORKERS", 1),
            chunk_size=_env_int("WITNESS_CHUNK_SIZE", DEFAULT_CHUNK_SIZE),
            fock_cutoff=_env_int("WITNESS_FOCK_CUTOFF", DEFAULT_FOCK_CUTOFF),
            metrics_file=os.getenv("WITNESS_METRICS_FILE") or None,
        )
        if not 0 <= settings.seed < 2**64:
            raise ConfigError(f"WITNESS_SEED must be an unsigned 64-bit integer, got {settings.seed}")
        if settings.workers < 1:
            raise ConfigError(f"WITNESS_WORKERS must be >= 1, got {settings.workers}")
        if settings.chunk_size < 1024:
            raise ConfigError(f"WITNESS_CHUNK_SIZE must be >= 1024, got {settings.chunk_size}")
        if settings.fock_cutoff < 8:
            raise ConfigError(f"WITNESS_FOCK_CUTOFF must be >= 8, got {settings.fock_cutoff}")
        return settings
