"""
Named state descriptors such as ``tmsv:r=0.5`` or ``split-fock:n=1,fid=0.999``.

A descriptor is a name, optionally followed by a colon and comma-separated ``key=value``
pairs. Sweeps override one parameter at a time through :func:`state_family`.
"""

from collections.abc import Callable
from dataclasses import dataclass, field

from cvwitness.base import ConfigError
from cvwitness.phase_space import GaussianSumState
from cvwitness.states.factory import (
    make_lossy,
    make_split_fock,
    make_split_fock_for_fidelity,
    make_split_lossy_phssv,
    make_split_squeezed_vacuum,
    make_tmsv,
    make_vacuum,
)

# Parameters each state accepts; values default to None when required.
STATE_PARAMETERS: dict[str, dict[str, float | None]] = {
    "vacuum": {},
    "tmsv": {"r": None, "eta": 1.0},
    "split-sqv": {"r": None, "eta": 1.0},
    "split-fock": {"n": None, "eps": None, "fid": None, "eta": 1.0},
    "split-phssv": {"r": None, "eta": 1.0},
}


def _format_value(value: float) -> str:
    short = f"{value:g}"
    return short if float(short) == value else repr(value)


@dataclass(frozen=True)
class StateDescriptor:
    """Parsed state name and parameters."""

    name: str
    params: dict[str, float] = field(default_factory=dict)

    def with_params(self, **overrides: float) -> "StateDescriptor":
        return StateDescriptor(self.name, {**self.params, **overrides})

    def __str__(self) -> str:
        if not self.params:
            return self.name
        body = ",".join(f"{k}={_format_value(v)}" for k, v in self.params.items())
        return f"{self.name}:{body}"


def parse_descriptor(
    text: str, table: dict[str, dict[str, float | None]] = STATE_PARAMETERS
) -> StateDescriptor:
    """
    Parse ``name[:key=value,...]`` against a table of known states and parameters.

    Raises:
        ConfigError: For unknown names or parameters and malformed values, with the
            column of the offending token
    """
    text = text.strip()
    name, _, body = text.partition(":")
    if name not in table:
        known = ", ".join(sorted(table))
        raise ConfigError(f"Unknown state '{name}' (known: {known})", column=1)

    allowed = table[name]
    params: dict[str, float] = {}
    column = len(name) + 2
    if body:
        for token in body.split(","):
            key, sep, raw = token.partition("=")
            key = key.strip()
            if not sep:
                raise ConfigError(f"Expected key=value in '{token}'", column=column)
            if key not in allowed:
                raise ConfigError(f"State '{name}' has no parameter '{key}'", column=column)
            try:
                params[key] = float(raw)
            except ValueError:
                raise ConfigError(
                    f"Parameter '{key}' is not a number: '{raw}'", column=column + len(key) + 1
                ) from None
            column += len(token) + 1
    return StateDescriptor(name, params)


def required_param(
    descriptor: StateDescriptor,
    key: str,
    table: dict[str, dict[str, float | None]] = STATE_PARAMETERS,
) -> float:
    """Parameter value, falling back to the table default."""
    value = descriptor.params.get(key, table[descriptor.name][key])
    if value is None:
        raise ConfigError(f"State '{descriptor.name}' needs parameter '{key}'")
    return value


def build_state(descriptor: StateDescriptor | str) -> GaussianSumState:
    """
    Construct the two-mode state a descriptor names.

    Loss ``eta`` acts on both modes for Gaussian states and on the input before the
    split for split states.

    Raises:
        ConfigError: If a required parameter is missing
        InvalidParameterError: If a parameter value is out of range
    """
    if isinstance(descriptor, str):
        descriptor = parse_descriptor(descriptor)
    name = descriptor.name
    if name == "vacuum":
        return make_vacuum(2)

    eta = required_param(descriptor, "eta")
    if name == "tmsv":
        return make_lossy(make_tmsv(required_param(descriptor, "r")), eta)
    if name == "split-sqv":
        return make_lossy(make_split_squeezed_vacuum(required_param(descriptor, "r")), eta)
    if name == "split-phssv":
        return make_split_lossy_phssv(required_param(descriptor, "r"), eta)

    n = required_param(descriptor, "n")
    if n != int(n):
        raise ConfigError(f"Photon number must be an integer, got {n:g}")
    if "eps" in descriptor.params:
        return make_split_fock(int(n), descriptor.params["eps"], eta)
    if "fid" in descriptor.params:
        return make_split_fock_for_fidelity(int(n), descriptor.params["fid"], eta)
    raise ConfigError("State 'split-fock' needs either 'eps' or 'fid'")


def state_family(
    descriptor: StateDescriptor | str, variable: str
) -> Callable[[float], GaussianSumState]:
    """
    One-parameter family obtained by overriding ``variable`` in the descriptor.

    Raises:
        ConfigError: If the state has no such parameter
    """
    if isinstance(descriptor, str):
        descriptor = parse_descriptor(descriptor)
    if variable not in STATE_PARAMETERS[descriptor.name]:
        raise ConfigError(f"State '{descriptor.name}' has no parameter '{variable}' to sweep")
    base = descriptor

    def family(value: float) -> GaussianSumState:
        return build_state(base.with_params(**{variable: value}))

    return family
