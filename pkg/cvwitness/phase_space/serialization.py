"""
Plain-text state format.

    modes=N components=K
    re_w im_w  re_mu[0..2N-1] im_mu[0..2N-1]  cov_row_major[0..4N²-1]

One line per component, whitespace separated, 17 significant digits.
"""

from pathlib import Path

import numpy as np

from cvwitness.base import ConfigError
from cvwitness.phase_space.state import ComplexGaussianComponent, GaussianSumState


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def dumps_state(state: GaussianSumState) -> str:
    """Serialize a state to the plain-text format."""
    lines = [f"modes={state.n_modes} components={len(state)}"]
    for c in state.components:
        fields = [c.weight.real, c.weight.imag, *c.mean.real, *c.mean.imag, *c.cov.ravel()]
        lines.append(" ".join(_fmt(float(v)) for v in fields))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, int]:
    values: dict[str, int] = {}
    column = 1
    for token in line.split():
        key, sep, raw = token.partition("=")
        if not sep or key not in ("modes", "components"):
            raise ConfigError(f"Unexpected header token '{token}'", line=1, column=column)
        try:
            values[key] = int(raw)
        except ValueError as e:
            raise ConfigError(f"'{raw}' is not an integer", line=1, column=column + len(key) + 1) from e
        column += len(token) + 1
    if set(values) != {"modes", "components"}:
        raise ConfigError("Header must be 'modes=N components=K'", line=1, column=1)
    return values["modes"], values["components"]


def loads_state(text: str) -> GaussianSumState:
    """
    Parse the plain-text format.

    Raises:
        ConfigError: With line and column of the first malformed entry
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigError("Empty state file", line=1, column=1)
    n_modes, count = _parse_header(lines[0])
    dim = 2 * n_modes
    expected = 2 + 2 * dim + dim * dim
    if len(lines) - 1 != count:
        raise ConfigError(f"Header declares {count} components, found {len(lines) - 1}", line=1)

    components = []
    for offset, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != expected:
            raise ConfigError(f"Expected {expected} numbers, found {len(tokens)}", line=offset)
        values = np.empty(expected)
        for i, token in enumerate(tokens):
            try:
                values[i] = float(token)
            except ValueError as e:
                column = line.find(token) + 1
                raise ConfigError(f"'{token}' is not a number", line=offset, column=column) from e
        weight = complex(values[0], values[1])
        mean = values[2 : 2 + dim] + 1j * values[2 + dim : 2 + 2 * dim]
        cov = values[2 + 2 * dim :].reshape(dim, dim)
        components.append(ComplexGaussianComponent(weight, mean, cov))
    return GaussianSumState(tuple(components), n_modes)


def save_state(state: GaussianSumState, path: str | Path) -> None:
    Path(path).write_text(dumps_state(state), encoding="utf-8")


def load_state(path: str | Path) -> GaussianSumState:
    return loads_state(Path(path).read_text(encoding="utf-8"))
