"""
Sample CSV files.

    # state=<descriptor> layout=<xx|pp|het1|het2> seed=<u64> S=<count>
    a,b
    <a>,<b>
    ...

Values are written with 17 significant digits so a read-back is bit-identical.
"""

from pathlib import Path

import numpy as np

from cvwitness.base import SampleFileError
from cvwitness.logger import WitnessLogger
from cvwitness.sampling.sampler import Layout, QuadratureSamples

logger = WitnessLogger.get_logger("sampling")

HEADER_KEYS = ("state", "layout", "seed", "S")


def format_header(samples: QuadratureSamples) -> str:
    return (
        f"# state={samples.state_descriptor or 'unknown'} layout={samples.layout.value} "
        f"seed={samples.seed} S={samples.size}"
    )


def write_samples(samples: QuadratureSamples, path: str | Path) -> None:
    """Write samples with their metadata header."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        f.write(format_header(samples) + "\n")
        f.write("a,b\n")
        np.savetxt(f, samples.data, fmt="%.17g", delimiter=",")
    logger.debug(f"Wrote {samples.size} {samples.layout.value} samples to {path}")


def _parse_header(path: Path, line: str) -> dict[str, str]:
    if not line.startswith("#"):
        raise SampleFileError(path, 1, "missing '# state=... layout=... seed=... S=...' header")
    fields: dict[str, str] = {}
    for token in line[1:].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise SampleFileError(path, 1, f"malformed header token '{token}'")
        fields[key] = value
    missing = [k for k in HEADER_KEYS if k not in fields]
    if missing:
        raise SampleFileError(path, 1, f"header is missing {', '.join(missing)}")
    return fields


def read_samples(path: str | Path) -> QuadratureSamples:
    """
    Read a sample file written by :func:`write_samples`.

    Raises:
        SampleFileError: With the offending line number for malformed headers, rows,
            or a row count that disagrees with ``S``
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise SampleFileError(path, 0, f"cannot read file ({e})") from e
    if not lines:
        raise SampleFileError(path, 1, "file is empty")

    header = _parse_header(path, lines[0])
    try:
        layout = Layout(header["layout"])
    except ValueError:
        raise SampleFileError(path, 1, f"unknown layout '{header['layout']}'") from None
    try:
        seed = int(header["seed"])
        expected = int(header["S"])
    except ValueError:
        raise SampleFileError(path, 1, "seed and S must be integers") from None

    rows: list[tuple[float, float]] = []
    for number, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text or text == "a,b":
            continue
        parts = text.split(",")
        if len(parts) != 2:
            raise SampleFileError(path, number, f"expected two columns, found {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise SampleFileError(path, number, f"non-numeric value in '{text}'") from None

    if len(rows) != expected:
        raise SampleFileError(path, len(lines), f"header declares S={expected}, found {len(rows)} rows")
    if not rows:
        raise SampleFileError(path, 1, "no samples")
    state = header["state"]
    return QuadratureSamples(layout, np.array(rows), seed, "" if state == "unknown" else state)
