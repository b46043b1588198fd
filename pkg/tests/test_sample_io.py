"""
Tests for sample CSV files.
"""

import numpy as np
import pytest

from cvwitness.base import SampleFileError
from cvwitness.sampling import Layout, QuadratureSamples, read_samples, sample_heterodyne, write_samples


def test_round_trip_is_bit_identical(tmp_path, split_phssv):
    samples = sample_heterodyne(split_phssv, 1, 500, 12, descriptor="split-phssv:r=1,eta=1")
    path = tmp_path / "het2.csv"
    write_samples(samples, path)
    restored = read_samples(path)
    assert restored.layout is Layout.HET2
    assert restored.seed == 12
    assert restored.state_descriptor == "split-phssv:r=1,eta=1"
    np.testing.assert_array_equal(restored.data, samples.data)


def test_header_format(tmp_path):
    path = tmp_path / "xx.csv"
    write_samples(QuadratureSamples(Layout.XX, np.array([[0.25, -1.5]]), 3), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# state=unknown layout=xx seed=3 S=1"
    assert lines[1] == "a,b"
    assert lines[2] == "0.25,-1.5"
    assert read_samples(path).state_descriptor == ""


def test_large_body_is_one_row_per_sample(tmp_path):
    data = np.random.default_rng(5).normal(size=(200_000, 2))
    path = tmp_path / "pp.csv"
    write_samples(QuadratureSamples(Layout.PP, data, 5), path)
    body = np.loadtxt(path, delimiter=",", skiprows=2)
    assert body.shape == data.shape
    np.testing.assert_array_equal(body, data)
    np.testing.assert_array_equal(read_samples(path).data, data)


@pytest.mark.parametrize(
    ("text", "line", "reason"),
    [
        ("a,b\n1,2\n", 1, "missing"),
        ("# state=vacuum layout=xx seed=1\na,b\n1,2\n", 1, "missing S"),
        ("# state=vacuum layout=qq seed=1 S=1\na,b\n1,2\n", 1, "unknown layout"),
        ("# state=vacuum layout=xx seed=one S=1\na,b\n1,2\n", 1, "integers"),
        ("# state=vacuum layout=pp seed=1 S=2\na,b\n1,2\n3\n", 4, "two columns"),
        ("# state=vacuum layout=pp seed=1 S=2\na,b\n1,2\n3,x\n", 4, "non-numeric"),
        ("# state=vacuum layout=pp seed=1 S=3\na,b\n1,2\n3,4\n", 4, "declares S=3"),
    ],
)
def test_malformed_files(tmp_path, text, line, reason):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(SampleFileError, match=reason) as info:
        read_samples(path)
    assert info.value.line == line
    assert str(path) in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(SampleFileError, match="cannot read") as info:
        read_samples(tmp_path / "absent.csv")
    assert info.value.line == 0
