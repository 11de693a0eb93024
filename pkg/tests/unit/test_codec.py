"""Unit tests for lumbound.io.codec."""

import io
import json
import math

import numpy as np
import pytest

from lumbound.core.distributions import DiscreteJoint, SampleSet
from lumbound.io.codec import (
    CodecError,
    CsvRowWriter,
    csv_text,
    discrete_joint_from_json,
    discrete_joint_rows,
    discrete_joint_to_json,
    dumps_document,
    dumps_payload,
    format_cell,
    load_json,
    read_discrete_joint,
    read_sample_set,
    sample_set_from_json,
    sample_set_rows,
    sample_set_to_json,
    to_jsonable,
)


@pytest.fixture
def dist():
    return DiscreteJoint(
        atoms=np.array([[0.0, 1.0], [0.5, -2.0]]),
        weights=np.array([0.25, 0.75]),
        etas=np.array([0.1, 0.9]),
    )


@pytest.fixture
def samples():
    return SampleSet(features=np.array([[1.5], [-0.1], [1.0 / 3.0]]), labels=np.array([1.0, -1.0, 1.0]))


class TestJsonValues:
    """Test suite for to_jsonable and the document wrappers."""

    def test_numpy_and_non_finite(self):
        """Test numpy scalars, arrays and non-finite floats."""
        value = {
            "a": np.float64(0.5),
            "b": np.int64(3),
            "c": np.array([1.0, math.inf]),
            "d": (math.nan, -math.inf),
            "e": np.bool_(True),
        }
        assert to_jsonable(value) == {"a": 0.5, "b": 3, "c": [1.0, "inf"], "d": ["nan", "-inf"], "e": True}
        assert isinstance(to_jsonable(np.int64(3)), int)

    def test_document_layout(self):
        """Test that documents carry metadata and a strict-JSON payload."""
        document = json.loads(dumps_document({"x": math.inf}, run_id="verify_abc"))
        assert set(document) == {"metadata", "payload"}
        assert document["metadata"]["run_id"] == "verify_abc"
        assert document["metadata"]["timestamp"].endswith("Z")
        assert document["payload"] == {"x": "inf"}

    def test_payload_is_deterministic(self):
        """Test that the payload text depends only on its content."""
        assert dumps_payload({"b": 1, "a": [0.5]}) == dumps_payload({"a": [0.5], "b": 1})

    def test_load_json_unwraps_documents(self, tmp_path):
        """Test that a CLI document is read back as its payload."""
        path = tmp_path / "doc.json"
        path.write_text(dumps_document({"k": 1}), encoding="utf-8")
        assert load_json(path) == {"k": 1}
        plain = tmp_path / "plain.json"
        plain.write_text('{"metadata": 1}', encoding="utf-8")
        assert load_json(plain) == {"metadata": 1}

    def test_load_json_errors(self, tmp_path):
        """Test malformed JSON and non-object documents."""
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        with pytest.raises(CodecError, match="invalid JSON"):
            load_json(bad)
        array = tmp_path / "array.json"
        array.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(CodecError, match="JSON object"):
            load_json(array)


class TestRecords:
    """Test suite for distribution and sample set records."""

    def test_distribution_json(self, dist):
        """Test the JSON record of a distribution and reading it back."""
        raw = discrete_joint_to_json(dist)
        assert raw["weights"] == [0.25, 0.75]
        restored = discrete_joint_from_json(json.loads(json.dumps(raw)))
        np.testing.assert_array_equal(restored.atoms, dist.atoms)
        np.testing.assert_array_equal(restored.etas, dist.etas)

    def test_distribution_json_errors(self):
        """Test missing keys, non-numeric data and invalid weights."""
        with pytest.raises(CodecError, match="missing 'etas'"):
            discrete_joint_from_json({"atoms": [0.0], "weights": [1.0]})
        with pytest.raises(CodecError, match="numeric"):
            discrete_joint_from_json({"atoms": [0.0], "weights": ["a"], "etas": [0.5]})
        with pytest.raises(CodecError, match="sum to 1"):
            discrete_joint_from_json({"atoms": [0.0], "weights": [0.5], "etas": [0.5]})

    def test_sample_set_json(self, samples):
        """Test that labels are written as integers."""
        raw = sample_set_to_json(samples)
        assert raw["labels"] == [1, -1, 1]
        restored = sample_set_from_json(raw)
        np.testing.assert_array_equal(restored.features, samples.features)

    def test_sample_set_json_errors(self):
        """Test invalid labels."""
        with pytest.raises(CodecError, match="invalid sample set"):
            sample_set_from_json({"features": [[0.0]], "labels": [0]})


class TestCsv:
    """Test suite for CSV writing and reading."""

    def test_format_cell(self):
        """Test booleans, floats with full precision and other values."""
        assert format_cell(True) == "true"
        assert format_cell(0.1) == "0.10000000000000001"
        assert float(format_cell(1.0 / 3.0)) == 1.0 / 3.0
        assert format_cell(math.inf) == "inf"
        assert format_cell(7) == "7"

    def test_row_writer(self):
        """Test header and column order."""
        stream = io.StringIO()
        writer = CsvRowWriter(stream, ["b", "a"])
        writer.write({"a": 1, "b": 0.5, "ignored": 3})
        assert stream.getvalue() == "b,a\n0.5,1\n"

    def test_csv_text_missing_column(self):
        """Test that a row lacking a declared column is an error."""
        with pytest.raises(KeyError):
            csv_text([{"a": 1}], ["a", "b"])

    def test_distribution_csv(self, dist, tmp_path):
        """Test the atom table and reading it back exactly."""
        columns, rows = discrete_joint_rows(dist)
        assert columns == ["x0", "x1", "weight", "eta"]
        path = tmp_path / "dist.csv"
        path.write_text(csv_text(rows, columns), encoding="utf-8")
        restored = read_discrete_joint(path)
        np.testing.assert_array_equal(restored.atoms, dist.atoms)
        np.testing.assert_array_equal(restored.weights, dist.weights)

    def test_sample_set_csv(self, samples, tmp_path):
        """Test the sample table; 17 digits recover every double."""
        columns, rows = sample_set_rows(samples)
        assert columns == ["x0", "label"]
        path = tmp_path / "samples.csv"
        path.write_text(csv_text(rows, columns), encoding="utf-8")
        restored = read_sample_set(path)
        np.testing.assert_array_equal(restored.features, samples.features)
        np.testing.assert_array_equal(restored.labels, samples.labels)

    def test_suffix_selects_json(self, samples, tmp_path):
        """Test that non-.csv files are read as JSON."""
        path = tmp_path / "samples.json"
        path.write_text(dumps_document(sample_set_to_json(samples)), encoding="utf-8")
        assert read_sample_set(path).n_samples == 3

    def test_nested_documents_are_read(self, dist, samples, tmp_path):
        """Test that files written by the sample command, which nest the record under a key, read back."""
        samples_path = tmp_path / "samples.json"
        samples_path.write_text(dumps_document({"samples": sample_set_to_json(samples)}), encoding="utf-8")
        np.testing.assert_array_equal(read_sample_set(samples_path).labels, samples.labels)
        dist_path = tmp_path / "dist.json"
        dist_path.write_text(dumps_document({"distribution": discrete_joint_to_json(dist)}), encoding="utf-8")
        np.testing.assert_array_equal(read_discrete_joint(dist_path).weights, dist.weights)

    @pytest.mark.parametrize(
        "text, match",
        [
            ("", "empty"),
            ("x0,label\n", "no data rows"),
            ("x0,label\n1.0,one\n", "non-numeric"),
            ("x0,y,label\n1.0,2.0,1\n", "expected columns"),
            ("label\n1\n", "expected columns"),
            ("x0,label\n1.0,1,2\n", "header has 2"),
        ],
    )
    def test_malformed_sample_csv(self, tmp_path, text, match):
        """Test the error for each kind of malformed table."""
        path = tmp_path / "bad.csv"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(CodecError, match=match):
            read_sample_set(path)

    def test_invalid_distribution_csv(self, tmp_path):
        """Test that a table with an out-of-range eta is refused."""
        path = tmp_path / "bad.csv"
        path.write_text("x0,weight,eta\n0.0,1.0,1.5\n", encoding="utf-8")
        with pytest.raises(CodecError, match="invalid distribution"):
            read_discrete_joint(path)
