"""Unit tests for lumbound.utils (ids, time, seeding, validation)."""

import re
import time
from datetime import datetime

import numpy as np
import pytest

from lumbound.utils import Issue, has_errors, make_rng, new_run_id, now_rfc3339, time_block, trial_rng
from lumbound.utils.validation import check_count, check_fraction, check_positive


class TestRunIds:
    """Test suite for new_run_id."""

    def test_plain_id(self):
        """Test a bare 32-character hex id."""
        assert re.fullmatch(r"[0-9a-f]{32}", new_run_id())

    def test_prefixed_id(self):
        """Test the prefix separator and that an empty prefix is ignored."""
        run_id = new_run_id("verify")
        assert run_id.startswith("verify_")
        assert len(run_id) == len("verify_") + 32
        assert "_" not in new_run_id("")

    def test_unique(self):
        """Test that ids do not repeat."""
        assert len({new_run_id() for _ in range(100)}) == 100


class TestTime:
    """Test suite for now_rfc3339 and time_block."""

    def test_rfc3339_utc(self):
        """Test the Z suffix and that the string parses back."""
        stamp = now_rfc3339()
        assert stamp.endswith("Z")
        assert "+00:00" not in stamp
        parsed = datetime.fromisoformat(stamp.replace("Z", "+00:00"))
        assert parsed.utcoffset().total_seconds() == 0

    def test_time_block_measures(self):
        """Test that the elapsed time is filled in on exit."""
        with time_block() as elapsed:
            assert elapsed.seconds == 0.0
            time.sleep(0.01)
        assert elapsed.seconds >= 0.005

    def test_time_block_on_error(self):
        """Test that the elapsed time is recorded even when the block raises."""
        with pytest.raises(RuntimeError):
            with time_block() as elapsed:
                raise RuntimeError("boom")
        assert elapsed.seconds >= 0.0


class TestSeeding:
    """Test suite for trial_rng and make_rng."""

    def test_trial_streams_reproduce(self):
        """Test that (seed, index) fixes the stream."""
        a = trial_rng(11, 3).random(5)
        b = trial_rng(11, 3).random(5)
        np.testing.assert_array_equal(a, b)

    def test_trial_streams_differ(self):
        """Test that neighbouring indices and seeds give different streams."""
        base = trial_rng(11, 3).random(5)
        assert not np.array_equal(base, trial_rng(11, 4).random(5))
        assert not np.array_equal(base, trial_rng(12, 3).random(5))

    def test_order_independent(self):
        """Test that drawing trial 1 first does not change trial 0."""
        first = trial_rng(5, 0).random(3)
        trial_rng(5, 1).random(100)
        np.testing.assert_array_equal(first, trial_rng(5, 0).random(3))

    def test_negative_seeds(self):
        """Test that negative seeds and indices are refused."""
        with pytest.raises(ValueError):
            trial_rng(-1, 0)
        with pytest.raises(ValueError):
            trial_rng(0, -1)
        with pytest.raises(ValueError):
            make_rng(-5)

    def test_make_rng(self):
        """Test that make_rng matches numpy's default generator."""
        np.testing.assert_array_equal(make_rng(4).random(3), np.random.default_rng(4).random(3))


class TestValidation:
    """Test suite for Issue and the field checks."""

    def test_issue(self):
        """Test severity helpers and the rendered form."""
        issue = Issue("error", "must be > 0, got 0", "train.grad_tol")
        assert issue.is_error()
        assert not issue.is_warning()
        assert str(issue) == "error: train.grad_tol: must be > 0, got 0"
        assert Issue("warning", "slow", "verify.trials").is_warning()

    def test_has_errors(self):
        """Test that warnings alone are not errors."""
        assert not has_errors([])
        assert not has_errors([Issue("warning", "w", "x")])
        assert has_errors([Issue("warning", "w", "x"), Issue("error", "e", "y")])

    @pytest.mark.parametrize("value", [1, 0.5, 1e300])
    def test_check_positive_accepts(self, value):
        """Test accepted positive values."""
        assert check_positive(value, "x") is None

    @pytest.mark.parametrize("value", [0, -1.0, float("nan"), "1", True, None])
    def test_check_positive_rejects(self, value):
        """Test rejected values, including strings and booleans."""
        issue = check_positive(value, "x")
        assert issue is not None
        assert issue.location == "x"

    def test_check_positive_allow_zero(self):
        """Test the nonnegative variant."""
        assert check_positive(0.0, "x", allow_zero=True) is None
        assert ">= 0" in check_positive(-0.1, "x", allow_zero=True).message

    def test_check_count(self):
        """Test integers, the minimum and non-integers."""
        assert check_count(3, "n") is None
        assert check_count(0, "n", minimum=0) is None
        assert "must be >= 1" in check_count(0, "n").message
        assert "integer" in check_count(2.0, "n").message
        assert check_count(False, "n") is not None

    @pytest.mark.parametrize("value, ok", [(0.5, True), (0.0, False), (1.0, False), ("0.5", False)])
    def test_check_fraction(self, value, ok):
        """Test the open unit interval."""
        assert (check_fraction(value, "f") is None) is ok
