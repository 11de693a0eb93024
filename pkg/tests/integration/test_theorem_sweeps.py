"""Full-size randomized sweeps of the comparison bounds.

These run ten thousand trials per regime and are deselected by default; run
them with ``pytest -m stress``.
"""

from __future__ import annotations

import pytest

from lumbound.core.params import INF, ExtendedParam, LumParams
from lumbound.verification.verifier import (
    NoiseSweepConfig,
    SweepConfig,
    noise_trial_sweep,
    random_trial_sweep,
    tightness_scan,
)

pytestmark = [pytest.mark.integration, pytest.mark.stress]

REGIME_GRIDS = {
    "p_positive": [LumParams.of(p, q) for p in (0.1, 0.5, 1, 2, 10) for q in (0.5, 1, 2, "inf")],
    "p_zero_finite_q": [LumParams.of(0, q) for q in (0.5, 1, 2)],
    "p_zero_q_inf": [LumParams.of(0, "inf")],
    "hinge": [LumParams.hinge()],
}

REGIME_MEMBERS = [members[0] for members in REGIME_GRIDS.values()]


class TestGeneralSweep:
    @pytest.mark.parametrize("regime", list(REGIME_GRIDS))
    def test_ten_thousand_trials_per_regime(self, regime, test_seed):
        """Test that no trial violates the general bound across a regime's (p, q) grid."""
        members = REGIME_GRIDS[regime]
        config = SweepConfig(n_trials=10_000, params_list=members, workers=4)
        report = random_trial_sweep(config, seed=test_seed)
        assert report.trials == 10_000
        assert report.violations == 0
        assert report.min_slack >= -1e-10
        assert {label for label, _ in report.bounds} == {str(p) for p in members}

    def test_snapped_etas(self, test_seed):
        """Test a sweep where every eta sits on 0, 1/2 or 1."""
        config = SweepConfig(n_trials=2_000, params_list=REGIME_MEMBERS, snap_probability=1.0)
        assert random_trial_sweep(config, seed=test_seed + 1).violations == 0

    @pytest.mark.parametrize("p", [1e-3, 1e3])
    def test_extreme_p(self, p, test_seed):
        """Test members close to the square-root and the hinge regimes."""
        config = SweepConfig(n_trials=2_000, params_list=[LumParams.of(p, 1)])
        assert random_trial_sweep(config, seed=test_seed).violations == 0

    def test_large_q(self, test_seed):
        """Test q large enough to use the log-domain tail."""
        config = SweepConfig(n_trials=2_000, params_list=[LumParams.of(0, 200), LumParams.of(1, 200)])
        assert random_trial_sweep(config, seed=test_seed).violations == 0


class TestNoiseSweep:
    def test_ten_thousand_trials(self, test_seed):
        """Test the noise-condition bound across the default (tau, c_tau, q) grid."""
        config = NoiseSweepConfig(trials_per_pair=1_700, workers=4)
        report = noise_trial_sweep(config, seed=test_seed)
        assert report.trials == 1_700 * 6
        assert report.violations == 0

    @pytest.mark.parametrize("q", [ExtendedParam.finite(0.5), ExtendedParam.finite(3.0), INF])
    def test_small_tau(self, q, test_seed):
        """Test a nearly unrestricted noise exponent."""
        config = NoiseSweepConfig(trials_per_pair=500, tau_list=(0.1,), c_tau_list=(1.0,), q_list=(q,))
        assert noise_trial_sweep(config, seed=test_seed).violations == 0


class TestTightnessScan:
    @pytest.mark.parametrize("params", REGIME_MEMBERS, ids=str)
    def test_fine_scan(self, params):
        """Test a fine single-atom scan never finds a ratio above one."""
        assert tightness_scan(params, 2_000).sup_ratio <= 1.0 + 1e-9
