"""Tests for the single-beam reference schemes and their ordering."""

import numpy as np
import pytest
from assertpy import assert_that

from mimowpt.baselines import (
    BaselineKind,
    BaselinePolicy,
    energy_beamforming_policy,
    single_beam_policy,
)
from mimowpt.channel import generate_rician
from mimowpt.exceptions import DomainError
from mimowpt.rectenna import REFERENCE_PARAMS, harvested_power, saturation_power
from mimowpt.strategy import build_grid_table, grid_minmax_policy
from mimowpt.verify import PolicyCheck


class TestEnergyBeamforming:
    """Dominant eigenvector of G^H G."""

    def test_single_rectenna_is_mrt(self, channel_miso):
        p_x = 0.4
        policy = energy_beamforming_policy(channel_miso, REFERENCE_PARAMS, p_x)
        g = channel_miso.g[0]
        alignment = abs(np.vdot(g.conj(), policy.w)) / (np.linalg.norm(g) * np.linalg.norm(policy.w))
        assert_that(float(alignment)).is_close_to(1.0, 1e-12)
        assert_that(policy.kind).is_equal_to(BaselineKind.ENERGY_BEAMFORMING)

    def test_budget_respected(self, channel_2x2):
        policy = energy_beamforming_policy(channel_2x2, REFERENCE_PARAMS, 0.7)
        assert_that(float(np.vdot(policy.w, policy.w).real)).is_close_to(0.7, 1e-12)

    def test_siso_saturates(self, channel_siso):
        policy = energy_beamforming_policy(channel_siso, REFERENCE_PARAMS, 1e3)
        assert_that(policy.avg_phi).is_equal_to(saturation_power(REFERENCE_PARAMS))

    @pytest.mark.parametrize("p_x", [0.0, -1.0, float("nan")])
    def test_invalid_budget(self, channel_2x2, p_x):
        with pytest.raises(DomainError):
            energy_beamforming_policy(channel_2x2, REFERENCE_PARAMS, p_x)


class TestSingleBeam:
    """Phi(p_x)-maximizing beam without time sharing."""

    def test_single_antenna_matches_energy_beam(self, channel_siso, fast_settings):
        p_x = 0.3
        single = single_beam_policy(channel_siso, REFERENCE_PARAMS, p_x, settings=fast_settings)
        energy = energy_beamforming_policy(channel_siso, REFERENCE_PARAMS, p_x)
        closed = float(harvested_power(REFERENCE_PARAMS, p_x * abs(channel_siso.g[0, 0]) ** 2))
        assert_that(single.avg_phi).is_close_to(closed, 1e-12 * closed)
        assert_that(energy.avg_phi).is_close_to(closed, 1e-12 * closed)

    def test_huge_budget_saturates_all(self, channel_2x2, fast_settings):
        policy = single_beam_policy(channel_2x2, REFERENCE_PARAMS, 1e3, settings=fast_settings)
        assert_that(policy.k_star).is_equal_to(2)
        assert_that(policy.avg_phi).is_equal_to(2.0 * saturation_power(REFERENCE_PARAMS))

    def test_not_below_energy_beam(self, channel_2x2, fast_settings):
        for p_x in (0.2, 0.8, 1.6):
            single = single_beam_policy(channel_2x2, REFERENCE_PARAMS, p_x, settings=fast_settings)
            energy = energy_beamforming_policy(channel_2x2, REFERENCE_PARAMS, p_x)
            assert_that(single.avg_phi).is_greater_than_or_equal_to(energy.avg_phi)


class TestBaselinePolicy:
    """Record helpers."""

    def test_power_must_match_budget(self):
        with pytest.raises(DomainError):
            BaselinePolicy(w=np.array([1.0, 0.0]), avg_phi=0.0, kind=BaselineKind.SINGLE_BEAM, p_x=2.0)

    def test_as_two_point(self, channel_2x2):
        baseline = energy_beamforming_policy(channel_2x2, REFERENCE_PARAMS, 0.5)
        policy = baseline.as_two_point()
        assert_that(policy.degenerate).is_true()
        assert_that(policy.beta).is_equal_to(1.0)
        PolicyCheck(policy, channel_2x2, REFERENCE_PARAMS).assert_all()


@pytest.mark.slow
class TestDominance:
    """Two-point policy >= single beam >= energy beamforming on grid budgets."""

    def test_chain_on_grid_points(self, channel_2x2, fast_settings):
        table = build_grid_table(channel_2x2, REFERENCE_PARAMS, 0.1, 20, settings=fast_settings)
        for m in (2, 5, 9, 14):
            p_x = float(table.rho[m])
            proposed = grid_minmax_policy(table, p_x)
            single = single_beam_policy(channel_2x2, REFERENCE_PARAMS, p_x, settings=fast_settings)
            energy = energy_beamforming_policy(channel_2x2, REFERENCE_PARAMS, p_x)
            (
                PolicyCheck(proposed, channel_2x2, REFERENCE_PARAMS)
                .assert_all()
                .assert_dominates(single.avg_phi, tol=1e-12, label="single_beam")
                .assert_dominates(energy.avg_phi, tol=1e-12, label="energy_beamforming")
            )

    @pytest.mark.parametrize("seed", range(20))
    def test_chain_over_realizations(self, fast_settings, seed):
        g = generate_rician(seed=seed, n_t=2, n_e=2, distance=2.0, k_factor=1.0)
        table = build_grid_table(g, REFERENCE_PARAMS, 0.1, 20, settings=fast_settings)
        for m in (4, 10, 17):
            p_x = float(table.rho[m])
            proposed = grid_minmax_policy(table, p_x)
            single = single_beam_policy(g, REFERENCE_PARAMS, p_x, settings=fast_settings)
            energy = energy_beamforming_policy(g, REFERENCE_PARAMS, p_x)
            assert_that(proposed.avg_phi).is_greater_than_or_equal_to(single.avg_phi - 1e-9)
            assert_that(single.avg_phi).is_greater_than_or_equal_to(energy.avg_phi - 1e-9)
