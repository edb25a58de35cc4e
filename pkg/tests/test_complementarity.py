"""Slack records, pairing theorems, convexity and mixed-state checks,
and the binned frontier scan."""
import math

import numpy as np
import pytest

from tricorr import complementarity as comp
from tricorr import entanglement, states
from tricorr.errors import ParameterError, UnsupportedClosedFormError

GHZ = states.mbv_state(0.0)


@pytest.fixture(scope="module")
def small_curve():
    return comp.mbv_dms_curve(points=41)


def test_slack_anchor_values():
    e0 = np.zeros(8, dtype=complex)
    e0[0] = 1.0
    rec = comp.slack(e0, state_id="product")
    assert abs(rec.tau_slack - 1.0) < 1e-12
    assert abs(rec.ggm_slack - 1.0) < 1e-12
    assert rec.state_id == "product"

    rec = comp.slack(GHZ)
    assert abs(rec.tau_slack) < 1e-10
    assert abs(rec.ggm_slack) < 1e-10


def test_frontier_family_saturates_both_slacks():
    for m in (0.25, 0.5, 0.75):
        rec = comp.slack(states.mbv_state(m))
        assert abs(rec.tau_slack) < 1e-10
        assert abs(rec.ggm_slack) < 1e-10


def test_slacks_nonnegative_on_haar_states():
    for psi in states.haar_block(43, 0, 300):
        rec = comp.slack(psi)
        assert rec.tau_slack > -1e-9
        assert rec.ggm_slack > -1e-9


def test_partner_m_endpoints_and_route_agreement():
    assert comp.partner_m(1.0) == 0.0
    assert comp.partner_m(0.0) == 1.0
    assert comp.partner_m_quadratic(1.0) == 0.0
    for tau in np.linspace(0.0, 1.0, 201):
        a = comp.partner_m(float(tau))
        b = comp.partner_m_quadratic(float(tau))
        assert abs(a - b) < 1e-9
        # the returned m must reproduce the requested tangle
        back = entanglement.tangle_closed(states.MbvParams(a))
        assert abs(back - tau) < 1e-12


def test_tangle_pairing_theorem():
    at_ghz = states.GhzParams(math.pi / 2, math.pi / 2, math.pi / 2, math.pi / 4)
    assert comp.theorem_tangle_pair(at_ghz)
    for p in states.ghz_draws(47, 0, 300):
        assert comp.theorem_tangle_pair(p)
    with pytest.raises(UnsupportedClosedFormError):
        comp.theorem_tangle_pair(states.GhzParams(1.0, 1.0, 1.0, 0.5, phi=0.5))


def test_w_max_theorem():
    assert comp.theorem_w_max(states.WParams(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0))
    for p in states.w_draws(53, 0, 300):
        assert comp.theorem_w_max(p)


def test_split_lemma_on_anchor_states():
    # no violating pair: vacuously true even though all marginals tie
    assert comp.lemma_split_check(GHZ) is True
    # frontier states violate on AC, and the split is B:AC
    assert comp.lemma_split_check(states.mbv_state(0.5)) is True
    assert comp.lemma_split_check(states.mbv_state(1.0)) is True


def test_split_lemma_on_haar_states():
    outcomes = [comp.lemma_split_check(psi) for psi in states.haar_block(59, 0, 200)]
    assert all(o is True for o in outcomes)


def test_convexity_single_component_is_equality():
    psi = states.haar_pure(67, 0)
    assert comp.convexity_chain_check([(1.0, psi)])


def test_convexity_rejects_bad_weights():
    psi = states.haar_pure(67, 1)
    with pytest.raises(ParameterError):
        comp.convexity_chain_check([(0.6, psi), (0.6, psi)])
    with pytest.raises(ParameterError):
        comp.convexity_chain_check([(-0.1, psi), (1.1, psi)])


def test_convexity_on_sampled_mixtures():
    assert comp.convexity_chain_check([(0.5, GHZ), (0.5, states.mbv_state(1.0))])
    rng = np.random.default_rng(5)
    for i in range(20):
        k = int(rng.integers(2, 5))
        block = states.haar_block(71, 8 * i, k)
        w = rng.dirichlet(np.ones(k))
        assert comp.convexity_chain_check(list(zip(w.tolist(), block)))


def test_mixed_claim_pure_projectors():
    rec = comp.mixed_claim_check(states.density(GHZ))
    assert abs(rec.tau_slack) < 1e-9
    assert math.isnan(rec.ggm_slack)
    psi = states.haar_pure(73, 0)
    rec = comp.mixed_claim_check(states.density(psi))
    pure = comp.slack(psi)
    # the two sides use different tangle routes, so only route-level agreement
    assert abs(rec.tau_slack - pure.tau_slack) < 5e-7


def test_mixed_claim_maximally_mixed():
    rec = comp.mixed_claim_check(np.eye(8, dtype=complex) / 8.0)
    assert abs(rec.tau_slack - 1.0) < 1e-12


def test_mixed_claim_on_induced_states():
    for i, rank in enumerate((2, 4, 8)):
        rec = comp.mixed_claim_check(states.induced_mixed(79, rank, index=i), trials=128)
        assert rec.tau_slack >= -1e-6


def test_score_curve_shape_and_cache(small_curve):
    assert small_curve.shape == (41, 2)
    d, b = small_curve[:, 0], small_curve[:, 1]
    assert (np.diff(d) >= -1e-12).all()
    assert abs(d[0]) < 1e-9 and abs(b[0] - 1.0) < 1e-12
    assert abs(d[-1] - 1.0) < 1e-9 and abs(b[-1]) < 1e-12
    assert comp.mbv_dms_curve(points=41) is small_curve


def test_score_boundary_interpolation():
    curve = np.array([[0.0, 1.0], [0.5, 0.75], [1.0, 0.0]])
    vals = comp.dms_boundary(np.array([-0.5, 0.0, 0.25, 0.75, 1.0, 1.5]), curve)
    np.testing.assert_allclose(vals, [1.0, 1.0, 0.875, 0.375, 0.0, 0.0], atol=1e-15)


def test_score_bin_slack_uses_steepest_overlapping_segment():
    curve = np.array([[0.0, 1.0], [0.5, 0.75], [1.0, 0.0]])
    # slopes are 0.5 on the first segment and 1.5 on the second
    assert abs(comp._dms_bin_slack(curve, 0.0, 0.25) - 0.125) < 1e-15
    assert abs(comp._dms_bin_slack(curve, 0.6, 0.85) - 0.375) < 1e-15
    assert abs(comp._dms_bin_slack(curve, 0.4, 0.6) - 0.3) < 1e-15
    assert comp._dms_bin_slack(curve, 2.0, 2.5) == 0.0


def test_frontier_scan_rejects_bad_arguments():
    with pytest.raises(ParameterError):
        comp.frontier_scan(100, 1, "bell", 10)
    with pytest.raises(ParameterError):
        comp.frontier_scan(5, 1, "tangle", 10)


def test_frontier_scan_single_bin_counts_everything():
    out = comp.frontier_scan(100, 3, "tangle", 1)
    assert len(out) == 1
    assert out[0].count == 100
    assert out[0].measure_lo == 0.0 and out[0].measure_hi == 1.0
    assert abs(out[0].bin_slack - 1.0) < 1e-15


def test_frontier_scan_tangle_small_run():
    bins = comp.frontier_scan(2000, 7, "tangle", 4)
    assert sum(b.count for b in bins) == 2000
    for b in bins:
        if b.count:
            assert b.max_b <= b.mbv_b + b.bin_slack + 1e-9
        else:
            assert math.isnan(b.max_b)
        assert abs(b.bin_slack - 0.25) < 1e-15


def test_frontier_scan_ggm_bin_slack_formula():
    bins = comp.frontier_scan(500, 7, "ggm", 5)
    width = 0.1
    for i, b in enumerate(bins):
        lo = i * width
        assert abs(b.measure_lo - lo) < 1e-12
        assert abs(b.bin_slack - 8.0 * (0.5 - lo) * width) < 1e-12
        assert abs(b.mbv_b - 4.0 * (0.5 - (lo + width / 2.0)) ** 2) < 1e-12


def test_frontier_scan_worker_count_does_not_change_bins():
    a = comp.frontier_scan(3000, 11, "tangle", 8, chunk=512, workers=1)
    b = comp.frontier_scan(3000, 11, "tangle", 8, chunk=512, workers=3)
    for x, y in zip(a, b):
        assert x == y


def test_frontier_chunks_are_counter_addressed():
    whole = comp.frontier_chunk(13, 0, 100, "tangle", "measure-first")
    first = comp.frontier_chunk(13, 0, 40, "tangle", "measure-first")
    rest = comp.frontier_chunk(13, 40, 60, "tangle", "measure-first")
    np.testing.assert_array_equal(whole[0], np.concatenate([first[0], rest[0]]))
    np.testing.assert_array_equal(whole[1], np.concatenate([first[1], rest[1]]))
