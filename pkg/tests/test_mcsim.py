import math

import numpy as np
import pytest
from scipy.special import ndtr

from swipt_daf.analytic import aber_lc_exact, aber_th_exact
from swipt_daf.mcsim import (EhMode, McConfig, McResult, _detect_block,
                             _link_budget, diff_encode, raws_per_frame,
                             run_monte_carlo, sample_two_hop_gains,
                             simulate_frame, _frame_stream)
from swipt_daf.model import Scheme, ValidationError, derive_constants, reference_params


# ---------------------------------------------------------------------------
# differential encoding
# ---------------------------------------------------------------------------

def test_diff_encode_examples():
    np.testing.assert_array_equal(diff_encode([1, 1]), [1, 1, 1])
    np.testing.assert_array_equal(diff_encode([-1, 1, -1]), [1, -1, -1, 1])


def test_diff_encode_round_trip():
    rng = np.random.default_rng(0)
    bits = np.where(rng.random(63) < 0.5, 1.0, -1.0)
    s = diff_encode(bits)
    np.testing.assert_array_equal(s[1:] * s[:-1], bits)
    assert np.all(np.abs(s) == 1.0)


def test_diff_encode_rejects_bad_symbols():
    with pytest.raises(ValidationError):
        diff_encode([1, 0, -1])


# ---------------------------------------------------------------------------
# configuration validation
# ---------------------------------------------------------------------------

def test_mc_config_validation(baseline_params):
    with pytest.raises(ValidationError, match="frames"):
        McConfig(params=baseline_params, frames=0)
    with pytest.raises(ValidationError, match="symbols_per_frame"):
        McConfig(params=baseline_params, symbols_per_frame=1)
    with pytest.raises(ValidationError, match="seed"):
        McConfig(params=baseline_params, seed=-1)
    with pytest.raises(ValidationError, match="min_errors"):
        McConfig(params=baseline_params, min_errors=-2)


def test_raws_per_frame_layout():
    assert raws_per_frame(64) % 4 == 0
    assert raws_per_frame(64) >= 9 * 64 + 5
    assert raws_per_frame(2) == 24


# ---------------------------------------------------------------------------
# determinism and substream layout
# ---------------------------------------------------------------------------

def test_seed_determinism(baseline_params):
    cfg = McConfig(params=baseline_params, frames=4000, seed=123)
    assert run_monte_carlo(cfg) == run_monte_carlo(cfg)


def test_block_size_independence(baseline_params):
    cfg = McConfig(params=baseline_params, frames=5000, seed=9)
    r1 = run_monte_carlo(cfg, block_frames=4096)
    r2 = run_monte_carlo(cfg, block_frames=333)
    r3 = run_monte_carlo(cfg, block_frames=5000)
    assert r1 == r2 == r3


def test_simulate_frame_matches_run(baseline_params):
    cfg = McConfig(params=baseline_params, frames=16, seed=77)
    total = sum(simulate_frame(cfg, _frame_stream(77, f, 64)) for f in range(16))
    r = run_monte_carlo(cfg)
    assert r.errors == total


def test_early_stop_frame_granular(baseline_params):
    cfg = McConfig(params=baseline_params, frames=100_000, seed=5, min_errors=200)
    r1 = run_monte_carlo(cfg, block_frames=4096)
    r2 = run_monte_carlo(cfg, block_frames=100)
    assert r1 == r2
    assert r1.errors >= 200
    assert r1.bits < 100_000 * 63  # stopped early


def test_channel_sampler_matches_run_draws(baseline_params):
    # the sampler must replicate the first draws of each frame substream
    x, y = sample_two_hop_gains(baseline_params, 5, seed=31)
    for f in range(5):
        ph = _frame_stream(31, f, 64)
        raws = ph.random_raw(raws_per_frame(64))[:6]
        from swipt_daf.mcsim import _uniforms
        from scipy.special import ndtri
        ch = ndtri(_uniforms(np.asarray(raws, dtype=np.uint64)))
        assert x[f] == pytest.approx(0.5 * (ch[2] ** 2 + ch[3] ** 2), rel=1e-15)
        assert y[f] == pytest.approx(0.5 * (ch[4] ** 2 + ch[5] ** 2), rel=1e-15)


def test_channel_gains_are_unit_exponential(baseline_params):
    x, y = sample_two_hop_gains(baseline_params, 40_000, seed=17)
    for g in (x, y):
        assert g.mean() == pytest.approx(1.0, abs=0.02)
        assert np.mean(g > 1.0) == pytest.approx(math.exp(-1.0), abs=0.01)


# ---------------------------------------------------------------------------
# physics checks
# ---------------------------------------------------------------------------

def test_noiseless_limit_gives_zero_errors(baseline_params):
    # validation requires strictly positive totals, so use vanishing noise
    params = baseline_params.replace(**{k: 1e-30 for k in
                                        ("n0a", "n0c", "n1a", "n1c", "n2a", "n2c")})
    for scheme in Scheme:
        cfg = McConfig(params=params, scheme=scheme, frames=200, seed=2)
        assert run_monte_carlo(cfg).errors == 0


def test_zero_split_makes_two_hop_pure_noise(baseline_params):
    cfg = McConfig(params=baseline_params.replace(theta=0.0), scheme=Scheme.TH,
                   frames=20_000, seed=3)
    r = run_monte_carlo(cfg)
    assert abs(r.ber - 0.5) < 0.01


def test_direct_only_matches_closed_form(baseline_params):
    # L = 2 makes detected bits independent, so the binomial interval is exact
    cfg = McConfig(params=baseline_params, scheme=Scheme.DIRECT_ONLY,
                   frames=2_000_000, symbols_per_frame=2, seed=101)
    r = run_monte_carlo(cfg)
    assert abs(r.ber - 1.0 / 22.0) <= 3.0 * r.ci95_halfwidth


def test_th_matches_exact_analysis(baseline_params, baseline_constants):
    cfg = McConfig(params=baseline_params, scheme=Scheme.TH,
                   frames=1_000_000, symbols_per_frame=2, seed=55)
    r = run_monte_carlo(cfg)
    oracle = aber_th_exact(baseline_constants).value
    assert abs(r.ber - oracle) <= 3.0 * r.ci95_halfwidth


def test_lc_with_instantaneous_weights_matches_kernel(baseline_params,
                                                      baseline_constants):
    """The ideal-weight error kernel is exact when the combiner uses the true
    conditional two-hop noise variance; the protocol itself uses the average
    (see test below), which the kernel only approximates."""
    cfg = McConfig(params=baseline_params, scheme=Scheme.LC,
                   frames=1_500_000, symbols_per_frame=2, seed=61)
    r = run_monte_carlo(cfg, _lc_weighting="instantaneous")
    oracle = aber_lc_exact(baseline_constants).value
    assert abs(r.ber - oracle) <= 3.0 * r.ci95_halfwidth


def test_lc_average_weighting_close_to_kernel(baseline_params,
                                              baseline_constants):
    # the deployed combiner (average noise weight) runs a few percent from
    # the ideal-weight kernel at moderate power; band it rather than equate it
    cfg = McConfig(params=baseline_params, scheme=Scheme.LC,
                   frames=400_000, symbols_per_frame=2, seed=62)
    r = run_monte_carlo(cfg)
    oracle = aber_lc_exact(baseline_constants).value
    assert abs(r.ber - oracle) <= 0.10 * oracle


def test_aeh_equals_ieh_on_unit_gain_channel(baseline_params):
    # with |h1|^2 = 1 the two gain rules coincide frame by frame
    L = 8
    u = np.full((1, 9 * L + 5), 0.5)
    u[0, 2] = u[0, 3] = ndtr(1.0)  # h1 = (1 + 1j)/sqrt(2), |h1|^2 = 1
    rng = np.random.default_rng(4)
    u[0, 6:] = rng.random(9 * L + 5 - 6)
    u[0, 0:2] = rng.random(2)
    u[0, 4:6] = rng.random(2)
    lb_ieh = _link_budget(baseline_params, EhMode.IEH, 1.0)
    lb_aeh = _link_budget(baseline_params, EhMode.AEH, 1.0)
    e1 = _detect_block(u, L, lb_ieh, baseline_params.n1a, baseline_params.n1c)
    e2 = _detect_block(u, L, lb_aeh, baseline_params.n1a, baseline_params.n1c)
    np.testing.assert_array_equal(e1, e2)


@pytest.mark.parametrize("p0", [10.0, 31.622776601683793])
def test_baselines_beat_ieh_at_moderate_power(baseline_params, p0):
    # decisive ordering region; at P0 <= ~5 dB AEH measurably inverts (the
    # instantaneous-harvest channel behaves like a triple-Rayleigh cascade
    # only once power is high enough for the harvest gain to dominate)
    params = baseline_params.replace(p0=p0)
    results = {}
    for mode in EhMode:
        cfg = McConfig(params=params, scheme=Scheme.TH, eh_mode=mode,
                       frames=60_000, seed=19)
        results[mode] = run_monte_carlo(cfg)
    assert results[EhMode.AEH].ber < results[EhMode.IEH].ber
    assert results[EhMode.CON].ber < results[EhMode.IEH].ber


def test_con_relay_power_factor(baseline_params):
    lb_full = _link_budget(baseline_params, EhMode.CON, 1.0)
    lb_half = _link_budget(baseline_params, EhMode.CON, 0.5)
    assert lb_half.g2 == pytest.approx(0.5 * lb_full.g2, rel=1e-15)
    assert lb_full.phi_eff == 1.0
    assert lb_full.n1_eff == baseline_params.n1a + baseline_params.n1c


def test_link_budget_matches_derived_constants(baseline_params):
    c = derive_constants(baseline_params)
    lb = _link_budget(baseline_params, EhMode.IEH, 1.0)
    assert lb.nc_av == pytest.approx(c.nc_av, rel=1e-14)
    assert lb.n1_eff == pytest.approx(c.n_tot1, rel=1e-14)


def test_result_invariants(baseline_params):
    cfg = McConfig(params=baseline_params, frames=3000, seed=8)
    r = run_monte_carlo(cfg)
    assert r.ber == r.errors / r.bits
    assert r.ci95_halfwidth == pytest.approx(
        1.96 * math.sqrt(r.ber * (1 - r.ber) / r.bits), rel=1e-12)
    assert r.seed == 8
    assert r.bits == 3000 * 63


def test_ci_scaling_with_frames(baseline_params):
    r1 = run_monte_carlo(McConfig(params=baseline_params, frames=20_000, seed=13))
    r2 = run_monte_carlo(McConfig(params=baseline_params, frames=40_000, seed=13))
    ratio = r2.ci95_halfwidth / r1.ci95_halfwidth
    assert abs(ratio - 1.0 / math.sqrt(2.0)) <= 0.1 / math.sqrt(2.0)
