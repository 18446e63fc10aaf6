import math

import numpy as np
import pytest

from swipt_daf.model import (DegenerateSplitError, Scheme, SystemParams,
                             ValidationError, db_to_linear, derive_constants,
                             linear_to_db, reference_params, two_hop_snr,
                             PARAM_KEYS)


def test_derived_constants_reference_values(baseline_constants):
    c = baseline_constants
    assert c.phi == 0.5
    assert c.n_tot0 == 1.0
    assert c.n_tot1 == 0.75
    assert c.n_tot2 == 1.0
    assert math.isclose(c.k1, 17.5, rel_tol=1e-14)
    assert math.isclose(c.k2, 2.625, rel_tol=1e-14)
    assert math.isclose(c.k3, 5.75, rel_tol=1e-14)
    assert math.isclose(c.gbar0, 10.0, rel_tol=1e-14)
    assert math.isclose(c.j1, 5.75 / 70.0, rel_tol=1e-14)
    assert math.isclose(c.j2, -1.15, rel_tol=1e-14)
    assert math.isclose(c.nc_av, 1.0 + 2.625 / 5.75, rel_tol=1e-14)


def test_joint_scaling_homogeneity(baseline_params, baseline_constants):
    scale = 7.0
    scaled = baseline_params.replace(
        p0=scale * baseline_params.p0,
        **{k: scale * getattr(baseline_params, k)
           for k in ("n0a", "n0c", "n1a", "n1c", "n2a", "n2c")})
    cs = derive_constants(scaled)
    c = baseline_constants
    assert math.isclose(cs.k1, scale ** 2 * c.k1, rel_tol=1e-12)
    assert math.isclose(cs.k2, scale ** 2 * c.k2, rel_tol=1e-12)
    assert math.isclose(cs.k3, scale ** 2 * c.k3, rel_tol=1e-12)
    assert math.isclose(cs.gbar0, c.gbar0, rel_tol=1e-12)
    assert math.isclose(cs.j1 / abs(cs.j2), c.j1 / abs(c.j2), rel_tol=1e-12)
    # identical SNR map
    rng = np.random.default_rng(1)
    x = rng.exponential(size=50)
    y = rng.exponential(size=50)
    np.testing.assert_allclose(two_hop_snr(cs, x, y), two_hop_snr(c, x, y),
                               rtol=1e-12)


@pytest.mark.parametrize("theta", [0.0, 1.0])
def test_degenerate_split_rejected(baseline_params, theta):
    with pytest.raises(DegenerateSplitError):
        derive_constants(baseline_params.replace(theta=theta, n1c=0.5))


def test_two_hop_snr_values(baseline_constants):
    c = baseline_constants
    assert two_hop_snr(c, 0.0, 3.7) == 0.0
    assert two_hop_snr(c, 2.5, 0.0) == 0.0
    assert math.isclose(two_hop_snr(c, 1.0, 1.0), 17.5 / 8.375, rel_tol=1e-14)
    assert two_hop_snr(c, 2.0, 1.0) > two_hop_snr(c, 1.0, 1.0)
    assert two_hop_snr(c, 1.0, 2.0) > two_hop_snr(c, 1.0, 1.0)


def test_two_hop_snr_supremum_and_monotonicity(baseline_constants):
    c = baseline_constants
    rng = np.random.default_rng(7)
    x = rng.exponential(size=200) + 1e-9
    y = rng.exponential(size=200) + 1e-9
    snr = two_hop_snr(c, x, y)
    assert np.all(snr < c.k1 * x / c.k2)
    assert np.all(two_hop_snr(c, x * 1.5, y) >= snr)
    assert np.all(two_hop_snr(c, x, y * 1.5) >= snr)


def test_derive_constants_pure(baseline_params):
    assert derive_constants(baseline_params) == derive_constants(baseline_params)


@pytest.mark.parametrize("field,value,fragment", [
    ("theta", 1.5, "theta"),
    ("theta", -0.1, "theta"),
    ("eta", 0.0, "eta"),
    ("eta", 1.2, "eta"),
    ("p0", -3.0, "p0"),
    ("alpha", 0.0, "alpha"),
    ("d1", 0.0, "d1"),
    ("n2c", -0.5, "n2c"),
])
def test_validation_names_field(baseline_params, field, value, fragment):
    with pytest.raises(ValidationError, match=fragment):
        baseline_params.replace(**{field: value})


def test_total_noise_must_be_positive(baseline_params):
    with pytest.raises(ValidationError, match="n0a"):
        baseline_params.replace(n0a=0.0, n0c=0.0)
    # theta = 1 kills the scaled antenna noise; conversion noise must remain
    with pytest.raises(ValidationError, match="n1"):
        baseline_params.replace(theta=1.0, n1c=0.0)


def test_mapping_round_trip(baseline_params):
    m = baseline_params.to_mapping()
    assert set(m) == set(PARAM_KEYS)
    assert SystemParams.from_mapping(m) == baseline_params
    with pytest.raises(ValidationError, match="unknown"):
        SystemParams.from_mapping({**m, "bogus": 1.0})
    del m["eta"]
    with pytest.raises(ValidationError, match="missing"):
        SystemParams.from_mapping(m)


def test_db_helpers():
    assert math.isclose(db_to_linear(10.0), 10.0, rel_tol=1e-15)
    assert math.isclose(linear_to_db(1000.0), 30.0, rel_tol=1e-15)
    assert math.isclose(db_to_linear(linear_to_db(3.7)), 3.7, rel_tol=1e-14)


def test_reference_params_shape():
    p = reference_params(3.0, theta=0.3)
    assert p.p0 == 3.0 and p.theta == 0.3 and p.eta == 0.7
    assert p.n0a == p.n2c == 0.5


def test_scheme_enum_values():
    assert {s.value for s in Scheme} == {"TH", "LC", "DIRECT_ONLY"}
