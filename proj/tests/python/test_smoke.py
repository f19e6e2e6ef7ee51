"""Smoke tests for the python module; the heavy physics checks live in the
C++ suites."""

import math

import numpy as np
import pytest

cdsim = pytest.importorskip("cdsim")

QUICK = {
    "protocol": {"kind": "p1", "h": 1.0, "omega": 0.1},
    "periods": 2,
    "transient_periods": 1,
    "steps_per_period": 200,
    "sample_stride": 20,
    "tolerance": 1e-5,
    "max_refinements": 3,
}


def test_simulate_returns_consistent_arrays():
    out = cdsim.simulate(QUICK)
    n = len(out["t"])
    assert n == 2 * 200 // 20 + 1
    assert out["pop"].shape == (n, 2)
    assert out["coh"].shape == (n, 2)
    assert np.all(out["d"] >= 0.0) and np.all(out["d"] <= 1.0)
    assert np.max(out["trace_err"]) < 1e-9
    assert np.min(out["min_eig"]) > -1e-9
    # Populations stay real and normalized.
    assert np.allclose(out["pop"].sum(axis=1), 1.0, atol=1e-9)


def test_simulate_cd_reduces_late_time_distance():
    slow = dict(QUICK, periods=6, transient_periods=5)
    slow["protocol"] = dict(QUICK["protocol"], omega=0.05)
    plain = cdsim.simulate(slow)
    with_cd = cdsim.simulate(dict(slow, with_cd=True))
    T0 = 2 * math.pi / 0.05
    late = plain["t"] >= 5 * T0
    assert with_cd["d"][late].mean() < plain["d"][late].mean()


def test_scan_rows():
    rows = cdsim.scan(dict(QUICK, periods=6, transient_periods=5), "omega", [0.1, 0.2], jobs=2)
    assert [r["value"] for r in rows] == [0.1, 0.2]
    assert all(r["error"] == "" for r in rows)
    assert all(0.0 <= r["d_avg"] <= r["d_max"] <= 1.0 for r in rows)


def test_expand_first_order_beats_order_zero():
    cfg = dict(QUICK, periods=6, transient_periods=5)
    T0 = 2 * math.pi / 0.1
    order0 = cdsim.expand(cfg, order=0)
    order1 = cdsim.expand(cfg, order=1)
    late = order1["t"] >= 5 * T0
    dev0 = order0["diff_norm"][late].max()
    dev1 = order1["diff_norm"][late].max()
    assert dev1 < 0.2 * dev0  # first order removes the O(omega) residual
    assert dev1 < 5e-3


def test_primitives():
    H = np.array([[0.5, 0.0], [0.0, -0.5]])
    values, vectors = cdsim.eigendecompose(H)
    assert np.allclose(values, [-0.5, 0.5])
    rho = cdsim.gibbs_state(H, 1.0)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    assert abs(rho[1, 1].real - 1.0 / (1.0 + math.exp(-1.0))) < 1e-12

    mixed = np.eye(2) / 2.0
    assert cdsim.trace_distance(rho, rho) == 0.0
    expected = rho[1, 1].real - 0.5
    assert abs(cdsim.trace_distance(rho, mixed) - expected) < 1e-12

    hcd = cdsim.two_level_cd(1.0, math.pi / 4, 0.0, 0.0, 0.3)
    assert np.allclose(hcd, hcd.conj().T)
    assert abs(np.trace(hcd)) < 1e-15

    gen = cdsim.generator(QUICK, 0.7)
    oracle = cdsim.generator(QUICK, 0.7, dense_oracle_route=True)
    assert np.abs(gen - oracle).max() < 1e-10


def test_config_error():
    with pytest.raises(cdsim.ConfigError):
        cdsim.simulate({"bogus_key": 1})


def test_validate_quick_and_injection():
    assert cdsim.validate(quick=True)["pass"]
    assert not cdsim.validate(quick=True, inject="kms-sign")["pass"]
