import numpy as np
import pytest

import fitzkit

IDENTITY_SAMPLE = {"kind": "finite", "pairs": [{"x": [0], "xstar": [0]}, {"x": [1], "xstar": [1]}]}
NON_MONOTONE = {"kind": "finite", "pairs": [{"x": [0], "xstar": [1]}, {"x": [1], "xstar": [0]}]}


def test_conjugate_of_half_square():
    x = np.linspace(-2, 2, 81)
    values, mask = fitzkit.conjugate(x**2 / 2, [(-2, 2)], [(-1, 1, 21)])
    s = np.linspace(-1, 1, 21)
    assert values.shape == (21,)
    assert not mask.any()
    # Slopes are grid nodes, so the discrete conjugate is exact there.
    np.testing.assert_allclose(values, s**2 / 2, atol=1e-12)


def test_llt_matches_brute_force_in_2d():
    rng = np.random.default_rng(3)
    g = np.linspace(-1, 1, 15)
    a = rng.normal(size=(4, 2))
    b = rng.normal(size=4)
    values = np.max(a[:, 0, None, None] * g[:, None] + a[:, 1, None, None] * g[None, :] + b[:, None, None], axis=0)
    values += 0.5 * (g[:, None] ** 2 + g[None, :] ** 2)
    dual = [(-2, 2, 11), (-2, 2, 11)]
    fast, fast_mask = fitzkit.conjugate(values, [(-1, 1), (-1, 1)], dual)
    slow, slow_mask = fitzkit.conjugate(values, [(-1, 1), (-1, 1)], dual, method="bruteforce")
    np.testing.assert_allclose(fast, slow, atol=1e-9)
    assert (fast_mask == slow_mask).all()


def test_llt_1d():
    coords = np.linspace(-1, 1, 5)
    out = fitzkit.llt_1d(np.array([0.0, 1.0]), coords, np.abs(coords))
    np.testing.assert_allclose(out, [0.0, 0.0])


def test_phi_of_identity_sample():
    phi = fitzkit.phi(IDENTITY_SAMPLE)
    assert phi["kind"] == "max_affine"
    assert len(phi["pieces"]) == 2
    back = fitzkit.conjugate_exact(phi)
    assert back["kind"] == "generator"
    grid = fitzkit.phi_on_grid(IDENTITY_SAMPLE, [(-1, 1, 5), (-1, 1, 5)])
    z = np.linspace(-1, 1, 5)
    # max over the two pairs (y, y) of y*x + y*x* - y*y
    expected = np.maximum(0.0, z[:, None] + z[None, :] - 1)
    np.testing.assert_allclose(grid, expected, atol=1e-12)
    sigma = fitzkit.sigma_on_grid(IDENTITY_SAMPLE, [(-1, 1, 5), (-1, 1, 5)])
    assert sigma[2, 2] == 0.0
    assert np.isinf(sigma[0, 4])


def test_monotonicity_witness():
    assert fitzkit.is_monotone(IDENTITY_SAMPLE)["monotone"]
    r = fitzkit.is_monotone(NON_MONOTONE)
    assert not r["monotone"]
    assert r["violator"] == (0, 1)
    assert r["worst"] == "-1"  # <0 - 1, 1 - 0>


def test_gate_and_extraction_for_sign_map():
    g = np.linspace(-2, 2, 17)
    h = np.where(np.abs(g[None, :]) <= 1, np.abs(g[:, None]), np.inf)
    report = fitzkit.gate(h, [(-2, 2), (-2, 2)], tol=0.0)
    assert report["holds"]
    e = fitzkit.extract(h, [(-2, 2), (-2, 2)], tol=0.0, gate_tol=0.0)
    assert e["monotone"]
    for x, xs in e["pairs"]:
        assert (x[0] == 0 and abs(xs[0]) <= 1) or xs[0] == np.sign(x[0])

    zero = np.zeros((5, 5))
    report = fitzkit.gate(zero, [(-1, 1), (-1, 1)])
    assert not report["holds"]
    assert report["h_ge_pi"]["witness"] is not None
    with pytest.raises(fitzkit.PreconditionError):
        fitzkit.extract(zero, [(-1, 1), (-1, 1)])


def test_lemma_battery_is_deterministic():
    a = fitzkit.lemma_battery()
    assert a == fitzkit.lemma_battery(fitzkit.DEFAULT_SEED)
    assert len(a) > 600
    assert all(r["passed"] for r in a)


def test_errors():
    with pytest.raises(ValueError, match="pairs"):
        fitzkit.phi({"kind": "finite", "pairs": []})
    with pytest.raises(ValueError):
        fitzkit.conjugate(np.zeros(4), [(-1, 1), (0, 1)])
    with pytest.raises(ValueError, match="method"):
        fitzkit.conjugate(np.zeros(4), [(-1, 1)], method="fast")


def test_cli(tmp_path):
    code, out, _ = fitzkit.run_cli("verify", "--suite", "gate", "--out", tmp_path / "v")
    assert code == 0
    assert "0 mismatches" in out
    assert fitzkit.run_cli("frobnicate")[0] == 2
