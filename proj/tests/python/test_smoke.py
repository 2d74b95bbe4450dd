import math

import numpy as np
import pytest

import enpp


def grid_coords(n):
    x = 2 * np.pi * np.arange(n) / n
    return np.meshgrid(x, x, indexing="ij")


def taylor_green(n):
    x, y = grid_coords(n)
    return np.stack([np.sin(x) * np.cos(y), -np.cos(x) * np.sin(y)])


def test_grid_properties():
    g = enpp.Grid(2, 32)
    assert g.dim == 2 and g.points == 32
    assert g.spacing == pytest.approx(2 * np.pi / 32)
    coords = g.coordinates()
    assert coords.shape == (2, 32, 32)
    assert coords[0, 1, 0] == pytest.approx(g.spacing)
    assert coords[1, 0, 1] == pytest.approx(g.spacing)


def test_lp_norm_of_sine():
    x, _ = grid_coords(32)
    assert enpp.lp_norm(np.sin(x), 2) == pytest.approx(math.sqrt(2) * np.pi, rel=1e-12)
    assert enpp.lp_norm(np.sin(x), math.inf) == pytest.approx(1.0, rel=1e-12)


def test_blocks_sum_to_field():
    rng = np.random.default_rng(3)
    f = rng.standard_normal((32, 32))
    f = enpp.leray_project(np.stack([f, f]))[0]
    blocks = enpp.dyadic_blocks(f)
    assert len(blocks) == enpp.Grid(2, 32).j_max + 2
    low = enpp.dyadic_block(f, -1)
    np.testing.assert_allclose(blocks[0], low, atol=1e-14)


def test_besov_norm_single_mode():
    x, y = grid_coords(32)
    f = np.cos(x + y)
    block = enpp.dyadic_block(f, 0)
    expected = enpp.lp_norm(block, 2) + 2 * enpp.lp_norm(enpp.dyadic_block(f, 1), 2)
    assert enpp.besov_norm(f, 1.0, 2, 1) == pytest.approx(expected, rel=1e-12)


def test_leray_projection():
    x, y = grid_coords(32)
    u = taylor_green(32)
    grad = np.stack([-np.sin(x) * np.cos(2 * y), -2 * np.cos(x) * np.sin(2 * y)])
    np.testing.assert_allclose(enpp.leray_project(u + grad), u, atol=1e-12)


def test_potential_and_neutrality():
    x, y = grid_coords(32)
    n = 1 + 0.1 * np.cos(x)
    p = 1 - 0.1 * np.cos(x)
    phi, grad_phi = enpp.solve_potential(n, p)
    np.testing.assert_allclose(phi, -0.2 * np.cos(x), atol=1e-12)
    assert grad_phi.shape == (2, 32, 32)
    with pytest.raises(enpp.NonNeutral):
        enpp.solve_potential(n, p + 0.5)


def test_taylor_green_is_steady():
    u = taylor_green(32)
    ones = np.ones((32, 32))
    u1, n1, p1 = enpp.integrate(u, ones, ones, horizon=0.2, steps=10)
    np.testing.assert_allclose(u1, u, atol=1e-10)
    np.testing.assert_allclose(n1, ones, atol=1e-12)


def test_step_matches_between_formulations():
    x, y = grid_coords(32)
    u = taylor_green(32)
    n = 1 + 0.2 * np.cos(x) * np.cos(y)
    p = 1 - 0.2 * np.cos(x) * np.cos(y)
    a = enpp.step(u, n, p, dt=0.01)
    b = enpp.step(u, n, p, dt=0.01, formulation="modified")
    for left, right in zip(a, b):
        np.testing.assert_allclose(left, right, atol=1e-9)


def test_shape_errors():
    with pytest.raises(enpp.InvalidArgument):
        enpp.besov_norm(np.zeros((8, 16)), 1.0, 2, 2)
    with pytest.raises(ValueError):
        enpp.step(np.zeros((3, 8, 8)), np.ones((8, 8)), np.ones((8, 8)), dt=0.1)


def test_lifespan_bound_decreases_with_data():
    u = taylor_green(32)
    ones = np.ones((32, 32))
    small = enpp.lifespan_lower_bound(0.1 * u, ones, ones)
    large = enpp.lifespan_lower_bound(u, ones, ones)
    assert 0 < large < small < 1


def test_simulate_from_config(tmp_path):
    config = tmp_path / "run.ini"
    out = tmp_path / "out"
    config.write_text(
        "[grid]\nd = 2\nN = 32\n\n"
        "[initial]\npreset = charged-taylor-green\n\n"
        f"[run]\nT = 0.1\noutput = {out}\n"
    )
    result = enpp.simulate(str(config), write_outputs=True)
    assert result["ok"]
    assert result["steps"] >= 1
    assert result["n"].shape == (32, 32)
    assert (out / "report.csv").exists()
    assert enpp.check_trajectory(str(out))["ok"]


def test_config_error(tmp_path):
    config = tmp_path / "bad.ini"
    config.write_text("[grid]\nNN = 32\n")
    with pytest.raises(enpp.ConfigError, match="did you mean"):
        enpp.simulate(str(config))
