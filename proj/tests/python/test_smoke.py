import math

import numpy as np
import pytest

import necrosim


def test_bessel_wronskian():
    x = 1.7
    w = x * (necrosim.bessel_i(0, x) * necrosim.bessel_k(1, x) + necrosim.bessel_i(1, x) * necrosim.bessel_k(0, x))
    assert abs(w - 1) < 1e-12


def test_stationary_and_phi():
    g = necrosim.Geometry(2.0, 1.0)
    r = necrosim.solve_stationary(g, 1.0)
    assert r["solvable"]
    assert max(abs(v) for v in r["residuals"]) < 1e-10
    bio = necrosim.Bio(r["A"], r["G"], 1.0)
    phi1, phi2 = necrosim.phi(g, bio, [0j], [0j], modes=16)
    assert np.max(np.abs(phi1)) < 1e-8 and np.max(np.abs(phi2)) < 1e-8


def test_critical_psi0():
    g = necrosim.Geometry(2.0, 1.0)
    assert not necrosim.solve_stationary(g, necrosim.psi0_critical(g))["solvable"]


def test_symbol_matches_hand_values():
    s = necrosim.principal_symbol(necrosim.Geometry(2.0, 1.0), 1)
    assert s.shape == (2, 2)
    assert s[0, 0] == pytest.approx(-5 / 24)
    assert s[1, 1] == pytest.approx(-5 / 3)


def test_evolve_decay():
    g = necrosim.Geometry(2.0, 1.0)
    r = necrosim.solve_stationary(g, 1.0)
    bio = necrosim.Bio(r["A"], r["G"], 1.0)
    rho1 = [0j] * 9
    rho1[8] = 0.5e-4
    out = necrosim.evolve(g, bio, rho1, [0j], t_end=0.005, dt=1e-4, modes=16)
    assert out["reason"] == "Completed"
    a0 = abs(out["rho1"][0][8])
    a1 = abs(out["rho1"][-1][8])
    assert a1 < a0 * math.exp(-0.1)


def test_invalid_geometry():
    with pytest.raises(ValueError):
        necrosim.Geometry(1.0, 2.0)


def test_cli_passthrough():
    code, out, _ = necrosim.run_cli(["spectrum", "--m-max", "3"])
    assert code == 0
    assert out.splitlines()[0].startswith("m,A11")
