import math

import _spherecap as sc


def test_distance_and_midpoint():
    ex = [1.0, 0.0, 0.0]
    ey = [0.0, 1.0, 0.0]
    assert abs(sc.distance(ex, ey) - math.pi / 2) < 1e-14
    mid = sc.midpoint(ex, ey)
    s = 1 / math.sqrt(2)
    assert max(abs(mid[0] - s), abs(mid[1] - s), abs(mid[2])) < 1e-14


def test_geodesic_point():
    p = sc.geodesic_point([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.0)
    s = 1 / math.sqrt(2)
    assert abs(p[0] - s) < 1e-14 and abs(p[1] - s) < 1e-14


def test_jacobi_scalar():
    assert abs(sc.jacobi_scalar_v(math.pi / 4, 1.0) - 1 / math.sqrt(2)) < 1e-14
    assert sc.jacobi_scalar_v(0.5, 0.0) == 0.0


def test_k_identities():
    x = [math.sin(0.5), 0.0, math.cos(0.5)]
    y = [-math.sin(0.5), 0.0, math.cos(0.5)]
    r = sc.check_k_identities(x, y)
    assert r["k1_sup"] <= 1e-4
    assert r["k2_at_zero"] <= 1e-4
    assert r["k3_at_zero"] <= 1e-4
    assert r["k_boundary_max"] <= 1e-5


def test_solver_matches_exact():
    out = sc.solve_semilinear_manufactured(1.0, 32)
    exact_pole = sc.manufactured_exact_radial(1.0, 0.0)
    assert abs(out["pole_value"] - exact_pole) < 1e-3
    assert out["final_residual"] <= 1e-10


def test_verify_reports_pass():
    rep = sc.verify_manufactured(1.0, 5000, 1)
    assert rep["verdict"] == "PASS"
    assert rep["min_z"] >= -1e-12
