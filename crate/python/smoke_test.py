"""Smoke test for the pywarpineq extension module."""

import math

import pywarpineq as w


def main():
    eye = w.Matrix.identity(3)
    assert eye.shape == (3, 3)
    assert w.Matrix.from_text(eye.to_text()).to_list() == eye.to_list()
    d = w.Matrix.from_diag([3.0, -2.0, 1.0])
    assert d.singular_values() == [3.0, 2.0, 1.0]
    assert abs(d.kyfan_norm(2) - 5.0) < 1e-12
    assert (d @ eye).to_list() == d.to_list()

    a = w.generate("pd_hs_contraction", 4, 7)
    assert a.hs_norm() < 1.0
    s = w.t010_sides(a)
    assert s["lhs"] <= s["rhs"], s

    h = w.harmonic_inv_sqrt_bounds(10)
    assert h["lower"] < h["sum_inv_sqrt"] < h["upper"]

    r = w.run_audit("c1", 2, 4, 20)
    assert r["violations"] == [] and r["trials"] == 60

    assert w.model_names() == ["flat-product", "chen-cone", "circle-fiber"]
    cone = w.check_geometry("chen-cone", [3])
    assert cone["holds"] and cone["equality"]
    p = [1.0, 0.0, 0.0, math.pi / 4]
    g = w.point_geometry("chen-cone", p)
    assert abs(g["h_sq"] - 2.0) < 1e-6 and abs(g["rhs"] - 2.0) < 1e-6
    for zeta in w.normal_basis("chen-cone", p):
        op = w.shape_operator("chen-cone", p, zeta)
        for x, y in zip(op["singular_values"], op["chart_singular_values"]):
            assert abs(x - y) < 1e-8

    try:
        w.generate("nope", 3, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown ensemble accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
