"""Smoke test for the webendo_py extension: build with `maturin develop`,
then run `python crates/python/python/smoke_test.py`."""

import os
import tempfile
from fractions import Fraction

import webendo_py as w


def main():
    f2 = w.nodal(2)
    assert f2.regime == "exact" and f2.degree == 2
    assert f2.components()[0] == {(2, 0, 0): Fraction(1), (0, 1, 1): Fraction(-2)}
    assert f2.expected_splits == [[1, 2]]
    # (1 − 4, 4 − 2, 1), first coordinate scaled to 1
    assert f2.apply([1, 2, 1]) == [1, Fraction(-2, 3), Fraction(-1, 3)]

    reports = f2.verify(samples=200, seed=7)
    assert all(r["pass"] for r in reports), reports
    assert reports == f2.verify(samples=200, seed=7)

    conic = w.ueda([Fraction(-2), 0, 1])
    assert conic.family == "conic"
    assert all(r["pass"] for r in conic.verify(samples=100))
    only = f2.verify(checks=["invariance"], samples=50)
    assert [r["check"] for r in only] == ["invariance"]

    pencil = w.pencil([0, 1, 1], [1, 0, 1])
    assert all(r["pass"] for r in pencil.verify(samples=100))
    for m in (w.two_lines([-1, 0, 1], [0, 1, 1]), w.three_lines(3), w.conic_line(2, Fraction(3, 2), "-")):
        assert all(r["pass"] for r in m.verify(samples=100)), m

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "f2.json")
        f2.save(path)
        back = w.load_map(path)
        assert back.components() == f2.components()

    nodal_dual = w.dual_curve("nodal")
    assert nodal_dual["degree"] == 4 and nodal_dual["plucker_holds"]
    cubic_dual = w.dual_curve("smooth-cubic")
    assert cubic_dual["degree"] == 6 and cubic_dual["fit_residual"] < 1e-6

    svg = w.render_svg("conic", 12)
    assert svg.count("<line ") == 12

    pts = w.totally_invariant_points([0, 0, 1])
    assert len(pts) == 2
    assert "e1" in w.newton_power_sum(3)
    assert "crit-finite" in w.check_names()

    try:
        w.nodal(1)
    except w.WebendoError:
        pass
    else:
        raise AssertionError("degree 1 accepted")

    cubic = w.smooth_cubic()
    assert cubic.regime == "float" and cubic.degree == 4
    assert all(r["pass"] for r in cubic.verify(checks=["invariance"], samples=100))

    print("smoke test passed")


if __name__ == "__main__":
    main()
