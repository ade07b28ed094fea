import math

import numpy as np
import pytest

from vneig import (InvalidArgumentError, LatticeMismatchError, cell_center,
                   cell_centers, default_alpha, make_grid, make_lattice)
from vneig.lattice import GridSpec


class TestMakeGrid:
    def test_paper_box(self):
        g = make_grid(-5.0, 10.0, 16, 1.0)
        assert g.dx == pytest.approx(0.625, abs=0)
        pts = g.points()
        assert pts[0] == -5.0
        assert pts[1] == pytest.approx(-4.375)
        assert pts[-1] == pytest.approx(4.375)
        # right edge is not a grid point
        assert not np.any(np.isclose(pts, 5.0))

    def test_two_point_grid(self):
        g = make_grid(0.0, 1.0, 2, 1.0)
        assert g.dx == 0.5
        assert list(g.points()) == [0.0, 0.5]
        assert g.p_max == pytest.approx(2 * math.pi)

    def test_coulomb_grid_avoids_origin(self):
        g = make_grid(-50.2, 100.3, 1599, 0.5)
        assert g.dx == pytest.approx(100.3 / 1599)
        pts = g.points()
        # independent scan: no point within dx/2 of zero means no point is zero
        nearest = np.abs(pts).min()
        assert nearest > 0
        assert nearest == pytest.approx(0.0186366, rel=1e-4)

    def test_dx_times_n_is_exact(self):
        g = make_grid(-3.3, 7.7, 13, 2.0)
        assert g.dx * g.n_points == g.length

    def test_phase_space_accounting(self):
        for n, L in ((16, 10.0), (100, 21.7), (1599, 100.3)):
            g = make_grid(0.0, L, n, 0.5)
            h = 2 * math.pi * g.hbar
            assert g.phase_space_area() == pytest.approx(n * h, rel=1e-14)

    @pytest.mark.parametrize("kwargs,field", [
        (dict(x_min=0, length=-1.0, n_points=4, hbar=1.0), "length"),
        (dict(x_min=0, length=1.0, n_points=1, hbar=1.0), "n_points"),
        (dict(x_min=0, length=1.0, n_points=4, hbar=0.0), "hbar"),
    ])
    def test_invalid_arguments_name_the_field(self, kwargs, field):
        with pytest.raises(InvalidArgumentError, match=field):
            make_grid(**kwargs)


class TestMakeLattice:
    def test_harmonic_defaults(self):
        g = make_grid(-5.0, 10.0, 16, 1.0)
        lat = make_lattice(g, 4, 4)
        assert lat.a == pytest.approx(2.5)
        assert lat.dp == pytest.approx(2.5132741228718345)
        assert lat.alpha == pytest.approx(0.5026548245743669)

    def test_morse_alpha_override(self):
        g = make_grid(0.0, 21.7, 100, 1.0)
        lat = make_lattice(g, 10, 10, alpha=0.5)
        assert lat.a == pytest.approx(2.17)
        assert lat.dp == pytest.approx(2.8954771000827586)
        assert lat.alpha == 0.5
        # the default formula would give a different width here
        assert default_alpha(g, 10) == pytest.approx(0.6671606221388845)

    def test_coulomb_lattice(self):
        g = make_grid(-50.2, 100.3, 1599, 0.5)
        lat = make_lattice(g, 39, 41, alpha=0.2367)
        assert lat.a == pytest.approx(100.3 / 39)
        assert lat.dp == pytest.approx(2 * math.pi * 0.5 * 39 / 100.3)
        assert default_alpha(g, 39) == pytest.approx(0.2375, abs=1e-4)

    def test_mismatch_reports_both_products(self):
        g = make_grid(0.0, 1.0, 12, 1.0)
        with pytest.raises(LatticeMismatchError, match=r"3\*5 = 15.*12"):
            make_lattice(g, 3, 5)

    def test_extreme_factorizations(self):
        g = make_grid(0.0, 1.0, 12, 1.0)
        make_lattice(g, 12, 1)
        make_lattice(g, 1, 12)

    def test_unit_cell_area(self):
        g = make_grid(-2.0, 9.0, 24, 0.7)
        for n_x, n_p in ((2, 12), (3, 8), (6, 4), (24, 1)):
            lat = make_lattice(g, n_x, n_p)
            h = 2 * math.pi * g.hbar
            assert lat.a * lat.dp == pytest.approx(h, rel=1e-14)
            assert lat.n_p * lat.dp == pytest.approx(2 * g.p_max, rel=1e-14)
            # whole lattice covers the grid rectangle
            assert n_x * n_p * lat.a * lat.dp == pytest.approx(
                g.phase_space_area(), rel=1e-13)


class TestCellCenter:
    def test_first_cell(self):
        g = make_grid(-5.0, 10.0, 16, 1.0)
        lat = make_lattice(g, 4, 4, alpha=0.5)
        c = cell_center(lat, 0)
        assert c.x == pytest.approx(-3.75)
        assert c.p == pytest.approx(-g.p_max + lat.dp / 2)
        assert c.p == pytest.approx(-3.7699, abs=1e-4)

    def test_position_runs_fastest(self):
        g = make_grid(-5.0, 10.0, 16, 1.0)
        lat = make_lattice(g, 4, 4, alpha=0.5)
        c = cell_center(lat, 5)  # i = 1, j = 1
        assert c.x == pytest.approx(-1.25)
        assert c.p == pytest.approx(-1.2566, abs=1e-4)

    def test_single_column_lattice(self):
        g = make_grid(0.0, 2.0, 8, 1.0)
        lat = make_lattice(g, 1, 8)
        centers = [cell_center(lat, k) for k in range(8)]
        assert all(c.x == pytest.approx(1.0) for c in centers)
        ps = [c.p for c in centers]
        assert ps == sorted(ps)
        assert ps[0] == pytest.approx(-g.p_max + lat.dp / 2)
        assert ps[-1] == pytest.approx(g.p_max - lat.dp / 2)

    def test_out_of_range(self):
        g = make_grid(0.0, 2.0, 8, 1.0)
        lat = make_lattice(g, 2, 4)
        with pytest.raises(IndexError):
            cell_center(lat, 8)
        with pytest.raises(IndexError):
            cell_center(lat, -1)

    def test_bijection_and_interior(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            n_x = int(rng.integers(1, 7))
            n_p = int(rng.integers(2, 7))
            g = make_grid(float(rng.uniform(-4, 0)), float(rng.uniform(2, 9)),
                          n_x * n_p, float(rng.uniform(0.3, 2.0)))
            lat = make_lattice(g, n_x, n_p)
            pts = {(round(c.x, 12), round(c.p, 12))
                   for c in (cell_center(lat, k) for k in range(lat.size))}
            assert len(pts) == lat.size
            for x, p in pts:
                assert g.x_min < x < g.x_min + g.length
                assert -g.p_max < p < g.p_max

    def test_vectorized_matches_scalar(self):
        g = make_grid(-1.0, 5.0, 12, 1.3)
        lat = make_lattice(g, 3, 4)
        xs, ps = cell_centers(lat)
        for k in range(lat.size):
            c = cell_center(lat, k)
            assert xs[k] == c.x and ps[k] == c.p


def test_gridspec_allows_single_point_for_direct_construction():
    # make_grid requires >= 2 points, but the degenerate one-point grid is a
    # legal value object (used by the one-cell basis checks)
    g = GridSpec(n_points=1, x_min=0.0, length=2.0, hbar=1.0)
    assert g.dx == 2.0
    assert list(g.points()) == [0.0]
