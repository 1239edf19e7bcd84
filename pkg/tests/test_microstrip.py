import dataclasses
import math

import numpy as np
import pytest

from twpasim.constants import C0
from twpasim.errors import DomainError
from twpasim.materials import SurfaceImpedance, surface_inductance_thin_film
from twpasim.microstrip import Geometry, hj_baseline, line_params, mixed_eps_and_fill

from oracles import wheeler_z0

TABLE_GEOM = Geometry(width=340e-9, dielectric_h=100e-9, strip_t=35e-9, ground_t=350e-9,
                      eps_sub=10.3, eps_super=11.4, tand_sub=1e-5, tand_super=0.03)

ZS_ZERO = SurfaceImpedance(0.0, 0.0)


def lossless(geom):
    return dataclasses.replace(geom, tand_sub=0.0, tand_super=0.0)


class TestHjBaseline:
    def test_vacuum_dielectric(self):
        g = dataclasses.replace(TABLE_GEOM, eps_sub=1.0)
        assert hj_baseline(g).eps_eff0 == 1.0

    def test_against_wheeler_reference(self):
        # u = 1, eps_r = 10, vanishing strip thickness
        g = Geometry(width=100e-6, dielectric_h=100e-6, strip_t=1e-12, ground_t=350e-9,
                     eps_sub=10.0, eps_super=1.0, tand_sub=0.0, tand_super=0.0)
        base = hj_baseline(g)
        assert base.z0_base == pytest.approx(wheeler_z0(1.0, 10.0), rel=0.01)

    def test_table_geometry_golden(self):
        base = hj_baseline(TABLE_GEOM)
        assert 1.0 < base.eps_eff0 < TABLE_GEOM.eps_sub
        assert base.z0_base == pytest.approx(22.046378640669968, rel=1e-9)

    def test_lc_consistent_with_z0(self):
        base = hj_baseline(TABLE_GEOM)
        assert math.sqrt(base.l_geom / base.c_per_m) == pytest.approx(base.z0_base, rel=1e-12)
        v_ph = 1.0 / math.sqrt(base.l_geom * base.c_per_m)
        assert v_ph == pytest.approx(C0 / math.sqrt(base.eps_eff0), rel=1e-12)

    @pytest.mark.parametrize("eps_r", [1.0, 2.2, 4.5, 10.3, 12.0])
    def test_eps_eff_bounds(self, eps_r):
        g = dataclasses.replace(TABLE_GEOM, eps_sub=eps_r)
        e = hj_baseline(g).eps_eff0
        assert 1.0 <= e <= eps_r
        if eps_r > 1.0:
            assert e > 1.0


class TestMixedEps:
    def test_equal_permittivities(self):
        g = dataclasses.replace(TABLE_GEOM, eps_sub=9.0, eps_super=9.0)
        q_sub, q_super, eps = mixed_eps_and_fill(g)
        assert q_sub + q_super == pytest.approx(1.0, abs=1e-15)
        assert eps == pytest.approx(9.0, rel=1e-15)

    def test_table_values_bounded(self):
        q_sub, q_super, eps = mixed_eps_and_fill(TABLE_GEOM)
        assert 10.3 < eps < 11.4
        assert 0.0 <= q_sub <= 1.0 and 0.0 <= q_super <= 1.0

    def test_swap_changes_weight_per_formula(self):
        u = TABLE_GEOM.width / TABLE_GEOM.dielectric_h
        swapped = dataclasses.replace(TABLE_GEOM, eps_sub=11.4, eps_super=10.3)
        q_sub, _, _ = mixed_eps_and_fill(TABLE_GEOM)
        q_sub_swapped, _, _ = mixed_eps_and_fill(swapped)
        expect = 0.5 + 0.25 * (1 - math.tanh(0.5 * math.log(11.4 / 10.3))) * (1 + math.log(u * u)) / (1 + 10 / u)
        assert q_sub_swapped == pytest.approx(expect, rel=1e-12)
        assert q_sub_swapped != pytest.approx(q_sub, rel=1e-6)

    @pytest.mark.parametrize("u", [0.1, 0.5, 1.0, 3.4, 10.0, 50.0])
    def test_weights_in_range(self, u):
        g = dataclasses.replace(TABLE_GEOM, width=u * TABLE_GEOM.dielectric_h)
        q_sub, q_super, eps = mixed_eps_and_fill(g)
        assert 0.0 <= q_sub <= 1.0 and 0.0 <= q_super <= 1.0
        assert min(10.3, 11.4) <= eps <= max(10.3, 11.4)


class TestLineParams:
    def test_lossless_geometric_limit(self):
        g = lossless(TABLE_GEOM)
        line = line_params(g, ZS_ZERO, ZS_ZERO, 1.6, 6e9)
        base = hj_baseline(g)
        assert line.z0.real == pytest.approx(base.z0_base, rel=1e-12)
        assert abs(line.z0.imag) < 1e-9 * base.z0_base
        assert line.gamma.real == pytest.approx(0.0, abs=1e-12)
        assert line.gamma.imag == pytest.approx(
            2 * math.pi * 6e9 * math.sqrt(base.eps_eff0) / C0, rel=1e-12)

    def test_kinetic_terms_add(self):
        zs = SurfaceImpedance(1e-6, 0.02)
        zs_g = SurfaceImpedance(1e-6, 0.007)
        line = line_params(TABLE_GEOM, zs, zs_g, 1.6, 6e9)
        base = hj_baseline(TABLE_GEOM)
        assert line.l_per_m > base.l_geom
        from twpasim.materials import penetration_depth
        lam_s = penetration_depth(zs, 6e9)
        lam_g = penetration_depth(zs_g, 6e9)
        term_s = surface_inductance_thin_film(lam_s, TABLE_GEOM.strip_t) * 1.6 / TABLE_GEOM.width
        term_g = surface_inductance_thin_film(lam_g, TABLE_GEOM.ground_t) / TABLE_GEOM.width
        assert term_s > term_g  # strip kinetic term dominates
        assert line.l_per_m == pytest.approx(base.l_geom + term_s + term_g, rel=1e-12)

    def test_alpha_ki_linearity(self):
        zs = SurfaceImpedance(0.0, 0.02)
        line1 = line_params(TABLE_GEOM, zs, ZS_ZERO, 1.6, 6e9)
        line2 = line_params(TABLE_GEOM, zs, ZS_ZERO, 3.2, 6e9)
        from twpasim.materials import penetration_depth
        lam = penetration_depth(zs, 6e9)
        lsurf = surface_inductance_thin_film(lam, TABLE_GEOM.strip_t)
        assert line2.l_per_m - line1.l_per_m == pytest.approx(1.6 * lsurf / TABLE_GEOM.width, rel=1e-12)

    def test_rlgc_consistency(self):
        zs = SurfaceImpedance(3e-6, 0.02)
        zs_g = SurfaceImpedance(1e-6, 0.007)
        for f in (1e9, 6e9, 18e9):
            line = line_params(TABLE_GEOM, zs, zs_g, 1.6, f)
            omega = 2 * math.pi * f
            series = complex(line.r_per_m, omega * line.l_per_m)
            shunt = complex(line.g_per_m, omega * line.c_per_m)
            assert abs(line.gamma * line.z0 - series) / abs(series) < 1e-10
            assert abs(line.gamma / line.z0 - shunt) / abs(shunt) < 1e-10

    def test_loss_tangent_monotonicity(self):
        zs = SurfaceImpedance(0.0, 0.02)
        alphas = []
        for tand in (0.0, 0.01, 0.03, 0.1):
            g = dataclasses.replace(TABLE_GEOM, tand_super=tand)
            alphas.append(line_params(g, zs, ZS_ZERO, 1.6, 6e9).gamma.real)
        assert all(b > a for a, b in zip(alphas, alphas[1:]))

    def test_alpha_ki_slows_phase_velocity(self):
        zs = SurfaceImpedance(0.0, 0.02)
        omega = 2 * math.pi * 6e9
        vels = []
        lps = []
        for aki in (1.0, 1.6, 2.0, 3.0):
            line = line_params(TABLE_GEOM, zs, ZS_ZERO, aki, 6e9)
            vels.append(omega / line.gamma.imag)
            lps.append(line.l_per_m)
        assert all(b > a for a, b in zip(lps, lps[1:]))
        assert all(b < a for a, b in zip(vels, vels[1:]))

    def test_passivity(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            zs = SurfaceImpedance(float(rng.uniform(0, 1e-2)), float(rng.uniform(1e-4, 0.1)))
            zg = SurfaceImpedance(float(rng.uniform(0, 1e-2)), float(rng.uniform(1e-4, 0.1)))
            f = float(rng.uniform(1e9, 2e10))
            line = line_params(TABLE_GEOM, zs, zg, float(rng.uniform(1.0, 3.0)), f)
            assert line.gamma.real >= 0.0
            assert line.z0.real > 0.0

    def test_rejects_bad_frequency(self):
        with pytest.raises(DomainError):
            line_params(TABLE_GEOM, ZS_ZERO, ZS_ZERO, 1.6, -1.0)


class TestGeometryValidation:
    def test_rejects_nonpositive_lengths(self):
        with pytest.raises(DomainError):
            dataclasses.replace(TABLE_GEOM, width=0.0)

    def test_rejects_sub_unity_permittivity(self):
        with pytest.raises(DomainError):
            dataclasses.replace(TABLE_GEOM, eps_super=0.5)

    def test_rejects_negative_loss_tangent(self):
        with pytest.raises(DomainError):
            dataclasses.replace(TABLE_GEOM, tand_sub=-1e-5)
