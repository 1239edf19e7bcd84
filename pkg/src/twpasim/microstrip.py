"""Distributed parameters of the inverse microstrip.

The baseline (geometric) line comes from the Hammerstad-Jensen closed forms
with finite strip-thickness correction, evaluated with the substrate
permittivity. Superconductivity enters through the sheet inductances of strip
and ground (added to the geometric inductance) and through their surface
resistances (conductor loss). Dielectric loss mixes substrate and superstrate
loss tangents by field filling factors.
"""

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import C0
from .errors import DomainError
from .materials import SurfaceImpedance, penetration_depth, surface_inductance_thin_film

# Free-space impedance value used by the closed-form synthesis (the customary
# rounded 377 ohm of the published formulas, not mu0*c).
ETA0 = 377.0


@dataclass(frozen=True)
class Geometry:
    """Cross-section of the inverse microstrip; lengths in meters."""

    width: float
    dielectric_h: float
    strip_t: float
    ground_t: float
    eps_sub: float
    eps_super: float
    tand_sub: float
    tand_super: float

    def __post_init__(self):
        if min(self.width, self.dielectric_h, self.strip_t, self.ground_t) <= 0.0:
            raise DomainError("all geometry lengths must be positive", op="microstrip.Geometry")
        if self.eps_sub < 1.0 or self.eps_super < 1.0:
            raise DomainError("relative permittivities must be >= 1", op="microstrip.Geometry")
        if self.tand_sub < 0.0 or self.tand_super < 0.0:
            raise DomainError("loss tangents must be >= 0", op="microstrip.Geometry")


@dataclass(frozen=True)
class LineParams:
    """Distributed RLGC parameters and derived complex line constants."""

    r_per_m: float
    l_per_m: float
    g_per_m: float
    c_per_m: float
    z0: complex
    gamma: complex
    eps_eff0: float
    eps_eff_mixed: float


class HjBaseline(NamedTuple):
    eps_eff0: float
    z0_base: float
    l_geom: float
    c_per_m: float


def hj_baseline(geom: Geometry) -> HjBaseline:
    """Hammerstad-Jensen baseline: effective permittivity, characteristic
    impedance, and the geometric L', C' extracted from them.

    Uses the substrate permittivity and the thickness-corrected normalized
    width u_r = u + du_r.
    """
    u = geom.width / geom.dielectric_h
    eps_r = geom.eps_sub

    t_h = geom.strip_t / geom.dielectric_h
    du1 = t_h / math.pi * math.log(1.0 + 4.0 * math.e / (t_h * (1.0 / math.tanh(math.sqrt(6.517 * u))) ** 2))
    dur = 0.5 * (1.0 + 1.0 / math.cosh(math.sqrt(eps_r - 1.0))) * du1
    ur = u + dur

    a = (
        1.0
        + math.log((ur**4 + (ur / 52.0) ** 2) / (ur**4 + 0.432)) / 49.0
        + math.log(1.0 + (ur / 18.1) ** 3) / 18.7
    )
    b = 0.564 * ((eps_r - 0.9) / (eps_r + 3.0)) ** 0.053
    eps_eff0 = 0.5 * (eps_r + 1.0) + 0.5 * (eps_r - 1.0) * (1.0 + 10.0 / ur) ** (-a * b)

    f_u = 6.0 + (2.0 * math.pi - 6.0) * math.exp(-((30.666 / ur) ** 0.7528))
    z0_base = ETA0 / (2.0 * math.pi * math.sqrt(eps_eff0)) * math.log(f_u / ur + math.sqrt(1.0 + (2.0 / ur) ** 2))

    l_geom = z0_base * math.sqrt(eps_eff0) / C0
    c_per_m = math.sqrt(eps_eff0) / (z0_base * C0)
    return HjBaseline(eps_eff0, z0_base, l_geom, c_per_m)


def mixed_eps_and_fill(geom: Geometry):
    """Field filling factors of substrate/superstrate and the mixed effective
    permittivity eps_sub*q_sub + eps_super*q_super.

    The empirical q_sub expression can leave [0, 1] for extreme aspect
    ratios; it is clipped to preserve q_sub + q_super = 1 with both weights
    in range.
    """
    u = geom.width / geom.dielectric_h
    q_sub = 0.5 + 0.25 * (1.0 - math.tanh(0.5 * math.log(geom.eps_sub / geom.eps_super))) * (
        1.0 + math.log(u * u)
    ) / (1.0 + 10.0 / u)
    q_sub = min(max(q_sub, 0.0), 1.0)
    q_super = 1.0 - q_sub
    eps_eff_mixed = geom.eps_sub * q_sub + geom.eps_super * q_super
    return q_sub, q_super, eps_eff_mixed


def line_params(
    geom: Geometry,
    zs_strip: SurfaceImpedance,
    zs_ground: SurfaceImpedance,
    alpha_ki: float,
    frequency: float,
) -> LineParams:
    """Distributed parameters of the superconducting loaded line.

    L' adds the thin-film sheet inductances of strip (scaled by alpha_ki)
    and ground, each divided by the strip width (uniform ground current over
    the strip width). R' and G' are assembled from the conductor and
    dielectric attenuation constants with the real baseline impedance, then
    z0 and gamma both follow from the full RLGC expressions so that
    gamma*z0 = R' + j*omega*L' holds identically.
    """
    if frequency <= 0.0:
        raise DomainError(f"frequency must be > 0, got {frequency}", op="microstrip.line_params")
    base = hj_baseline(geom)
    q_sub, q_super, eps_eff_mixed = mixed_eps_and_fill(geom)
    omega = 2.0 * math.pi * frequency

    lam_s = penetration_depth(zs_strip, frequency)
    lam_g = penetration_depth(zs_ground, frequency)
    lsurf_s = surface_inductance_thin_film(lam_s, geom.strip_t)
    lsurf_g = surface_inductance_thin_film(lam_g, geom.ground_t)
    l_per_m = base.l_geom + lsurf_s * alpha_ki / geom.width + lsurf_g / geom.width

    alpha_d = (
        math.pi * frequency / C0 * math.sqrt(eps_eff_mixed) * (q_sub * geom.tand_sub + q_super * geom.tand_super)
    )
    alpha_c = (zs_strip.rs / geom.width + zs_ground.rs / geom.width) / base.z0_base * math.sqrt(eps_eff_mixed)
    r_per_m = alpha_c * base.z0_base
    g_per_m = 2.0 * alpha_d / base.z0_base

    series = complex(r_per_m, omega * l_per_m)
    shunt = complex(g_per_m, omega * base.c_per_m)
    z0 = cmath.sqrt(series / shunt)
    gamma = cmath.sqrt(series * shunt)
    return LineParams(
        r_per_m=r_per_m,
        l_per_m=l_per_m,
        g_per_m=g_per_m,
        c_per_m=base.c_per_m,
        z0=z0,
        gamma=gamma,
        eps_eff0=base.eps_eff0,
        eps_eff_mixed=eps_eff_mixed,
    )
