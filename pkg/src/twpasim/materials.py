"""Superconductor microphysics: gap versus temperature and magnetic field,
Mattis-Bardeen complex conductivity, and thin-film surface impedance.

Units are SI throughout: kelvin, tesla, hertz, joule for energies, S/m for
conductivities, ohm per square for surface impedances. The conductivity
integrals work in gap units (E/Delta, hbar*omega/Delta, kB*T/Delta) and are
only evaluated below the pair-breaking threshold hbar*omega < 2*Delta.
"""

import math
from dataclasses import dataclass

from . import _kernels
from .constants import HBAR, KB, MU0
from .errors import DomainError, UnsupportedRegimeError

# Below this reduced temperature the exact T = 0 occupation factors are used
# (sigma1 = 0 analytically). Callers clamp at 1e-4 of Tc, which maps to a
# reduced temperature near 5.7e-5 for a gap ratio of 3.5.
T_TILDE_ZERO = 1e-5

# Default relative tolerance of the adaptive quadrature.
QUAD_RTOL = 1e-9

# Default magnitude added under the square roots in the regularized
# cross-check mode of mb_conductivity.
REG_EPS = 1e-12


@dataclass(frozen=True)
class Material:
    """Superconducting film parameters.

    gap_ratio is 2*Delta0/(kB*Tc); bc_perp_eff and bc_par_eff are the
    effective critical fields entering the gap-suppression factors, and
    alpha_ki scales the film's kinetic inductance contribution.
    """

    name: str
    tc: float
    gap_ratio: float
    sigma_n: float
    thickness: float
    bc_perp_eff: float
    bc_par_eff: float
    alpha_ki: float = 1.0

    def __post_init__(self):
        if self.tc <= 0.0:
            raise DomainError(f"Tc must be positive, got {self.tc}", op="materials.Material")
        if self.gap_ratio <= 0.0:
            raise DomainError(f"gap_ratio must be positive, got {self.gap_ratio}", op="materials.Material")
        if self.sigma_n <= 0.0:
            raise DomainError(f"sigma_n must be positive, got {self.sigma_n}", op="materials.Material")
        if self.thickness <= 0.0:
            raise DomainError(f"thickness must be positive, got {self.thickness}", op="materials.Material")
        if self.bc_perp_eff <= 0.0 or self.bc_par_eff <= 0.0:
            raise DomainError("effective critical fields must be positive", op="materials.Material")
        if self.alpha_ki <= 0.0:
            raise DomainError(f"alpha_ki must be positive, got {self.alpha_ki}", op="materials.Material")

    @property
    def delta0(self):
        """Zero-temperature gap [J]."""
        return 0.5 * self.gap_ratio * KB * self.tc


@dataclass(frozen=True)
class Environment:
    """Operating point: temperature and applied field components."""

    temperature: float
    b_perp: float = 0.0
    b_par: float = 0.0

    def __post_init__(self):
        if self.temperature < 0.0:
            raise DomainError(f"temperature must be >= 0, got {self.temperature}", op="materials.Environment")
        if self.b_perp < 0.0 or self.b_par < 0.0:
            raise DomainError("field magnitudes must be >= 0", op="materials.Environment")

    @property
    def is_combined_field(self):
        """True when both field components are nonzero; gap suppression then
        multiplies the two factors, which extrapolates beyond the
        single-orientation suppression laws."""
        return self.b_perp > 0.0 and self.b_par > 0.0


@dataclass(frozen=True)
class ComplexConductivity:
    """Complex conductivity normalized to the normal state, sigma1 - j*sigma2."""

    sigma1_over_sn: float
    sigma2_over_sn: float


@dataclass(frozen=True)
class SurfaceImpedance:
    """Surface impedance Zs = rs + j*xs in ohm per square."""

    rs: float
    xs: float

    @property
    def z(self):
        return complex(self.rs, self.xs)


def gap(material: Material, env: Environment, orientation: str = "both") -> float:
    """Superconducting gap [J] at the given temperature and field.

    Temperature dependence: Delta0 * tanh(1.74*sqrt(Tc/T - 1)), zero at and
    above Tc. Field suppression: linear (1 - B_perp/Bc_perp) out of plane,
    Ginzburg-Landau sqrt(1 - (B_par/Bc_par)^2) in plane; zero at and above
    the effective critical field.

    orientation selects which suppression factor applies: "perp", "par", or
    "both" (the product; reduces to the single-field laws when the other
    component is zero, and is an extrapolation when both are nonzero).
    """
    if env.temperature >= material.tc:
        return 0.0
    if env.temperature <= 0.0:
        thermal = 1.0
    else:
        thermal = math.tanh(1.74 * math.sqrt(material.tc / env.temperature - 1.0))

    if env.b_perp < material.bc_perp_eff:
        f_perp = 1.0 - env.b_perp / material.bc_perp_eff
    else:
        f_perp = 0.0
    if env.b_par < material.bc_par_eff:
        f_par = math.sqrt(1.0 - (env.b_par / material.bc_par_eff) ** 2)
    else:
        f_par = 0.0

    if orientation == "perp":
        field = f_perp
    elif orientation == "par":
        field = f_par
    elif orientation == "both":
        field = f_perp * f_par
    else:
        raise DomainError(f"unknown orientation {orientation!r}", op="materials.gap")
    return material.delta0 * thermal * field


def mb_conductivity(
    omega_tilde: float,
    t_tilde: float,
    method: str = "substitution",
    reg_eps: float = REG_EPS,
    rtol: float = QUAD_RTOL,
) -> ComplexConductivity:
    """Mattis-Bardeen sigma1/sigma_n and sigma2/sigma_n below pair breaking.

    omega_tilde = hbar*omega/Delta and t_tilde = kB*T/Delta. Only
    omega_tilde < 2 is supported; the pair-breaking branch that opens above
    is deliberately not modeled and raises UnsupportedRegimeError.

    method "substitution" (default) removes the inverse-square-root endpoint
    singularities exactly by cosh/cos substitutions; "regularized" is a
    cross-check mode integrating the raw integrands with ``reg_eps`` added
    under the roots.
    """
    if omega_tilde <= 0.0:
        raise DomainError(f"omega_tilde must be > 0, got {omega_tilde}", op="materials.mb_conductivity")
    if t_tilde < 0.0:
        raise DomainError(f"t_tilde must be >= 0, got {t_tilde}", op="materials.mb_conductivity")
    if omega_tilde >= 2.0:
        raise UnsupportedRegimeError(
            f"omega_tilde = {omega_tilde:.6g} >= 2: pair-breaking regime not modeled",
            op="materials.mb_conductivity",
        )

    t_eff = 0.0 if t_tilde < T_TILDE_ZERO else t_tilde
    if method == "substitution":
        s1 = 0.0 if t_eff == 0.0 else _kernels.sigma1_sub(omega_tilde, t_eff, rtol)
        s2 = _kernels.sigma2_sub(omega_tilde, t_eff, rtol)
    elif method == "regularized":
        s1 = 0.0 if t_eff == 0.0 else _kernels.sigma1_reg(omega_tilde, t_eff, reg_eps, rtol)
        s2 = _kernels.sigma2_reg(omega_tilde, t_eff, reg_eps, rtol)
    else:
        raise DomainError(f"unknown method {method!r}", op="materials.mb_conductivity")
    # the integrands are non-negative; clip quadrature round-off
    return ComplexConductivity(max(s1, 0.0), max(s2, 0.0))


def normal_skin_impedance(sigma_n: float, frequency: float) -> SurfaceImpedance:
    """Normal-metal skin impedance sqrt(j*omega*mu0/sigma_n)."""
    omega = 2.0 * math.pi * frequency
    r = math.sqrt(omega * MU0 / (2.0 * sigma_n))
    return SurfaceImpedance(r, r)


def surface_impedance(
    material: Material,
    env: Environment,
    frequency: float,
    orientation: str = "both",
) -> SurfaceImpedance:
    """Bulk surface impedance Zs = sqrt(j*omega*mu0/(sigma1 - j*sigma2)).

    In the fully normal state (gap = 0) this is the normal skin impedance.
    The same limit is returned when hbar*omega >= 2*Delta, where the
    quadrature regime ends but sigma1 -> sigma_n and sigma2 -> 0 anyway;
    this keeps the impedance continuous through the transition.
    """
    if frequency <= 0.0:
        raise DomainError(f"frequency must be > 0, got {frequency}", op="materials.surface_impedance")
    omega = 2.0 * math.pi * frequency
    delta = gap(material, env, orientation)
    if delta <= 0.0:
        return normal_skin_impedance(material.sigma_n, frequency)

    omega_tilde = HBAR * omega / delta
    if omega_tilde >= 2.0:
        return normal_skin_impedance(material.sigma_n, frequency)

    if env.temperature < 1e-4 * material.tc:
        t_tilde = 0.0
    else:
        t_tilde = KB * env.temperature / delta
    cond = mb_conductivity(omega_tilde, t_tilde)
    sigma = (cond.sigma1_over_sn - 1j * cond.sigma2_over_sn) * material.sigma_n
    zs = (1j * omega * MU0 / sigma) ** 0.5
    return SurfaceImpedance(zs.real, zs.imag)


def penetration_depth(zs: SurfaceImpedance, frequency: float) -> float:
    """Magnetic penetration depth [m] from the surface reactance."""
    if frequency <= 0.0:
        raise DomainError(f"frequency must be > 0, got {frequency}", op="materials.penetration_depth")
    return zs.xs / (2.0 * math.pi * frequency * MU0)


def surface_inductance_thin_film(lam: float, thickness: float) -> float:
    """Sheet inductance [H/sq] mu0*lambda*coth(t/lambda) of a film of
    thickness t. Tends to mu0*lambda for thick films and mu0*lambda^2/t in
    the thin-film limit; zero penetration depth gives zero."""
    if thickness <= 0.0:
        raise DomainError(f"thickness must be > 0, got {thickness}", op="materials.surface_inductance_thin_film")
    if lam < 0.0:
        raise DomainError(f"penetration depth must be >= 0, got {lam}", op="materials.surface_inductance_thin_film")
    if lam == 0.0:
        return 0.0
    return MU0 * lam / math.tanh(thickness / lam)
