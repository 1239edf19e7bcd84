"""Critical-field extraction from Tc(B) data: linear estimate with the 0.69
slope rule, Abrikosov-Gorkov pair-breaking fit via the digamma relation, and
the coherence length from the fitted field."""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma

from .constants import PHI0
from .errors import DomainError, FitConvergenceError
from .analysis import OptimizerConfig, nelder_mead

# ln(Tc/Tc0) = psi(1/2) - psi(1/2 + alpha/(Tc/Tc0)); Tc reaches zero at
# alpha = exp(psi(1/2)), so scaling alpha by that constant makes the fit
# parameter the physical zero-Tc field.
PSI_HALF = float(digamma(0.5))
ALPHA_CRITICAL = math.exp(PSI_HALF)

WHH_FACTOR = 0.69


@dataclass(frozen=True)
class TcFieldData:
    """(B, Tc) samples; fields in tesla, temperatures in kelvin."""

    b: np.ndarray
    tc: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        object.__setattr__(self, "tc", np.asarray(self.tc, dtype=float))
        if self.b.ndim != 1 or self.b.shape != self.tc.shape:
            raise DomainError("b and tc must be 1-D arrays of equal length", op="critical_field.TcFieldData")
        if len(self.b) < 2:
            raise DomainError("need at least 2 points", op="critical_field.TcFieldData")
        if np.any(self.b < 0.0):
            raise DomainError("fields must be >= 0", op="critical_field.TcFieldData")
        if np.any(self.tc <= 0.0):
            raise DomainError("critical temperatures must be > 0", op="critical_field.TcFieldData")
        if len(np.unique(self.b)) != len(self.b):
            raise DomainError("field values must be unique", op="critical_field.TcFieldData")


@dataclass(frozen=True)
class AgFit:
    """Zero-field Tc and the field at which Tc is driven to zero."""

    tc0: float
    bc_zero_tc: float

    def __post_init__(self):
        if self.tc0 <= 0.0 or self.bc_zero_tc <= 0.0:
            raise DomainError("tc0 and bc_zero_tc must be positive", op="critical_field.AgFit")


class FitReport(NamedTuple):
    fit: AgFit
    residual: float
    iterations: int


class LinearIntercepts(NamedTuple):
    tc_intercept: float
    b_intercept: float
    slope: float


def ag_tc(b: float, fit: AgFit, raw_alpha: bool = False) -> float:
    """Tc at field b from the pair-breaking relation, by bracketed root
    finding in t = Tc/Tc0.

    With raw_alpha the pair-breaking parameter is b/bc directly; by default
    it is scaled by exp(psi(1/2)) so that Tc(bc_zero_tc) = 0. Fields beyond
    the zero-Tc point return 0.
    """
    if b < 0.0:
        raise DomainError(f"field must be >= 0, got {b}", op="critical_field.ag_tc")
    if b == 0.0:
        return fit.tc0
    alpha = (b / fit.bc_zero_tc) if raw_alpha else ALPHA_CRITICAL * b / fit.bc_zero_tc
    if alpha >= ALPHA_CRITICAL:
        return 0.0

    def resid(t):
        return math.log(t) - PSI_HALF + float(digamma(0.5 + alpha / t))

    # resid < 0 as t -> 0+ (since alpha < alpha_critical) and > 0 at t = 1
    t_root = brentq(resid, 1e-12, 1.0, xtol=1e-15, rtol=8.9e-16)
    return fit.tc0 * t_root


def ag_fit(data: TcFieldData, tc0: float, config: OptimizerConfig | None = None) -> FitReport:
    """Least-squares fit of the zero-Tc field with tc0 held fixed.

    One-dimensional Nelder-Mead over bc_zero_tc, started from the linear
    extrapolation of the data scaled by the slope-rule factor.
    """
    if tc0 <= 0.0:
        raise DomainError(f"tc0 must be > 0, got {tc0}", op="critical_field.ag_fit")
    if np.any(data.tc > tc0):
        raise DomainError("data contains Tc above tc0", op="critical_field.ag_fit")
    if config is None:
        config = OptimizerConfig(max_iters=400, f_tol=1e-14, simplex_scale=0.2)

    lin = linear_fit_intercepts(data)
    start = max(lin.b_intercept * WHH_FACTOR, float(np.max(data.b)) * 1.05, 1e-6)

    def ssr(x):
        bc = abs(x[0])
        if bc <= 0.0:
            return float("inf")
        fit = AgFit(tc0=tc0, bc_zero_tc=bc)
        model = np.array([ag_tc(float(bi), fit) for bi in data.b])
        return float(np.sum((model - data.tc) ** 2))

    result = nelder_mead(ssr, np.array([start]), config)
    if result.iterations >= config.max_iters:
        raise FitConvergenceError(
            f"no convergence after {result.iterations} iterations (best bc = {abs(result.point[0]):.6g} T)",
            op="critical_field.ag_fit",
            best=AgFit(tc0=tc0, bc_zero_tc=abs(float(result.point[0]))),
            best_value=result.value,
        )
    return FitReport(AgFit(tc0=tc0, bc_zero_tc=abs(float(result.point[0]))), result.value, result.iterations)


def whh_bc0(tc0: float, slope_abs: float) -> float:
    """Zero-temperature critical field 0.69*Tc*|dBc2/dT| from the slope at Tc."""
    if tc0 <= 0.0 or slope_abs < 0.0:
        raise DomainError("tc0 must be > 0 and slope_abs >= 0", op="critical_field.whh_bc0")
    return WHH_FACTOR * tc0 * slope_abs


def linear_fit_intercepts(data: TcFieldData) -> LinearIntercepts:
    """Ordinary least squares of b against tc; returns both axis intercepts
    and the absolute slope."""
    tc = data.tc
    b = data.b
    var = float(np.sum((tc - tc.mean()) ** 2))
    if var == 0.0:
        raise DomainError("degenerate data: all tc equal", op="critical_field.linear_fit_intercepts")
    slope = float(np.sum((tc - tc.mean()) * (b - b.mean()))) / var
    if slope == 0.0:
        raise DomainError("degenerate data: zero slope", op="critical_field.linear_fit_intercepts")
    b0 = float(b.mean() - slope * tc.mean())
    return LinearIntercepts(tc_intercept=-b0 / slope, b_intercept=b0, slope=abs(slope))


def coherence_length(bc: float) -> float:
    """Ginzburg-Landau coherence length [m] from Bc = Phi0/(2*pi*xi^2)."""
    if bc <= 0.0:
        raise DomainError(f"bc must be > 0, got {bc}", op="critical_field.coherence_length")
    return math.sqrt(PHI0 / (2.0 * math.pi * bc))


def load_tc_field_csv(path) -> TcFieldData:
    """Read (B, Tc) samples from a CSV with header b_tesla,tc_kelvin.

    Lines starting with ``#`` are comments. Malformed rows raise DomainError
    naming the line.
    """
    b = []
    tc = []
    header_seen = False
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not header_seen:
                if line != "b_tesla,tc_kelvin":
                    raise DomainError(
                        f"line {line_no}: expected header 'b_tesla,tc_kelvin', got {line!r}",
                        op="critical_field.load_tc_field_csv",
                    )
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DomainError(
                    f"line {line_no}: expected 2 columns, got {len(parts)}",
                    op="critical_field.load_tc_field_csv",
                )
            try:
                b.append(float(parts[0]))
                tc.append(float(parts[1]))
            except ValueError:
                raise DomainError(
                    f"line {line_no}: non-numeric value in {line!r}",
                    op="critical_field.load_tc_field_csv",
                ) from None
    return TcFieldData(np.array(b), np.array(tc))
