"""SNR-improvement model of the parametric amplifier cascaded with a second
amplifier, noise-temperature arithmetic for lossy cascades, and the vortex
entry field of a narrow strip."""

import math
from dataclasses import dataclass

import numpy as np

from .constants import H, KB, PHI0
from .errors import DomainError


@dataclass(frozen=True)
class NoiseModel:
    """Fixed amplifier gain, second-stage noise temperature, noise floor and
    pump frequency of the four-wave-mixing chain."""

    gain_db: float
    t_second: float
    t_min: float
    f_pump: float

    def __post_init__(self):
        if not math.isfinite(self.gain_db):
            raise DomainError("gain_db must be finite", op="noise.NoiseModel")
        if self.t_second <= 0.0:
            raise DomainError(f"t_second must be > 0, got {self.t_second}", op="noise.NoiseModel")
        if self.t_min < 0.0:
            raise DomainError(f"t_min must be >= 0, got {self.t_min}", op="noise.NoiseModel")
        if self.f_pump <= 0.0:
            raise DomainError(f"f_pump must be > 0, got {self.f_pump}", op="noise.NoiseModel")


@dataclass(frozen=True)
class StripGeometry:
    """Width and coherence length entering the vortex stability field."""

    width: float
    coherence_len: float

    def __post_init__(self):
        if self.width <= 0.0 or self.coherence_len <= 0.0:
            raise DomainError("width and coherence_len must be positive", op="noise.StripGeometry")


def occupation(frequency: float, temperature: float) -> float:
    """Bose-Einstein occupation 1/(exp(h*f/kB*T) - 1); zero at T = 0."""
    if frequency <= 0.0:
        raise DomainError(f"frequency must be > 0, got {frequency}", op="noise.occupation")
    if temperature < 0.0:
        raise DomainError(f"temperature must be >= 0, got {temperature}", op="noise.occupation")
    if temperature == 0.0:
        return 0.0
    x = H * frequency / (KB * temperature)
    if x > 40.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def port_noise_temperature(frequency: float, temperature: float) -> float:
    """Noise temperature (h*f/kB)*(1 + 2n) of one port, vacuum term included."""
    return H * frequency / KB * (1.0 + 2.0 * occupation(frequency, temperature))


def snr_improvement_from_noise_temp(t_p: float, gain_db: float, t_second: float) -> float:
    """SNR improvement 10*log10(1/(T_p/T_2nd + 1/G)) for a given amplifier
    noise temperature T_p; equals gain_db exactly in the T_p = 0 limit."""
    if t_second <= 0.0:
        raise DomainError(f"t_second must be > 0, got {t_second}", op="noise.snr_improvement_from_noise_temp")
    if t_p < 0.0:
        raise DomainError(f"t_p must be >= 0, got {t_p}", op="noise.snr_improvement_from_noise_temp")
    g_lin = 10.0 ** (gain_db / 10.0)
    return 10.0 * math.log10(1.0 / (t_p / t_second + 1.0 / g_lin))


def delta_snr(model: NoiseModel, f_signal: float, temperature: float) -> float:
    """SNR improvement [dB] at a signal frequency and stage temperature.

    The amplifier noise temperature is the sum of the signal- and
    idler-port contributions, both evaluated at T_eff = max(T, T_min); the
    idler sits at 2*f_pump - f_signal.
    """
    if f_signal <= 0.0:
        raise DomainError(f"f_signal must be > 0, got {f_signal}", op="noise.delta_snr")
    if temperature < 0.0:
        raise DomainError(f"temperature must be >= 0, got {temperature}", op="noise.delta_snr")
    f_idler = 2.0 * model.f_pump - f_signal
    if f_idler <= 0.0:
        raise DomainError(
            f"f_signal = {f_signal:.6g} Hz >= 2*f_pump: idler frequency not positive",
            op="noise.delta_snr",
        )
    t_eff = max(temperature, model.t_min)
    t_p = port_noise_temperature(f_signal, t_eff) + port_noise_temperature(f_idler, t_eff)
    return snr_improvement_from_noise_temp(t_p, model.gain_db, model.t_second)


def delta_snr_band_mean(
    model: NoiseModel,
    temperature: float,
    f_min: float = 4e9,
    f_max: float = 8e9,
    n_points: int = 101,
) -> float:
    """Band-averaged SNR improvement (alternative to the single-frequency
    figure); arithmetic mean of the dB values over a uniform grid."""
    if f_max <= f_min:
        raise DomainError("f_max must exceed f_min", op="noise.delta_snr_band_mean")
    grid = np.linspace(f_min, f_max, n_points)
    return float(np.mean([delta_snr(model, float(fs), temperature) for fs in grid]))


def cascade_loss_for_temp(t_amp: float, t_effective: float, t_attenuator: float) -> float:
    """Loss [dB] in front of an amplifier that raises its noise temperature
    from t_amp to t_effective, with the attenuator thermalized at
    t_attenuator: solves (L - 1)*t_att + L*t_amp = t_eff for linear L."""
    if t_amp < 0.0 or t_attenuator < 0.0:
        raise DomainError("temperatures must be >= 0", op="noise.cascade_loss_for_temp")
    if t_effective <= t_amp:
        raise DomainError(
            f"t_effective = {t_effective:.6g} K must exceed t_amp = {t_amp:.6g} K",
            op="noise.cascade_loss_for_temp",
        )
    denom = t_amp + t_attenuator
    if denom <= 0.0:
        raise DomainError("t_amp + t_attenuator must be > 0", op="noise.cascade_loss_for_temp")
    l_lin = (t_effective + t_attenuator) / denom
    if l_lin < 1.0:
        raise DomainError("no loss >= 0 dB solves the cascade equation", op="noise.cascade_loss_for_temp")
    return 10.0 * math.log10(l_lin)


def vortex_entry_field(strip: StripGeometry) -> float:
    """Field [T] above which vortices are stable at the center of the strip:
    (2*Phi0/(pi*W^2)) * ln(2W/(pi*xi))."""
    if strip.width <= strip.coherence_len:
        raise DomainError(
            f"width {strip.width:.6g} m must exceed coherence length {strip.coherence_len:.6g} m",
            op="noise.vortex_entry_field",
        )
    arg = 2.0 * strip.width / (math.pi * strip.coherence_len)
    if arg <= 1.0:
        raise DomainError(
            "strip too narrow: log argument 2W/(pi*xi) must exceed 1",
            op="noise.vortex_entry_field",
        )
    return 2.0 * PHI0 / (math.pi * strip.width**2) * math.log(arg)
