"""ABCD two-port building blocks, cascade of the stub-loaded unit cell, and
S21 spectra of the full device including the photonic stopband."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ModelError, StubResonanceError, SweepError
from .materials import Environment, Material, surface_impedance
from .microstrip import Geometry, LineParams, line_params

SPECTRUM_KINDS = ("s21_complex", "s21_db", "gain_db", "dsnr_db", "noise_db")

# |cos(beta*Ls)| below this counts as sitting on a stub resonance
STUB_RESONANCE_COS = 1e-12

DB_FLOOR = -300.0  # dB value substituted for |S21| = 0


@dataclass(frozen=True)
class TwoPort:
    """Chain (ABCD) matrix of a two-port; reciprocal elements have det = 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def identity(cls):
        return cls(1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j)

    def cascade(self, other: "TwoPort") -> "TwoPort":
        """Matrix product self @ other (self on the input side)."""
        return TwoPort(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)


@dataclass(frozen=True)
class CellLayout:
    """Stub spacing d, stub count and cell count, and the sinusoidal stub
    length modulation L_i = l0 + la*sin(2*pi*i/n_stubs)."""

    stub_spacing: float
    n_stubs: int
    n_cells: int
    l0: float
    la: float

    def __post_init__(self):
        if self.stub_spacing <= 0.0 or self.l0 <= 0.0 or self.la <= 0.0:
            raise DomainError("layout lengths must be positive", op="network.CellLayout")
        if self.n_stubs < 1 or self.n_cells < 1:
            raise DomainError("n_stubs and n_cells must be >= 1", op="network.CellLayout")

    def stub_lengths(self) -> np.ndarray:
        i = np.arange(1, self.n_stubs + 1)
        return self.l0 + self.la * np.sin(2.0 * np.pi * i / self.n_stubs)


@dataclass
class Spectrum:
    """Frequency grid plus complex S-parameter or real dB values."""

    frequencies: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.frequencies = np.asarray(self.frequencies, dtype=float)
        if self.kind == "s21_complex":
            self.values = np.asarray(self.values, dtype=complex)
        else:
            self.values = np.asarray(self.values, dtype=float)
        if self.kind not in SPECTRUM_KINDS:
            raise DomainError(f"unknown spectrum kind {self.kind!r}", op="network.Spectrum")
        if self.frequencies.ndim != 1 or self.values.shape != self.frequencies.shape:
            raise DomainError("frequencies and values must be 1-D arrays of equal length", op="network.Spectrum")
        if len(self.frequencies) and not np.all(np.diff(self.frequencies) > 0.0):
            raise DomainError("frequency grid must be strictly increasing", op="network.Spectrum")

    def values_db(self) -> np.ndarray:
        """Values as dB; converts complex S21 to 20*log10|S21|."""
        if self.kind == "s21_complex":
            mag = np.abs(self.values)
            out = np.full(mag.shape, DB_FLOOR)
            ok = mag > 0.0
            out[ok] = 20.0 * np.log10(mag[ok])
            return np.maximum(out, DB_FLOOR)
        return self.values.copy()


def abcd_line(line: LineParams, length: float) -> TwoPort:
    """Transmission line segment: cosh/sinh chain matrix (det = 1 exactly)."""
    if length < 0.0:
        raise DomainError(f"length must be >= 0, got {length}", op="network.abcd_line")
    gl = line.gamma * length
    ch = cmath.cosh(gl)
    sh = cmath.sinh(gl)
    return TwoPort(ch, line.z0 * sh, sh / line.z0, ch)


def abcd_stub(line: LineParams, stub_len: float, use_complex_beta: bool = False) -> TwoPort:
    """Open capacitive stub pair as a shunt admittance Y = j*(2/z0)*tan(beta*Ls).

    beta is the real phase constant Im(gamma) by default; with
    use_complex_beta the full gamma/j is used inside the tangent (adds stub
    loss; off by default).
    """
    if stub_len < 0.0:
        raise DomainError(f"stub_len must be >= 0, got {stub_len}", op="network.abcd_stub")
    if use_complex_beta:
        beta_l = (line.gamma / 1j) * stub_len
    else:
        beta_l = line.gamma.imag * stub_len
    if abs(cmath.cos(beta_l)) < STUB_RESONANCE_COS:
        raise StubResonanceError(
            f"stub of length {stub_len:.6g} m sits on a tan resonance (beta*Ls = {beta_l:.6g})",
            op="network.abcd_stub",
            stub_len=stub_len,
        )
    y = 1j * 2.0 / line.z0 * cmath.tan(beta_l)
    return TwoPort(1.0 + 0.0j, 0.0j, y, 1.0 + 0.0j)


def unit_cell(line: LineParams, layout: CellLayout, frequency: float, use_complex_beta: bool = False) -> TwoPort:
    """One modulated unit cell: a leading half segment, then for each stub a
    shunt stub followed by a full segment."""
    try:
        cell = abcd_line(line, 0.5 * layout.stub_spacing)
        segment = abcd_line(line, layout.stub_spacing)
        for ls in layout.stub_lengths():
            cell = cell.cascade(abcd_stub(line, float(ls), use_complex_beta)).cascade(segment)
    except StubResonanceError as exc:
        raise StubResonanceError(
            f"{exc} at frequency {frequency:.6g} Hz",
            op="network.unit_cell",
            frequency=frequency,
            stub_len=exc.stub_len,
        ) from exc
    return cell


def cascade_power(cell: TwoPort, n: int) -> TwoPort:
    """cell**n by exponentiation-by-squaring; n = 0 gives the identity."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}", op="network.cascade_power")
    result = TwoPort.identity()
    base = cell
    while n > 0:
        if n & 1:
            result = result.cascade(base)
        n >>= 1
        if n > 0:
            base = base.cascade(base)
    return result


def s21_from_abcd(total: TwoPort, z_env: float = 50.0) -> complex:
    """S21 = 2/(A + B/Z + C*Z + D) in a real reference impedance Z."""
    if z_env <= 0.0:
        raise DomainError(f"z_env must be > 0, got {z_env}", op="network.s21_from_abcd")
    return 2.0 / (total.a + total.b / z_env + total.c * z_env + total.d)


def line_at_frequency(
    strip: Material,
    ground: Material,
    geom: Geometry,
    env: Environment,
    frequency: float,
    orientation: str = "both",
) -> LineParams:
    """Full per-frequency pipeline from material state to line parameters."""
    zs_s = surface_impedance(strip, env, frequency, orientation)
    zs_g = surface_impedance(ground, env, frequency, orientation)
    return line_params(geom, zs_s, zs_g, strip.alpha_ki, frequency)


def device_s21(
    line: LineParams,
    layout: CellLayout,
    frequency: float,
    z_env: float = 50.0,
    use_complex_beta: bool = False,
) -> complex:
    """S21 of the n_cells cascade at one frequency (hot kernel path).

    Stub resonances are checked beforehand so the kernel itself never has to
    raise.
    """
    beta = line.gamma / 1j if use_complex_beta else complex(line.gamma.imag)
    if np.any(np.abs(np.cos(beta * layout.stub_lengths())) < STUB_RESONANCE_COS):
        raise StubResonanceError(
            f"stub resonance at frequency {frequency:.6g} Hz",
            op="network.device_s21",
            frequency=frequency,
        )
    return complex(
        _kernels.abcd_chain_s21(
            complex(line.gamma),
            complex(line.z0),
            beta,
            layout.stub_spacing,
            layout.n_stubs,
            layout.l0,
            layout.la,
            layout.n_cells,
            z_env,
        )
    )


def spectrum_sweep(
    materials,
    geom: Geometry,
    layout: CellLayout,
    env: Environment,
    f_grid,
    z_env: float = 50.0,
    orientation: str = "both",
    use_complex_beta: bool = False,
) -> Spectrum:
    """Complex S21 over a frequency grid at fixed temperature and field.

    ``materials`` is the (strip, ground) pair. Each grid point runs the same
    pure pipeline, so the output is independent of evaluation order; failures
    are collected and raised together with their frequencies.
    """
    strip, ground = materials
    f = np.asarray(f_grid, dtype=float)
    if f.ndim != 1 or len(f) == 0:
        raise DomainError("frequency grid must be a non-empty 1-D array", op="network.spectrum_sweep")
    if np.any(f <= 0.0):
        raise DomainError("frequencies must be positive", op="network.spectrum_sweep")
    if not np.all(np.diff(f) > 0.0):
        raise DomainError("frequency grid must be strictly increasing", op="network.spectrum_sweep")

    values = np.empty(len(f), dtype=complex)
    failures = []
    for i, fi in enumerate(f):
        try:
            line = line_at_frequency(strip, ground, geom, env, float(fi), orientation)
            values[i] = device_s21(line, layout, float(fi), z_env, use_complex_beta)
        except ModelError as exc:
            failures.append((float(fi), exc))
    if failures:
        summary = "; ".join(f"{fi:.6g} Hz: {err}" for fi, err in failures[:5])
        raise SweepError(
            f"{len(failures)} of {len(f)} sweep points failed: {summary}",
            op="network.spectrum_sweep",
            failures=failures,
        )
    return Spectrum(f, values, "s21_complex")


def moving_average(x, window: int) -> np.ndarray:
    """Centered moving average; the window is truncated at the array edges."""
    x = np.asarray(x, dtype=float)
    if window < 1 or window % 2 == 0:
        raise DomainError(f"window must be odd and >= 1, got {window}", op="network.moving_average")
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(x)))
    idx = np.arange(len(x))
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, len(x))
    return (csum[hi] - csum[lo]) / (hi - lo)


def bandgap_center(spectrum: Spectrum, min_depth_db: float = 10.0, smooth_window: int = 11):
    """Frequency of minimum smoothed |S21| inside the deepest contiguous dip
    at least ``min_depth_db`` below the smoothed maximum.

    Returns None when no dip that deep exists (flat or shallow spectra).
    """
    db = moving_average(spectrum.values_db(), smooth_window)
    threshold = db.max() - min_depth_db
    if not np.any(db < threshold):
        return None
    return float(spectrum.frequencies[int(np.argmin(db))])


def save_spectrum(spectrum: Spectrum, path, comments=()) -> None:
    """Write a spectrum CSV (header frequency_hz,re,im or frequency_hz,value_db).

    float repr is used so analysis.load_spectrum round-trips bit-exactly.
    A ``# kind = ...`` comment records dB-value semantics.
    """
    lines = [f"# {c}" for c in comments]
    lines.append(f"# kind = {spectrum.kind}")
    if spectrum.kind == "s21_complex":
        lines.append("frequency_hz,re,im")
        for fi, v in zip(spectrum.frequencies, spectrum.values):
            lines.append(f"{float(fi)!r},{float(v.real)!r},{float(v.imag)!r}")
    else:
        lines.append("frequency_hz,value_db")
        for fi, v in zip(spectrum.frequencies, spectrum.values):
            lines.append(f"{float(fi)!r},{float(v)!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
