"""Figure-of-merit extraction from spectra (mode, 3 dB bandwidth regions,
in-band statistics), spectrum CSV loading, and a derivative-free simplex
optimizer."""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NonFiniteObjectiveError, SpectrumFormatError
from .network import Spectrum, moving_average

DEFAULT_BIN_WIDTH_DB = 0.25
DEFAULT_SMOOTH_WINDOW = 11


@dataclass(frozen=True)
class FomResult:
    """Figures of merit of one SNR-improvement spectrum."""

    dsnr_mode: float
    bw_regions: tuple
    bw_total: float
    mean_dsnr_in_bw: float
    mean_gain_in_bw: float
    q25: float
    q75: float


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 500
    f_tol: float = 1e-9
    simplex_scale: object = 0.1  # scalar or per-dimension sequence

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters}", op="analysis.OptimizerConfig")
        if self.f_tol <= 0.0:
            raise DomainError(f"f_tol must be > 0, got {self.f_tol}", op="analysis.OptimizerConfig")


class NMResult(NamedTuple):
    point: np.ndarray
    value: float
    iterations: int


def _parse_header_kind(comment: str):
    body = comment.lstrip("#").strip()
    if body.startswith("kind") and "=" in body:
        return body.split("=", 1)[1].strip()
    return None


def load_spectrum(source, kind: str | None = None) -> Spectrum:
    """Read a spectrum CSV written by network.save_spectrum.

    Accepts a path or a text stream. ``#`` lines are comments; a
    ``# kind = ...`` comment (or the ``kind`` argument, which wins) sets the
    semantic kind of value_db files. Malformed rows, NaNs, and non-increasing
    frequencies raise SpectrumFormatError naming the offending line.
    """
    if hasattr(source, "read"):
        return _load_spectrum_stream(source, kind)
    with open(source, "r", encoding="utf-8") as fh:
        return _load_spectrum_stream(fh, kind)


def _load_spectrum_stream(fh, kind):
    header = None
    header_kind = None
    freqs = []
    rows = []
    n_cols = 0
    for line_no, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            k = _parse_header_kind(line)
            if k is not None:
                header_kind = k
            continue
        if header is None:
            header = line
            if header == "frequency_hz,re,im":
                n_cols = 3
            elif header == "frequency_hz,value_db":
                n_cols = 2
            else:
                raise SpectrumFormatError(
                    f"line {line_no}: unrecognized header {header!r}", op="analysis.load_spectrum", line=line_no
                )
            continue
        parts = line.split(",")
        if len(parts) != n_cols:
            raise SpectrumFormatError(
                f"line {line_no}: expected {n_cols} columns, got {len(parts)}",
                op="analysis.load_spectrum",
                line=line_no,
            )
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise SpectrumFormatError(
                f"line {line_no}: non-numeric value in {line!r}", op="analysis.load_spectrum", line=line_no
            ) from None
        if any(math.isnan(x) or math.isinf(x) for x in nums):
            raise SpectrumFormatError(f"line {line_no}: NaN/inf value", op="analysis.load_spectrum", line=line_no)
        if freqs and nums[0] <= freqs[-1]:
            raise SpectrumFormatError(
                f"line {line_no}: frequency {nums[0]!r} not strictly increasing",
                op="analysis.load_spectrum",
                line=line_no,
            )
        freqs.append(nums[0])
        rows.append(nums[1:])
    if header is None or not rows:
        raise SpectrumFormatError("no data rows found", op="analysis.load_spectrum", line=None)

    f = np.array(freqs)
    if n_cols == 3:
        values = np.array([complex(r, i) for r, i in rows])
        resolved = kind or header_kind or "s21_complex"
    else:
        values = np.array([v[0] for v in rows])
        resolved = kind or header_kind or "dsnr_db"
    return Spectrum(f, values, resolved)


def dsnr_mode(spectrum: Spectrum, bin_width_db: float = DEFAULT_BIN_WIDTH_DB) -> float:
    """Most common value: center of the histogram bin where the cumulative
    distribution is steepest. Bins are centered on multiples of the bin
    width; ties break toward higher dB.
    """
    if spectrum.kind != "dsnr_db":
        raise DomainError(f"expected a dsnr_db spectrum, got {spectrum.kind!r}", op="analysis.dsnr_mode")
    if len(spectrum.values) < 10:
        raise DomainError(f"need at least 10 points, got {len(spectrum.values)}", op="analysis.dsnr_mode")
    idx = np.floor(spectrum.values / bin_width_db + 0.5).astype(np.int64)
    bins, counts = np.unique(idx, return_counts=True)
    winners = bins[counts == counts.max()]
    return float(winners.max() * bin_width_db)


def bandwidth_3db(
    spectrum: Spectrum,
    mode: float,
    smooth_window: int = DEFAULT_SMOOTH_WINDOW,
    threshold_db: float = 3.0,
):
    """Frequency regions where the smoothed spectrum exceeds mode - threshold.

    Returns (regions, total) with regions a tuple of (f_low, f_high) for each
    maximal run above threshold and total their summed width. The region set
    may be empty.
    """
    if spectrum.kind not in ("dsnr_db", "gain_db", "s21_db", "noise_db"):
        raise DomainError(f"expected a dB spectrum, got {spectrum.kind!r}", op="analysis.bandwidth_3db")
    smoothed = moving_average(spectrum.values, smooth_window)
    above = smoothed > mode - threshold_db
    regions = []
    f = spectrum.frequencies
    start = None
    for i, flag in enumerate(above):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            regions.append((float(f[start]), float(f[i - 1])))
            start = None
    if start is not None:
        regions.append((float(f[start]), float(f[-1])))
    total = float(sum(hi - lo for lo, hi in regions))
    return tuple(regions), total


def band_stats(spectrum: Spectrum, regions):
    """Mean and 25th/75th percentiles (linear interpolation) of the raw
    values at grid points inside the regions (bounds inclusive)."""
    regions = tuple(regions)
    if not regions:
        raise DomainError("regions must be non-empty", op="analysis.band_stats")
    f = spectrum.frequencies
    mask = np.zeros(len(f), dtype=bool)
    for lo, hi in regions:
        mask |= (f >= lo) & (f <= hi)
    if not mask.any():
        raise DomainError("no grid points fall inside the regions", op="analysis.band_stats")
    vals = spectrum.values[mask]
    q25, q75 = np.percentile(vals, [25.0, 75.0])
    return float(vals.mean()), float(q25), float(q75)


def extract_fom(
    dsnr_spectrum: Spectrum,
    gain_spectrum: Spectrum | None = None,
    bin_width_db: float = DEFAULT_BIN_WIDTH_DB,
    smooth_window: int = DEFAULT_SMOOTH_WINDOW,
) -> FomResult:
    """Full figure-of-merit pipeline on an SNR-improvement spectrum,
    optionally averaging a gain spectrum over the same bandwidth regions."""
    mode = dsnr_mode(dsnr_spectrum, bin_width_db)
    regions, total = bandwidth_3db(dsnr_spectrum, mode, smooth_window)
    if regions:
        mean_dsnr, q25, q75 = band_stats(dsnr_spectrum, regions)
    else:
        mean_dsnr = q25 = q75 = float("nan")
    mean_gain = float("nan")
    if gain_spectrum is not None and regions:
        mean_gain, _, _ = band_stats(gain_spectrum, regions)
    return FomResult(
        dsnr_mode=mode,
        bw_regions=regions,
        bw_total=total,
        mean_dsnr_in_bw=mean_dsnr,
        mean_gain_in_bw=mean_gain,
        q25=q25,
        q75=q75,
    )


def fom_report(result: FomResult) -> str:
    """Key = value report consumed by the CLI."""
    regions = ";".join(f"{lo!r}:{hi!r}" for lo, hi in result.bw_regions)
    lines = [
        f"dsnr_mode_db = {result.dsnr_mode!r}",
        f"bw_regions_hz = {regions}",
        f"bw_total_hz = {result.bw_total!r}",
        f"mean_dsnr_in_bw_db = {result.mean_dsnr_in_bw!r}",
        f"mean_gain_in_bw_db = {result.mean_gain_in_bw!r}",
        f"q25_db = {result.q25!r}",
        f"q75_db = {result.q75!r}",
    ]
    return "\n".join(lines) + "\n"


def nelder_mead(objective, start, config: OptimizerConfig | None = None) -> NMResult:
    """Nelder-Mead simplex minimization.

    Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
    Terminates when the spread of simplex values drops below f_tol or on
    max_iters. The result is never worse than the best initial vertex.
    Non-finite objective values raise NonFiniteObjectiveError with the point.
    """
    if config is None:
        config = OptimizerConfig()
    x0 = np.asarray(start, dtype=float)
    if x0.ndim != 1 or len(x0) == 0:
        raise DomainError("start must be a non-empty 1-D point", op="analysis.nelder_mead")
    dim = len(x0)
    scale = np.broadcast_to(np.asarray(config.simplex_scale, dtype=float), (dim,))

    def evaluate(x):
        v = float(objective(x))
        if not math.isfinite(v):
            raise NonFiniteObjectiveError(
                f"objective returned {v} at {x.tolist()}", op="analysis.nelder_mead", point=x.copy()
            )
        return v

    simplex = [x0.copy()]
    for i in range(dim):
        v = x0.copy()
        v[i] += scale[i]
        simplex.append(v)
    values = [evaluate(v) for v in simplex]

    iterations = 0
    while iterations < config.max_iters:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] < config.f_tol:
            break
        iterations += 1

        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + (centroid - worst)
        f_r = evaluate(reflected)
        if values[0] <= f_r < values[-2]:
            simplex[-1] = reflected
            values[-1] = f_r
            continue
        if f_r < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_e = evaluate(expanded)
            if f_e < f_r:
                simplex[-1] = expanded
                values[-1] = f_e
            else:
                simplex[-1] = reflected
                values[-1] = f_r
            continue
        contracted = centroid + 0.5 * (worst - centroid)
        f_c = evaluate(contracted)
        if f_c < values[-1]:
            simplex[-1] = contracted
            values[-1] = f_c
            continue
        best = simplex[0]
        simplex = [best] + [best + 0.5 * (v - best) for v in simplex[1:]]
        values = [values[0]] + [evaluate(v) for v in simplex[1:]]

    best_i = int(np.argmin(values))
    return NMResult(simplex[best_i].copy(), values[best_i], iterations)
