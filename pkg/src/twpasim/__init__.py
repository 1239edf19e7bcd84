"""twpasim: kinetic-inductance TWPA transmission simulator and analysis toolkit."""

__version__ = "0.1.0"

from .materials import (
    ComplexConductivity,
    Environment,
    Material,
    SurfaceImpedance,
    gap,
    mb_conductivity,
    penetration_depth,
    surface_impedance,
    surface_inductance_thin_film,
)
from .microstrip import Geometry, LineParams, hj_baseline, line_params, mixed_eps_and_fill
from .network import (
    CellLayout,
    Spectrum,
    TwoPort,
    abcd_line,
    abcd_stub,
    bandgap_center,
    cascade_power,
    s21_from_abcd,
    save_spectrum,
    spectrum_sweep,
    unit_cell,
)
from .noise import (
    NoiseModel,
    StripGeometry,
    cascade_loss_for_temp,
    delta_snr,
    delta_snr_band_mean,
    occupation,
    vortex_entry_field,
)
from .critical_field import (
    AgFit,
    TcFieldData,
    ag_fit,
    ag_tc,
    coherence_length,
    linear_fit_intercepts,
    whh_bc0,
)
from .analysis import (
    FomResult,
    OptimizerConfig,
    band_stats,
    bandwidth_3db,
    dsnr_mode,
    extract_fom,
    load_spectrum,
    nelder_mead,
)
from .config import Config, default_config, load_config

__all__ = [name for name in dir() if not name.startswith("_")]
