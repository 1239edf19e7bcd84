"""Physical constants (CODATA 2018 exact/recommended values, SI units)."""

H = 6.62607015e-34            # Planck constant [J s]
HBAR = 1.054571817e-34        # reduced Planck constant [J s]
KB = 1.380649e-23             # Boltzmann constant [J/K]
MU0 = 1.25663706212e-6        # vacuum permeability [H/m]
C0 = 299792458.0              # speed of light [m/s]
PHI0 = 2.067833848e-15        # magnetic flux quantum [Wb]
