"""Scalar gravitational Aharonov-Bohm effect on an orbiting atomic clock.

Orbit -> potential -> AB phase -> modulation index -> Jacobi-Anger sideband
spectrum, with a brute-force synthesis/DFT/estimation check of the
prediction.  Hot loops run in a compiled extension when it is available
(``gravab.BACKEND``); a numpy fallback is used otherwise.
"""

__version__ = "0.1.0"

from gravab._kernels import BACKEND
from gravab.clock import (
    ClockTransition,
    TwoLevelState,
    level_energies,
    propagate_analytic,
    propagate_numerical,
    redshifted_transition_energy,
)
from gravab.missions import builtin_presets, get_preset, ground_relative_shift
from gravab.orbit import (
    OrbitalElements,
    from_apsides,
    radius_exact,
    radius_paper_model,
    solve_kepler_equation,
    time_average_inverse_radius,
)
from gravab.phase import ab_phase, mixing_angle, modulation_index, potential_exact, potential_paper
from gravab.pipeline import RunConfig, run_pipeline
from gravab.spectrum import (
    bessel_j,
    jacobi_anger_spectrum,
    multiplet_energies,
    regime_classify,
    significant_band,
)
from gravab.synthesis import (
    dft,
    estimate_modulation_index,
    extract_sideband_amplitudes,
    nyquist_requirements,
    synthesize_beat,
)
