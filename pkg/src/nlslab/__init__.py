"""Pseudospectral laboratory for the defocusing NLS on periodic boxes."""

from .checkpoint import read_checkpoint, write_checkpoint
from .config import RunConfig, parse_config, parse_config_text, write_config
from .data import (
    RoughSpec,
    exact_free_gaussian,
    free_gaussian_sup_norm,
    gaussian_profile,
    measured_regularity,
    rough_sample,
)
from .dynamics import (
    NlsModel,
    TimeSeries,
    energy,
    free_propagate,
    kinetic_energy,
    mass,
    nonlinear_phase,
    potential_energy,
    scale_transform,
    simulate,
    strang_step,
)
from .errors import (
    BlowUpError,
    BoundaryMassError,
    CheckpointError,
    ConfigError,
    DegenerateInputError,
    IndivisibleSampleError,
    NlsLabError,
    RevivalContaminationError,
    SideMismatchError,
    SupportOverflowError,
)
from .grid import (
    Field,
    GridSpec,
    LpBand,
    bernstein_ratio,
    boundary_mass_fraction,
    dyadic_ladder,
    frac_deriv,
    lebesgue_norm,
    lp_project,
    make_grid,
    sobolev_norm,
    to_physical,
    to_spectral,
    transform,
)
from .imethod import (
    IMultiplierSpec,
    ZiNormSpec,
    apply_I,
    commutator_norm,
    energy_increment_direct,
    energy_increment_ibp,
    i_multiplier,
    modified_energy,
    modified_energy_parts,
    nonlinear_field,
    sandwich_ratios,
    zi_norm,
)
from .spacetime import (
    AdmissiblePair,
    MorawetzTracker,
    SpaceTimeAccumulator,
    accumulate,
    dispersive_ratio,
    is_admissible,
    morawetz_ratio,
    split_by_smallness,
)
from .thresholds import ThresholdReport, critical_index, growth_exponent, positive_root, thresholds

__version__ = "0.1.0"
