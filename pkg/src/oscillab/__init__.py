"""Numerical toolkit for function-space quasi-norms on uniform grids.

Evaluates Lorentz / weak-Lebesgue norms exactly from distribution-function
breakpoints, sweeps cube oscillation functionals (BMO / VMO), computes
difference-quotient smoothness seminorms (Besov, fractional Sobolev, BV),
checks a family of interpolation inequalities with explicit constants, and
measures nonlocal jump-detection energies against analytic ground truth.
"""

from .grid import (
    GridDomain,
    GridFormatError,
    GridFunction,
    k_difference,
    mollify,
    read_grid,
    shift,
    truncate,
    write_grid,
)
from .kernels import KernelFamily, check_tail_vanishing, check_unit_mass
from .measure import (
    DistributionCurve,
    distribution,
    lebesgue_norm,
    lorentz_norm,
    power_identity_check,
    truncated_sup,
    weak_norm,
)
from .oscillation import (
    CubeSweepConfig,
    OscillationResult,
    VmoCurve,
    bmo_seminorm,
    double_average_oscillation,
    dyadic_sizes,
    jn_decay_probe,
    mean_oscillation,
    vmo_modulus,
)
from .report import Report, dump_reports
from .smoothness import (
    GagliardoResult,
    ShiftLattice,
    besov_integral_norm,
    besov_sup_norm,
    besov_sup_norm_weak,
    bv_variation,
    bv_variation_weak,
    gagliardo_seminorm,
    gagliardo_weak_seminorm,
    marchaud_probe,
    modulus_of_continuity,
    sobolev_difference_check,
)
from .jump import (
    EnergyCurve,
    JumpGroundTruth,
    ShapeDescriptor,
    boundary_condition_check,
    box_mask,
    directional_energy,
    energy_sweep,
    ground_truth,
    kernel_energy,
)
from .harness import (
    bmo_ratio_scan,
    char_sandwich_check,
    exact_inequality_suite,
    theorem_case,
    translation_interp_check,
    vmo_vanishing_check,
)
from .fixtures import FixtureFamily, make_fixture

__version__ = "0.1.0"

__all__ = [
    "GridDomain",
    "GridFunction",
    "GridFormatError",
    "shift",
    "k_difference",
    "truncate",
    "mollify",
    "read_grid",
    "write_grid",
    "KernelFamily",
    "check_unit_mass",
    "check_tail_vanishing",
    "DistributionCurve",
    "distribution",
    "lorentz_norm",
    "lebesgue_norm",
    "weak_norm",
    "truncated_sup",
    "power_identity_check",
    "CubeSweepConfig",
    "OscillationResult",
    "VmoCurve",
    "dyadic_sizes",
    "mean_oscillation",
    "double_average_oscillation",
    "bmo_seminorm",
    "vmo_modulus",
    "jn_decay_probe",
    "Report",
    "dump_reports",
    "ShiftLattice",
    "GagliardoResult",
    "modulus_of_continuity",
    "besov_sup_norm",
    "besov_sup_norm_weak",
    "besov_integral_norm",
    "bv_variation",
    "bv_variation_weak",
    "gagliardo_seminorm",
    "gagliardo_weak_seminorm",
    "sobolev_difference_check",
    "marchaud_probe",
    "ShapeDescriptor",
    "JumpGroundTruth",
    "EnergyCurve",
    "ground_truth",
    "box_mask",
    "boundary_condition_check",
    "directional_energy",
    "kernel_energy",
    "energy_sweep",
    "exact_inequality_suite",
    "theorem_case",
    "bmo_ratio_scan",
    "char_sandwich_check",
    "vmo_vanishing_check",
    "translation_interp_check",
    "FixtureFamily",
    "make_fixture",
    "__version__",
]
