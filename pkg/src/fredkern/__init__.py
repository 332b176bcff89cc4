"""Numerical resolvent kernels for smooth decaying bi-Carleman kernels.

The package builds second-kind integral-equation machinery around compactly
truncated subkernels: collocation on composite Gauss-Legendre grids, Fredholm
determinants and first minors, resolvent kernels with closed-form oracles for
the separable built-ins, and convergence diagnostics for the truncation limit.
"""

from .convergence import (
    BoundednessProbe,
    CompactSweep,
    ConvergenceReport,
    ShiftSchedule,
    boundedness_probe,
    compact_sweep,
    lambda_shift,
    tail_condition_report,
    resolvent_convergence_diagnostic,
)
from .errors import (
    BudgetExceededError,
    CharacteristicValueError,
    ConfigError,
    FredkernError,
    NeumannDivergenceError,
    PoleError,
)
from .fredholm import (
    CharScanResult,
    DetResult,
    char_scan,
    det_matrix,
    det_series,
    fredholm_coefficients,
    is_characteristic,
    minor_series,
)
from .kernels import (
    BUILTIN_KERNELS,
    BasisFn,
    KernelSpec,
    TruncationScheme,
    carleman_norm,
    eval_kernel,
    gauss_cauchy,
    gauss_rank1,
    iterant_eval,
    odd_rank1,
    rank2_orthogonal,
    subkernel_eval,
    zero_kernel,
)
from .quadrature import (
    Discretization,
    NystromMatrix,
    build_grid,
    gauss_legendre_panels,
    grid_on_interval,
    nystrom_matrix,
    operator_norm_estimate,
    tail_norm,
)
from .resolvent import (
    NeumannValue,
    ResolventCarleman,
    ResolventHandle,
    make_resolvent,
    neumann_full,
    resolvent_carleman,
    resolvent_eval,
    residual_check,
    second_resolvent_residual,
    solve_equation,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_KERNELS",
    "BasisFn",
    "BoundednessProbe",
    "BudgetExceededError",
    "CharScanResult",
    "CharacteristicValueError",
    "CompactSweep",
    "ConfigError",
    "ConvergenceReport",
    "DetResult",
    "Discretization",
    "FredkernError",
    "KernelSpec",
    "NeumannDivergenceError",
    "NeumannValue",
    "NystromMatrix",
    "PoleError",
    "ResolventCarleman",
    "ResolventHandle",
    "ShiftSchedule",
    "TruncationScheme",
    "boundedness_probe",
    "build_grid",
    "carleman_norm",
    "char_scan",
    "compact_sweep",
    "det_matrix",
    "det_series",
    "eval_kernel",
    "fredholm_coefficients",
    "gauss_cauchy",
    "gauss_legendre_panels",
    "gauss_rank1",
    "grid_on_interval",
    "is_characteristic",
    "iterant_eval",
    "lambda_shift",
    "make_resolvent",
    "minor_series",
    "neumann_full",
    "nystrom_matrix",
    "odd_rank1",
    "operator_norm_estimate",
    "rank2_orthogonal",
    "residual_check",
    "resolvent_carleman",
    "resolvent_eval",
    "second_resolvent_residual",
    "solve_equation",
    "subkernel_eval",
    "tail_condition_report",
    "tail_norm",
    "resolvent_convergence_diagnostic",
    "zero_kernel",
]
