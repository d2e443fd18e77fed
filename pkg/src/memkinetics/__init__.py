"""memkinetics: fractional-calculus toolkit for growth with power-law memory.

The library evaluates the Mittag-Leffler family of special functions,
discretizes the Caputo derivative, and produces trajectories of linear
constant-pace growth models with memory two independent ways (closed-form
series and an Adams-Bashforth-Moulton predictor-corrector), plus a CLI for
scenario runs, cross-validation and convergence reports.
"""

from . import _kernels
from .caputo import (
    FractionalOrder,
    SampledFunction,
    caputo_derivative,
    caputo_derivative_batch,
    power_kernel_cumulative,
    rl_fractional_integral,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InsufficientSamplesError,
    MemKineticsError,
    NonCommensurateError,
    PoleError,
    ValidationError,
)
from .models import (
    DerivedSeries,
    FixedAssets,
    Growth,
    Inflation,
    PowerPrice,
    TwoParamMemory,
    compile,
    derived_series,
)
from .solver import (
    CauchyProblem,
    ConvergenceReport,
    Trajectory,
    TrajectoryGrid,
    analytic_fixed_assets,
    analytic_fixed_assets_convolution,
    analytic_growth,
    analytic_power_price,
    analytic_solution,
    analytic_two_param,
    empirical_convergence_order,
    equation_residual,
    solve_abm,
)
from .specialfn import (
    FoxWrightParams,
    KilbasSaigoParams,
    SeriesControl,
    fox_wright_psi11,
    kilbas_saigo,
    ln_gamma,
    mittag_leffler,
    reciprocal_gamma,
)

__version__ = "0.1.0"

KERNEL_BACKEND = _kernels.BACKEND
