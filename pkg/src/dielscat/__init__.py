"""Spectral Nystrom solvers for 2D Helmholtz transmission scattering.

The package discretizes four boundary integral formulations of the
dielectric (penetrable-obstacle) scattering problem on smooth closed
curves -- the classical two-density second-kind system (CFIESK), a
single combined-field equation (SCFIE), and two regularized
combined-source systems using exact (GCSIE) or principal-symbol
(PSGCSIE) smoothing operators -- with global trigonometric interpolation
and product quadratures for the logarithmic kernel singularities, giving
superalgebraic convergence on analytic boundaries.

Module map:
    specfun       Bessel/Hankel functions (orders 0, 1)
    geometry      analytic closed curves, frames, custom curve tables
    trigtools     grids, DFT helpers, singular quadrature weights
    kernels       kernel splittings with analytic diagonal limits
    operators     dense collocation matrices, spectral circulants
    formulations  the four linear systems and incident-wave traces
    linsolve      full complex GMRES and a direct-solve oracle
    postprocess   near fields, far fields, pattern export
    harness       experiment runner, reports, command-line interface
"""

__version__ = "0.1.0"

from .formulations import (FORMULATIONS, OperatorCache, ProblemParams,
                           assemble_system, incident_traces)
from .geometry import Curve, frame, load_curve_table, make_curve
from .harness import (ExperimentConfig, RunReport, convergence_study,
                      run_experiment)
from .linsolve import SolveReport, direct_solve, gmres
from .postprocess import (FarFieldPattern, eval_fields, far_field,
                          far_field_error)
from .trigtools import Grid, NodalFunction

__all__ = [
    "__version__", "FORMULATIONS", "OperatorCache", "ProblemParams",
    "assemble_system", "incident_traces", "Curve", "frame",
    "load_curve_table", "make_curve", "ExperimentConfig", "RunReport",
    "convergence_study", "run_experiment", "SolveReport", "direct_solve",
    "gmres", "FarFieldPattern", "eval_fields", "far_field",
    "far_field_error", "Grid", "NodalFunction",
]
