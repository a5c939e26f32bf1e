"""Power-series inversion, polynomial deflation and quadratic inversion with
a priori rounding-error bounds checked against an extended-precision oracle."""

__version__ = "0.1.0"

from .errors import (CoincidentRootsError, ConvergenceError, GammaUndefinedError,
                     NearMultipleRootError, NotNormalizedError, PreconditionError,
                     PsinvError, VacuousBoundError)
from .precision import BINARY64, PrecisionContext, extended, gamma, unit_roundoff
from .series import PowerSeries, abs_series, cauchy_product, growth_rate_estimate, invert, scale_variable
from .polynomial import (Polynomial, RootSet, binomial_power, chebyshev, chebyshev_roots,
                         derivative, evaluate, from_roots)
from .deflation import deflate_backward, deflate_forward, deflation_oracle
from .quadratic import QuadraticCase, closed_form_coeff, invert_quadratic, quadratic_rel_bound
from .report import ErrorReport, error_report
from .bounds import (condition_bound, infnorm_bound, least_singular_value, stability_bound,
                     theorem31_bound)
from .pseudozero import (PseudozeroGrid, inverse_coeff_from_roots, kappa_coefficient_bound,
                         pseudozero_grid, pseudozero_indicator, residues, root_condition)
