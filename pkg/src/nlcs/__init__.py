"""Nonlinear coherent states of f-deformed oscillators."""
from nlcs._backend import BACKEND
from nlcs.analysis import (
    MomentSet,
    SeriesSet,
    SqueezingReport,
    moments_direct,
    reconcile_series,
    series,
    squeezing_report,
    sweep,
)
from nlcs.errors import (
    Divergence,
    InvalidArgument,
    NLCSError,
    SingularDenominator,
    TailOverflow,
    UndefinedG2,
    ZeroNonlinearity,
)
from nlcs.nonlinearity import (
    NonlinearitySpec,
    SignedLogValue,
    f_factorial,
    f_factorial_prefix,
    f_value,
    load_table,
)
from nlcs.specfun import laguerre, log_factorial
from nlcs.states import (
    StateExpansion,
    TruncationPolicy,
    build_displacement_state,
    build_eigenstate,
    coefficient,
)

__version__ = "0.1.0"
