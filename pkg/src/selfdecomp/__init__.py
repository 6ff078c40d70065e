"""Lévy densities, Urbanik classes and background driving laws of
symmetric selfdecomposable distributions built from Laplace series."""

__version__ = "0.1.0"

from . import _kernels  # noqa: E402
from .bdlp import BdcfResult, bdcf, bdcf_table, residual_spec, verify_decomposition  # noqa: E402
from .chains import ClosedFormChain, cosh_chain, exp_ratio_chain, sinh_chain, tanh_chain  # noqa: E402
from .distributions import (  # noqa: E402
    CATALOG_NAMES,
    DistributionSpec,
    LaplaceSeriesSpec,
    catalog_get,
    catalog_table,
    gamma_identity_check,
    generalized_logistic_pdf,
    product_cf,
    series_density,
)
from .errors import (  # noqa: E402
    DerivativeOrderUnavailable,
    DomainError,
    InvalidParam,
    InvalidSequence,
    NonConvergent,
    QuadratureFailure,
    SelfDecompError,
    TailUnknown,
    UnknownDistribution,
)
from .exp_poly import ExpPolySum, ExpPolyTerm  # noqa: E402
from .levy import (  # noqa: E402
    DEFAULT_QUAD,
    IDRepresentation,
    LevyDensity,
    QuadratureConfig,
    char_function,
    integrability_check,
    iterated_residual,
    lk_exponent,
    residual_density,
    total_mass,
)
from .sampler import (  # noqa: E402
    EcfReport,
    SampleRun,
    ecf_check,
    sample_generalized_logistic,
    sample_laplace,
    sample_series,
)
from .special import complex_log_gamma  # noqa: E402
from .urbanik import (  # noqa: E402
    DEFAULT_GRID,
    ClassVerdict,
    NegativeAt,
    NonNegative,
    ScanGrid,
    classify,
    d_operator,
    sign_scan,
)

BACKEND = _kernels.BACKEND
