"""W-footrule coefficient: a copula-based measure of countermonotonicity.

Population values (:mod:`wfootrule.truth`), rank-based estimation and
inference (:mod:`wfootrule.estimation`), copula sampling
(:mod:`wfootrule.sampling`) and the Monte Carlo study
(:mod:`wfootrule.montecarlo`).
"""

from .copulas import (
    M,
    PI,
    W,
    Clayton,
    Copula,
    Frank,
    Gaussian,
    Gumbel,
    Independence,
    LowerBound,
    Mixture,
    Survival,
    Tilde,
    Transpose,
    TwoSegment,
    UpperBound,
    parse_copula,
)
from .estimation import (
    EstimateReport,
    RankedSample,
    confidence_interval,
    countermonotonicity_test,
    estimate,
    footrule_hat,
    gini_hat,
    phi_hat,
    rank_data,
    sigma_hat,
)
from .sampling import sample, stream
from .truth import footrule_true, gini_true, phi_oracle_L1, phi_true, true_values

__version__ = "0.1.0"
