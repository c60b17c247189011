"""grolab: rigorous numerics for the improved Grothendieck lower bound.

Modules:
    gauss     -- Gaussian density/CDF, Hermite polynomials, panel quadrature
    baseline  -- Davie-Reeds bound: eta/lambda solvers, F(alpha), optimizer
    profiles  -- 1-D profiles, primal/dual values, gap certificates, LP fill
    pairing   -- third-chaos pairing constants and inequalities
    chain     -- stability constants and the final inequality chain
    intervals -- outward-rounded interval kernel
    certify   -- interval-certified re-derivations of the headline numbers
    explorer  -- norm scans, sign ascent, Monte Carlo cross-checks
    cli       -- the `grolab` command
"""

from .baseline import (
    BaselineReport,
    DAVIE_REEDS_C,
    LAMBDA_STAR,
    ReedsParams,
    davie_reeds_bound,
    optimize_lambda,
    reeds_denominator,
    solve_eta_star,
    solve_h,
)
from .chain import ChainParams, ChainReport, final_chain, kappa_eff, kg_lower_bound
from .errors import (
    AccuracyError,
    DomainError,
    FeasibilityError,
    GrolabError,
    InternalCheckError,
)
from .gauss import (
    QuadratureSpec,
    gauss_integrate,
    gaussian_cdf,
    gaussian_pdf,
    h3_tail_integral,
    hermite_eval,
    tail_first_moment,
)
from .pairing import PairingConstants, pairing_lower_bound
from .profiles import (
    GapCertificate,
    Profile,
    F_value_dual,
    V_value,
    gap_certificate,
    lp_maximize,
    moment,
    profile_from_text,
    profile_to_text,
)

__version__ = "0.1.0"
