"""
Central configuration for the geometric ergodicity certifier.
Numeric tolerances, defaults and output paths.
"""

from pathlib import Path

# ──────────────────────────────────────────────
# Paths
# ──────────────────────────────────────────────
PROJECT_ROOT = Path(__file__).resolve().parent
OUTPUTS_DIR = PROJECT_ROOT / "outputs"

# ──────────────────────────────────────────────
# Chain validation / structure
# ──────────────────────────────────────────────
ROW_TOL = 1e-9                       # |row sum - 1| accepted before exact renormalization
STATIONARY_RESIDUAL_FACTOR = 1e-12   # residual bound is this * N
REVERSIBILITY_TOL = 1e-10            # detailed-balance residual, relative to max |pi_x P_xy|
RANK_THRESHOLD_FACTOR = 1e-10        # rank cut is this * N * max|entry|

# ──────────────────────────────────────────────
# Norms
# ──────────────────────────────────────────────
PROBABILITY_TOL = 1e-12              # sum-to-one slack for probability vectors
NORM_SLACK = 1e-12                   # absolute slack used when comparing norms

# ──────────────────────────────────────────────
# Spectral analysis
# ──────────────────────────────────────────────
GELFAND_TOL = 1e-8                   # stop when successive estimates differ by less
GELFAND_N_MAX = 2 ** 20              # largest power examined (2^k squarings)
JACOBI_TOL = 1e-12                   # off-diagonal Frobenius norm at convergence
JACOBI_MAX_SWEEPS = 100
JACOBI_MAX_STATES = 200              # above this the LAPACK symmetric solver is used
EIGEN_TOL = 1e-10                    # "equals 1" / "in [-1, 1]" slack for eigenvalues

# ──────────────────────────────────────────────
# Drift and return times
# ──────────────────────────────────────────────
POWER_ITERATION_TOL = 1e-12          # relative Collatz-Wielandt bracket width
POWER_ITERATION_MAX_ITER = 100_000
DEFAULT_KAPPA_WHEN_UNBOUNDED = 2.0   # kappa used when kappa_star is infinite
DRIFT_SLACK = 1e-10                  # PV <= lambda V + b 1_S re-check slack
DRIFT_PI_V_SLACK = 1e-8              # pi(V) <= b / (1 - lambda) slack
WHOLE_SPACE_LAMBDA = 0.5             # lambda convention when S is the whole space
TRUNCATED_MGF_TERMS = 200            # brute-force return-time MGF terms

# ──────────────────────────────────────────────
# Condition certificates
# ──────────────────────────────────────────────
DEFAULT_N_MAX = 256
DEFAULT_J_SET = [1, 2, 3, 5]
DEFAULT_P_SET = [1.5, 2.0, 4.0]
DEFAULT_RATE_TOL = 1e-3
DEFAULT_SEED = 20220301
GEOMETRIC_RATE_MARGIN = 1e-6         # holds iff rho < 1 - margin
CERTIFICATE_SLACK = 1e-9             # defining inequality re-check slack
BATTERY_RANDOM_MEASURES = 4          # seeded Dirichlet draws added to the battery
HOLDER_SLACK = 1e-9
WITNESS_NORM_STEPS = 10              # n range for the V,0 / V norm sandwich witness
MIXING_EPS = 0.25
DECAY_CACHE_FLOATS = 2 ** 24          # cache (P - Pi)^n when n_max * N^2 fits
ROUNDOFF_CHOP = 8.0                   # entries below this * N * eps of their a-priori bound are zero

# ──────────────────────────────────────────────
# Reports
# ──────────────────────────────────────────────
REPORT_SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12

# ──────────────────────────────────────────────
# Chain zoo
# ──────────────────────────────────────────────
ZOO_ROW_TOL = 1e-12                  # generated matrices must pass validation at this tolerance
ZOO_MIN_WEIGHT = 0.05                # lower end of the uniform draws for random kernels
DEGRADATION_SIZES = [10, 20, 40, 80]
DEGRADATION_ALPHA = 2.5
CROSSVAL_DEFAULT_COUNT = 100
CROSSVAL_MAX_STATES = 25
BRUTE_FORCE_MAX_STATES = 6           # crossval compares the return-time MGF with its truncated sum up to here
