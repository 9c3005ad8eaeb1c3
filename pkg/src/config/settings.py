VERSION = '0.1.0'

# Tolerances
NORM_TOL = 1e-12  # norm drift allowed on walker waves and coin vectors
COIN_NORM_TOL = 1e-9  # user-supplied coin vectors must be normalized to this
OBSERVABLE_IMAG_TOL = 1e-9  # largest imaginary residue tolerated on a real observable
QUAD_ABS_TOL = 1e-10  # target absolute error of the adaptive quadrature
QUAD_REL_TOL = 1e-10
QUAD_LIMIT = 400  # max subintervals for scipy.integrate.quad
OSCILLATORY_QUAD_LIMIT = 4000
OSCILLATORY_QUAD_ABS_TOL = 1e-8

# Size budgets
MAX_SPECTRAL_N = 14
VECTOR_TABLE_MAX_N = 10  # analytic_spectrum attaches integer eigenvector columns up to this n
BRUTE_FORCE_MAX_N = 3
BRUTE_FORCE_MAX_T = 12
JACOBI_MAX_DIM = 64  # above this the dense oracle switches to LAPACK
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 50

# Output
CSV_SIGNIFICANT_DIGITS = 17
ENTROPY_BASE = 2

# Monte Carlo baseline
DEFAULT_SEED = 20240101
DEFAULT_TRIALS = 100_000

# Schmidt spectrum of eigenstates: nu_1 = [1 + (3 - 2*sqrt(2)) ** (n + offset)] ** -1.
# Offsets are the ones selected by entanglement.resolve_nu_exponents.
EVEN_K_NU_EXPONENT_OFFSET = -2
ODD_K_NU_EXPONENT_OFFSET = 0

# Default sweep for distance fits
DEFAULT_T_MIN = 100
DEFAULT_T_MAX = 300
