"""
Poisson Prophet - prophet inequalities for observations arriving at Poisson times.
"""
import os

# Application info
APP_NAME = "PoissonProphet"
APP_VERSION = "1.0.0"

# Distribution construction
MERGE_TOLERANCE = 1e-12  # relative to (1 + max atom)
PROB_SUM_TOLERANCE = 1e-9

# Root finding and quadrature
BISECTION_TOLERANCE = 1e-12
BISECTION_MAX_ITER = 200
QUADRATURE_TOLERANCE = 1e-12
QUADRATURE_MAX_DEPTH = 50

# ODE integration
ODE_ABS_TOLERANCE = 1e-10

# Hill-Kertz constants table rows and the n used for the limiting constants
CONSTANTS_TABLE_N = (2, 3, 4, 5, 6, 7, 8, 9, 10, 100, 10_000, 1_000_000)
HK_LIMIT_N = 1_000_000

# Threshold machinery: below this horizon beta(t) comes from its series
BETA_SERIES_CUTOFF = 1e-3
ENDPOINT_GRID_POINTS = 10_000
ENDPOINT_GRID_RANGE = (1e-6, 50.0)

# Bound verification
BOUND_SLACK = 1e-9
SWEEP_HORIZONS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0)
SWEEP_INSTANCES = 1000
SWEEP_MIN_ATOMS = 2
SWEEP_MAX_ATOMS = 8
SWEEP_ATOM_RANGE = (1e-3, 1e3)
EXAMPLE_K_VALUES = (100, 1_000, 10_000)

# Monte Carlo
DEFAULT_SEED = int(os.environ.get('PROPHET_SEED', '20061'))
MC_BLOCK_SIZE = int(os.environ.get('PROPHET_MC_BLOCK', '8192'))
MC_SIGMA_BAND = 4.0
MC_CI_Z = 1.959963984540054

# Logging
LOG_LEVEL = os.environ.get('PROPHET_LOG_LEVEL', 'WARNING')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
