# Default tolerances and limits. Every option model and CLI flag takes its
# default from here.

# jets
POLE_FLOOR = 1e-300
FD_STEP = 1e-4

# operators
PHI_PRIME_ZERO = 1e-300
CURVATURE_A_FLOOR = 1e-14

# trajectories
LEVEL_TOL = 1e-9
BOUNDARY_MARGIN = 1e-6
A_VANISHING = 1e-8
RK_RTOL = 1e-10
MAX_STEPS = 20000
MAX_T_STEP = 1e-2
PROJECTION_MAX_ITER = 8
# |A| above this is treated as arriving at a zero of phi'
A_BLOWUP = 1e8
MIN_T_STEP = 1e-15

# level sets
LEVEL_STEP = 1e-2
MAX_TURN = 0.2
SEED_XTOL = 1e-12
LEVEL_GRID_DENSITY = 32
# a zero of A closer than this to the level, in |D| - t, ends the trace
LEVEL_CRITICAL_TOL = 1e-6
# vertices this close to an open end are left out of nesting distances
NESTING_END_MARGIN = 0.1

# critical points
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 60
CLASS_TOL = 1e-8
CRITICAL_RESIDUAL = 1e-8
ROOT_DEDUP = 1e-8
PHI_PRIME_EXCLUSION = 1e-4
CRITICAL_GRID_DENSITY = 16

# quadrature
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-13
QUAD_LIMIT = 200

# self-map / order scans
SELF_MAP_RADIUS = 0.999

# output
CSV_FLOAT_FORMAT = "%.17g"
SVG_WIDTH_PX = 800
