"""
Defaults for every numerical knob of the toolkit.

All tolerances are absolute unless the name says REL. The run-level subset is
bundled into RunConfig, which is echoed into every report header.
"""
import os
from dataclasses import asdict, dataclass, replace

# Seed for the random function corpus and sharpness families
DEFAULT_SEED = 42

# Adaptive quadrature
QUAD_REL_TOL = 1e-12
QUAD_ABS_FLOOR = 1e-14
QUAD_MAX_CELLS = 1_000_000

# Seminorm sampling
SUP_GRID = 4096
ENVELOPE_GRID = 4096
MIN_SUP_GRID = 64
G_PRIME_ZERO = 1e-12     # |g'| below this counts as a zero of g'

# Special means: below DELTA_SWITCH * (1 + |x|) the diagonal series is used
DELTA_SWITCH = 1e-7
# |p| (or |p + 1|) below this routes L_p through the limit-stable formula
P_LIMIT_WINDOW = 1e-6

# Pass/fail tolerances for lhs <= rhs * (1 + TOL_REL) + TOL_ABS
TOL_REL = 1e-9
TOL_ABS = 1e-12

# Weights
NEGATIVE_WEIGHT_TOL = 1e-12
CUMULATIVE_CELLS = 64
MEDIAN_TOL = 1e-12

# Node search
NODE_GRID = 1000
GOLDEN_TOL = 1e-12

OUTPUT_FORMATS = ("json", "csv", "text")
DEFAULT_FORMAT = "json"

DATABASE_URL = os.environ.get("OSTROWSKI_DATABASE_URL", "sqlite:///ostrowski_runs.db")


@dataclass(frozen=True)
class RunConfig:
    """
    Run-level configuration shared by the harness and the CLI.

    Parameters:
    - seed: 64-bit seed for random corpora
    - rel_tol: Relative tolerance handed to the quadrature oracle
    - sup_grid: Number of grid cells for sampled seminorms
    - envelope_grid: Number of samples for hypothesis-envelope checks
    - node_grid: Number of grid cells for best-node scans
    - tol_rel, tol_abs: Pass tolerances
    - output_format: One of OUTPUT_FORMATS
    - workers: Thread count for suite fan-out (1 = sequential)
    """

    seed: int = DEFAULT_SEED
    rel_tol: float = QUAD_REL_TOL
    sup_grid: int = SUP_GRID
    envelope_grid: int = ENVELOPE_GRID
    node_grid: int = NODE_GRID
    tol_rel: float = TOL_REL
    tol_abs: float = TOL_ABS
    output_format: str = DEFAULT_FORMAT
    workers: int = 1

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.sup_grid < MIN_SUP_GRID:
            raise ValueError(f"sup grid must be at least {MIN_SUP_GRID}")

    @classmethod
    def from_env(cls, **overrides):
        """
        Build a config from defaults, then OSTROWSKI_SEED, then explicit overrides.
        Overrides whose value is None are ignored.
        """
        config = cls()
        env_seed = os.environ.get("OSTROWSKI_SEED")
        if env_seed:
            config = replace(config, seed=int(env_seed, 0))
        explicit = {key: value for key, value in overrides.items() if value is not None}
        return replace(config, **explicit)

    def as_header(self):
        return asdict(self)
