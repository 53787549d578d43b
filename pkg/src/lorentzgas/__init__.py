"""Periodic Lorentz gas free path simulator and analysis toolkit.

Exact free path lengths in a periodic array of spherical scatterers,
Monte Carlo estimation of the small-radius limiting laws, entropy constants
of the billiard map, and the arithmetic machinery governing how fast the
limit is approached for shifted lattices.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticConstants,
    boca_zaharescu_bridge,
    constants_for_dimension,
    entropy_expansion,
    mean_free_path_exact,
    phi_near_zero,
    phi_tail,
    riemann_zeta,
    sphere_area,
    tail_constant,
    vol_ball,
)
from .diophantine import (
    DiophantineQuery,
    diophantine_exponent_probe,
    torus_distance,
    zeta_fn,
    zeta_fn_oracle,
)
from .ensembles import (
    DEFAULT_XI_CAP,
    EnsembleKind,
    EnsembleSpec,
    RngStream,
    draw_queries,
    measure_normalizers,
    sample_boundary,
    sample_direction_uniform,
    sample_fixed_point,
    sample_phase,
)
from .errors import (
    CensoredRegionError,
    ConfigError,
    CorruptSampleError,
    InvalidBasePointError,
    InvalidDirectionError,
    InvalidOriginError,
    LorentzGasError,
    LowCountError,
    ObstacleOverlapError,
    OracleBudgetError,
    SchemaError,
    UnimodularityError,
    UnreliableTailError,
    UnsupportedDimensionError,
    ZetaCapExceeded,
)
from .geometry import (
    AlphaClass,
    FreePathSample,
    LatticeConfig,
    RayQuery,
    free_path,
    free_path_batch,
    free_path_bruteforce,
    free_path_bruteforce_batch,
    shortest_vector_bound,
)
from .runner import (
    RunConfig,
    SimulationResult,
    analyze_samples,
    build_summary,
    constants_report,
    converge_report,
    run_simulation,
    simulate_to_files,
)
from .stats import (
    EmpiricalDistribution,
    ccdf,
    cross_ensemble_check,
    density_fd,
    dkw_band,
    entropy_constant,
    tail_fit,
    write_ccdf_csv,
)
