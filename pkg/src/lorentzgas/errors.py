"""Exception types shared across the package."""


class LorentzGasError(Exception):
    """Base class for all package errors."""


class ConfigError(LorentzGasError):
    """Invalid simulation configuration (bad parameter, bad config file)."""


class UnimodularityError(ConfigError):
    """Lattice basis matrix is not unimodular within tolerance."""


class UnsupportedDimensionError(ConfigError):
    """Dimension outside the supported range."""


class ObstacleOverlapError(ConfigError):
    """Obstacle radius too large: spheres on neighbouring lattice points overlap."""


class InvalidOriginError(LorentzGasError):
    """Ray origin lies inside an obstacle."""


class InvalidDirectionError(LorentzGasError):
    """Ray direction is not a unit vector."""


class InvalidBasePointError(LorentzGasError):
    """Fixed base point is within one radius of a lattice point."""


class OracleBudgetError(LorentzGasError):
    """Brute-force oracle would exceed its enumeration budget."""


class CensoredRegionError(LorentzGasError):
    """Requested statistic lies in the censored region (>= xi_cap)."""


class UnreliableTailError(LorentzGasError):
    """Too much censored mass above the fit window for a trustworthy tail fit."""


class LowCountError(LorentzGasError):
    """Not enough samples in the requested window."""


class CorruptSampleError(LorentzGasError):
    """Sample values violate basic invariants (e.g. xi <= 0)."""


class ZetaCapExceeded(LorentzGasError):
    """zeta(b, T) scan hit its N cap without satisfying the threshold."""


class SchemaError(LorentzGasError):
    """Sample file does not match the expected CSV schema."""
