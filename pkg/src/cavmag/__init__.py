"""Coupled-mode transmission spectra and crossing-regime analysis.

Models a driven chain of linearly coupled resonant modes (for example a
field-tuned magnon mode and several cavity modes sharing a feedline),
computes microwave transmission, tracks the complex eigenvalue branches of
the effective Hamiltonian over a bias sweep, classifies each mode
crossing as level attraction or repulsion, and searches coupling space
for the boundary between the two regimes.
"""

from .branches import (
    EPS_MERGE,
    G_MIN,
    W_MIN,
    BranchSet,
    CrossingClass,
    ZoneReport,
    ZoneSpec,
    classify_both,
    classify_zone,
    eigen_sweep,
    export_branches_csv,
    identify_zone,
)
from .config import load_preset, parse_config, preset_names, serialize_config
from .errors import (
    CavmagError,
    ConfigError,
    DuplicateMode,
    NoBracket,
    NoConvergence,
    NonDecaying,
    NoSolution,
    SchemaError,
    SingularMatrix,
    UnknownModeInCoupling,
    WindowTooNarrow,
)
from .linalg import EigenResult, char_poly_roots, eigenvalues, lu_solve
from .model import (
    DEFAULT_FIELD_SWEEP,
    DEFAULT_FREQUENCY_SWEEP,
    CouplingSpec,
    FieldLinear,
    ModeSpec,
    Static,
    Sweep,
    SystemConfig,
    effective_hamiltonian,
    mode_frequency,
    port_vector,
    response_matrix,
)
from .spectra import (
    SpectrumGrid,
    export_csv,
    export_pgm,
    s21_at,
    s21_time_domain_oracle,
    sweep_spectrum,
)
from .transition import (
    BISECT_TOL,
    THETA,
    AxisSpec,
    ParamSelector,
    RegimeMap,
    apply_coupling_value,
    export_regime_csv,
    find_transition,
    gap_order_parameter,
    regime_map,
)

__version__ = "0.1.0"

__all__ = [
    "AxisSpec",
    "BISECT_TOL",
    "BranchSet",
    "CavmagError",
    "ConfigError",
    "CouplingSpec",
    "CrossingClass",
    "DEFAULT_FIELD_SWEEP",
    "DEFAULT_FREQUENCY_SWEEP",
    "DuplicateMode",
    "EPS_MERGE",
    "EigenResult",
    "FieldLinear",
    "G_MIN",
    "ModeSpec",
    "NoBracket",
    "NoConvergence",
    "NoSolution",
    "NonDecaying",
    "ParamSelector",
    "RegimeMap",
    "SchemaError",
    "SingularMatrix",
    "SpectrumGrid",
    "Static",
    "Sweep",
    "SystemConfig",
    "THETA",
    "UnknownModeInCoupling",
    "W_MIN",
    "WindowTooNarrow",
    "ZoneReport",
    "ZoneSpec",
    "apply_coupling_value",
    "char_poly_roots",
    "classify_both",
    "classify_zone",
    "effective_hamiltonian",
    "eigen_sweep",
    "eigenvalues",
    "export_branches_csv",
    "export_csv",
    "export_pgm",
    "export_regime_csv",
    "find_transition",
    "gap_order_parameter",
    "identify_zone",
    "load_preset",
    "lu_solve",
    "mode_frequency",
    "parse_config",
    "port_vector",
    "preset_names",
    "regime_map",
    "response_matrix",
    "s21_at",
    "s21_time_domain_oracle",
    "serialize_config",
    "sweep_spectrum",
    "__version__",
]
