"""sidepad: reveal a state through a public signal to receivers with side
information while leaking nothing to anyone else — exactly.

The library decides feasibility (column sums of the conditional matrix),
constructs schemes (doubly stochastic extension + Birkhoff decomposition),
verifies the three defining laws with exact rational arithmetic, and
exercises schemes end to end with seeded Monte Carlo.
"""

from .construction import (
    DeterministicSearch,
    ExtendedMatrix,
    Scheme,
    birkhoff_decompose,
    build_scheme,
    extend,
    find_deterministic_scheme,
    perfect_matching,
    row_value_multisets_equal,
)
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    InfeasibleError,
    InputError,
    InternalInvariantError,
    OffSupportError,
    SidepadError,
    UnverifiedSchemeError,
)
from .feasibility import (
    FeasibilityReport,
    ShannonCase,
    check_feasible,
    marginal_invariance_witness,
    shannon_reduce,
)
from .formats import (
    parse_instance,
    parse_scheme,
    serialize_instance,
    serialize_scheme,
)
from .model import (
    ConditionalMatrix,
    Instance,
    Rational,
    as_fraction,
    column_sums,
    conditional_y_given_x,
    instance_from_conditional,
    make_instance,
    marginal_x,
    marginal_y,
    rat_parse,
    rat_str,
    supp_x,
    supp_y,
)
from .runtime import (
    RandomSource,
    SimReport,
    decode,
    encode,
    sample_world,
    simulate,
)
from .verification import (
    CheckResult,
    NecessityAudit,
    OracleReport,
    VerificationReport,
    check_consistency,
    check_informativeness,
    check_secrecy,
    decode_table,
    feasibility_oracle,
    necessity_audit,
    support_signals,
    verify_scheme,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "CheckResult",
    "ConditionalMatrix",
    "DeterministicSearch",
    "DimensionMismatchError",
    "ExtendedMatrix",
    "FeasibilityReport",
    "InfeasibleError",
    "InputError",
    "Instance",
    "InternalInvariantError",
    "NecessityAudit",
    "OffSupportError",
    "OracleReport",
    "RandomSource",
    "Rational",
    "Scheme",
    "ShannonCase",
    "SidepadError",
    "SimReport",
    "UnverifiedSchemeError",
    "VerificationReport",
    "as_fraction",
    "birkhoff_decompose",
    "build_scheme",
    "check_consistency",
    "check_feasible",
    "check_informativeness",
    "check_secrecy",
    "column_sums",
    "conditional_y_given_x",
    "decode",
    "decode_table",
    "encode",
    "extend",
    "feasibility_oracle",
    "find_deterministic_scheme",
    "instance_from_conditional",
    "make_instance",
    "marginal_invariance_witness",
    "marginal_x",
    "marginal_y",
    "necessity_audit",
    "parse_instance",
    "parse_scheme",
    "perfect_matching",
    "rat_parse",
    "rat_str",
    "row_value_multisets_equal",
    "sample_world",
    "serialize_instance",
    "serialize_scheme",
    "shannon_reduce",
    "simulate",
    "supp_x",
    "supp_y",
    "support_signals",
    "verify_scheme",
    "__version__",
]
