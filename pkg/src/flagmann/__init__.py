"""flagmann: exact cell-count polynomials for flag varieties of quiver
subrepresentations over Dynkin quivers, verified by finite-field counts."""

from .counting import (
    FlagPoint,
    count_flags,
    count_strata,
    enumerate_flags,
    enumerate_subreps,
    sample_flags,
    stratum_counts,
)
from .errors import (
    BudgetExceededError,
    FlagmannError,
    InputError,
    InternalConsistencyError,
    UnsupportedQuiverError,
    VerificationError,
)
from .extended import (
    ExtendedQuiver,
    FiberReport,
    Rep0Representation,
    extend_quiver,
    flag_to_subrep,
    hom_dim_rep0,
    phi,
    quotient_by_flag,
    verify_fiber_rank,
)
from .linalg import (
    Matrix,
    PrimeField,
    QQ,
    Rationals,
    enumerate_subspaces,
    gaussian_binomial,
)
from .poincare import (
    PoincareEngine,
    PoincarePolynomial,
    StratumSplit,
    base_case_rigid_interpolation,
    base_case_type_a,
    base_case_type_d,
    directed_order,
    engine_for,
    enumerate_splittings,
    poincare,
    rigid_dimension,
    stratum_rank,
)
from .quiver import (
    DynkinClass,
    FlagType,
    Quiver,
    classify_dynkin,
    euler_form,
    flag_differences,
    load_quiver,
    parse_flag_type,
    parse_quiver,
    positive_roots,
)
from .reps import (
    Representation,
    RootMultiset,
    build_rep,
    direct_sum,
    ext1_dim,
    hom_dim,
    hom_space,
    indecomposable_for_root,
    is_rigid,
    is_subrepresentation,
    parse_rep_spec,
    quotient_representation,
    simple_representation,
    subrepresentation,
    zero_representation,
)

__version__ = "0.1.0"
