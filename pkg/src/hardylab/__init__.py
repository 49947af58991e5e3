"""hardylab: numerical workbench for truncated vector-valued Hardy spaces.

Coefficient-level functions and multipliers, subspace lattice operations
with certified invariance defects, model/Beurling-type constructions, the
near-invariance decomposition and its converse, and a scenario harness
that verifies each structural statement at finite truncation order.
"""

from .errors import (
    CertificationError,
    DimensionMismatchError,
    DomainError,
    InvariantViolationError,
    NotInnerError,
    NotNearlyInvariantError,
    ParseError,
    PreconditionError,
    TruncationOverflowError,
    WorkbenchError,
)
from .funcs import (
    CoeffFn,
    backshift,
    basis_vector,
    eval_at,
    flatten,
    inner_product,
    make_fn,
    monomial_fn,
    norm,
    shift,
    unflatten,
    zero_fn,
)
from .inner import (
    BlaschkeSpec,
    as_inner,
    blaschke_scalar,
    check_inner,
    diag_inner,
    eval_blaschke,
    monomial_inner,
)
from .multipliers import (
    MatSymbol,
    adjoint_apply,
    apply_multiplier,
    column_symbol,
    commutes_with_shift,
    compose,
    identity_symbol,
    make_symbol,
    scalar_symbol,
    symbol_column,
    toeplitz_matrix,
)
from .nearly import (
    DecompResult,
    almost_invariant_Sstar_check,
    certify_nearly,
    decompose,
    duality_check,
    extract_K,
    orthocomplement_membership,
    synthesize_M,
)
from .scenarios import SCENARIOS, ScenarioReport, run_all, run_scenario
from .subspaces import (
    DEFAULT_TOL,
    DefectCertificate,
    Subspace,
    beurling_space,
    complement,
    contains,
    defect_of,
    degree_slice,
    from_spanning,
    full_space,
    intersect,
    join,
    model_space,
    project,
    subspace_distance,
    vanishing_slice,
    wandering,
)

__version__ = "0.1.0"
