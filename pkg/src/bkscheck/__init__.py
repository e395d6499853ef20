"""Exact checking of value-assignment (Kochen-Specker type) no-go proofs."""

from .bks import (
    SINGLET,
    CountMode,
    ProofEntry,
    ProofKind,
    build_singlet_relation,
    catalog,
    condition_d_check,
    count_propositions,
    get_entry,
    lift_system,
    merit_ratio,
    state_substitution,
    verify_system,
)
from .bksfile import parse_system, serialize_system
from .constraints import (
    EquationSystem,
    ParityCertificate,
    SolverOutcome,
    ValueEquation,
    Verdict,
    backtrack_solve,
    brute_force,
    build_basis_equation,
    build_difference_equation,
    find_parity_certificate,
    substitute,
    verify_parity_certificate,
)
from .export import export_cnf, export_dot
from .rays import (
    Ray,
    canonicalize,
    complete_to_basis,
    factorize_ray,
    in_span,
    inner,
    is_orthogonal_basis,
    lift_dimension,
    perp2,
    ray,
    tensor_product,
)

__version__ = "0.1.0"
