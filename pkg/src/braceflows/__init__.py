"""Exact-arithmetic toolkit for finite left braces and pre-Lie rings.

Constructs, verifies and inter-converts braces and pre-Lie rings of
cardinality p^n: brace -> pre-Lie by root-of-unity averaging of the star
operation, pre-Lie -> brace by the group of flows, plus the ideal theory
and the Hopf-Galois pipeline built on regular subgroups of the holomorph.
"""

from .arith import (
    Modulus,
    Residue,
    factorial_inverse,
    geometric_scalar,
    mod_inverse,
    primitive_root,
    teichmueller_xi,
)
from .abelian import (
    AbelianPGroup,
    EndoMap,
    GroupElement,
    Subgroup,
    automorphism_group_order,
    enumerate_automorphisms,
)
from .brace import Brace, SeriesReport
from .correspond import (
    FlowsContext,
    LieWord,
    averaged_star_product,
    bch,
    bch_terms,
    brace_to_prelie,
    exp_left_mul,
    flows_circle,
    group_of_flows,
    log_series_reference,
    prelie_exp,
    prelie_log,
    roundtrip_brace_check,
    roundtrip_prelie_check,
)
from .errors import (
    AlgebraError,
    EnumerationBoundExceeded,
    FactorialNotInvertible,
    HypothesisViolated,
    InvalidPrime,
    InvariantViolation,
    NotAnIdeal,
    NotAutomorphism,
    NotInvertible,
    NotNilpotent,
    NotStronglyNilpotent,
    ParseError,
)
from .hopfgalois import (
    HolomorphElement,
    RegularSubgroup,
    coset_representatives,
    hopf_galois_structures,
    prelie_automorphisms,
    regular_subgroup,
    twist,
)
from .prelie import (
    DorrohRing,
    PreLieRing,
    StrongBoundReport,
    dorroh_extend,
    scale_prelie,
    strong_bound_check,
)
from .report import CheckResult, VerificationReport
from .workbench import (
    AlgebraDocument,
    brace_to_document,
    deserialize,
    document_to_brace,
    document_to_prelie,
    enumerate_prelie,
    load_document,
    prelie_to_document,
    radical_brace,
    run_suite,
    serialize,
)

__version__ = "0.1.0"
