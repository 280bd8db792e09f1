"""Executable combinatorics of monomorphic relational structures.

Decide k-monomorphy, enumerate and classify chaining linear orders,
synthesize quantifier-free order definitions and derive structures back
from them, build and model-check monomorphy sentences, and merge
duplicate relations with formula translation.  Everything operates on
finite structures over domains {0..n-1} and is pure and immutable.
"""

from .chaining import (
    ENUMERATION_CAP,
    ChainSet,
    TrichotomyReport,
    chains,
    classify_chain_set,
    enumerate_chaining_orders,
    transport_order,
)
from .definability import (
    QFDefinition,
    derive_from_definition,
    derive_structure,
    parse_definition,
    pattern_formula,
    render_definition,
    synthesize_definition,
)
from .errors import (
    CapExceededError,
    FormulaParseError,
    MixedPatternError,
    MonochainError,
    SignatureMismatchError,
    StructureParseError,
    ValidationError,
)
from .formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Rel,
    evaluate,
    format_formula,
    free_variables,
    is_quantifier_free,
    parse_formula,
    permute_formula,
    star_translate,
    substitute,
)
from .generators import (
    GeneratorSpec,
    betweenness_formula,
    corpus,
    cyclic_formula,
    generate,
    random_formula,
    random_structure,
    reversal_automorphism_check,
)
from .monomorphy import (
    MonomorphyReport,
    ReductReport,
    SweepReport,
    check_reducts,
    frasnay_sweep,
    is_k_monomorphic,
    is_monomorphic,
)
from .orders import (
    ORDER_SIGNATURE,
    LinearOrder,
    Pattern,
    all_orders,
    order_structure,
    tuple_pattern,
)
from .sentences import (
    PHI_SIZE_CAP,
    SignatureReduction,
    build_alpha,
    build_phi,
    build_psi,
    build_psi_n,
    reduce_duplicate_relations,
)
from .structures import (
    CODE_SIZE_CAP,
    Bijection,
    CanonicalCode,
    Signature,
    Structure,
    age,
    canonical_code,
    enumerate_structures,
    find_isomorphism,
    induced_substructure,
    parse_signature_text,
    parse_structure,
    parse_structure_with_names,
    relabel_structure,
    render_structure,
)

__version__ = "0.1.0"
