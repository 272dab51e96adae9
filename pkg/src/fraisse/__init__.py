"""Finite combinatorics of amalgamation classes: enumeration, axiom
verification, generic-model approximation, certified interpretation
maps, rank tables, and monochromatic box search."""

__version__ = "0.1.0"

from .classes import (
    BUILTIN_NAMES,
    ClassSpec,
    PairType,
    builtin,
    check_fully_relational,
    check_relation_property,
    check_self_similarity,
    enumerate_pair_types,
    parse_class_expr,
    power,
    superpose,
    verify_class_axioms,
)
from .config import (
    ConfigCertificate,
    InterpretationMap,
    compose_configurations,
    identity_interpretation,
    make_parameter_free,
    parse_formula,
    product_configuration,
    restrict_to_reductive_subclass,
    verify_configuration,
)
from .errors import FraisseError
from .limits import (
    GenericModel,
    build_box_model,
    build_generic_model,
    build_order_box_model,
    check_extension_property,
    order_box_embedding,
)
from .ramsey import (
    BoxColoring,
    box_ramsey_upper_bound,
    directions,
    find_monochromatic_box,
    find_monochromatic_directed_box,
)
from .ranks import (
    BipartiteCode,
    PatternWitness,
    RankResult,
    bipartite_counts,
    build_E_box_configuration,
    build_E_into_orders,
    build_quad_configuration,
    compute_rank_table,
    counting_upper_bound,
    extract_ICT_pattern,
    extract_IRD_pattern,
    verify_dagger_base_case,
)
from .report import VerificationReport
from .structures import (
    Embedding,
    FiniteStructure,
    Signature,
    enumerate_structures,
    find_embeddings,
)
