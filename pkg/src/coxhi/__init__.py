"""coxhi: exact hypergraph-index engine for Coxeter systems."""

from .core import (
    INFINITY,
    CoxeterSystem,
    CoxeterError,
    DiagramKind,
    ParseError,
    RankCapExceeded,
    RankLimitError,
    betti,
    commutes,
    components,
    induced,
    iter_bits,
    mask_from_names,
    mask_of,
    names_of_mask,
    parse_cxs,
    parse_json_system,
    perp,
    to_cxs,
)
from .classify import (
    IrreducibleType,
    SubsystemClass,
    classify_irreducible,
    classify_subset,
    ends,
    enumerate_minimal_nonspherical,
    is_irreducible_affine,
    is_minimal_nonspherical,
    is_spherical,
    minimal_nonspherical_subsets,
)
from .hindex import (
    Analysis,
    DivergenceReport,
    LambdaAnalysis,
    RHVerdict,
    SlabWitness,
    WideWitness,
    analysis,
    check_rh,
    divergence_report,
    hypergraph_index,
    in_class_T,
    is_hyperbolic,
    lambda_sequence,
    linear_divergence_structural,
    nested_chain,
    peripheral_structure,
    slab_subsets,
    thickness_certificate,
    wide_subsets,
)
from .families import (
    DuplexParams,
    catalog,
    catalog_names,
    collapse_labels,
    duplex,
    gamma_d,
    path4,
    random_racg,
    random_system,
    random_tree,
)

__version__ = "0.1.0"
