"""Sparse hypergraph configurations: freeness, claims, cluster merging, weight certificates."""

from .certify import (
    CertReport,
    WeightCertificate,
    assign_weights,
    certificate_pipeline,
    pair_interaction_audit,
    r_threshold_ok,
    verify_certificate,
)
from .claims import ClaimSet, Diamond, PairFamily, claim_set, claim_table, diamonds, flexible_diamonds, is_flexible_diamond, pair_family
from .configs import (
    ConfigWitness,
    FreenessReport,
    contains_config,
    gk_family,
    incremental_free_check,
    is_Gk_free,
    iter_configs,
    repair_free,
)
from .core import (
    EdgeSubset,
    HyperGraph,
    VertexPair,
    canonical_form,
    parse_hypergraph,
    read_hypergraph,
    serialize_hypergraph,
    span,
    write_hypergraph,
)
from .merging import (
    ClusterStats,
    MergeLog,
    Partition,
    check_property_P,
    cluster_stats,
    merge_1,
    merge_12,
    trimming_order,
    verify_structure,
)
from .search import (
    ConstructionReport,
    ExtremalRecord,
    construct,
    greedy_packing,
    grid_packing,
    lower_bound_ratio,
    random_free_graph,
    search_extremal,
)

__version__ = "0.1.0"
