"""ist-forge: independent spanning trees in random and pseudorandom graphs.

The library builds families of vertex-independent spanning trees (ISTs)
rooted at an arbitrary vertex, certifies the intermediate "nice" tree
collections via bipartite matchings, and verifies the final families with
an independent path-disjointness checker.  A seeded Monte-Carlo harness
measures empirical success rates over parameter grids.
"""

from .rng import Rng
from .graph import (
    Graph,
    BipartiteGraph,
    min_degree,
    max_degree,
    neighbors,
    common_neighbors,
    low_degree_set,
    is_k_connected,
    read_edge_list,
    write_edge_list,
)
from .generators import gen_gnp, gen_bipartite_gnp, gen_random_regular
from .matching import (
    Matching,
    HallViolator,
    Deficiency,
    max_matching,
    saturating_or_violator,
    disjoint_star_packing,
)
from .ist import (
    SmallTree,
    TreeCollection,
    NicenessWitness,
    NicenessFailure,
    SpanningTreeFamily,
    VerifyReport,
    index_set,
    certify_nice,
    assemble,
    verify_independent,
    verify_independent_marksweep,
)
from .dense import build_dense
from .sparse import SparseParams, PathSystem, GrowthFailure, grow_path_system, build_sparse
from .pseudo import (
    SpectralProfile,
    PseudoParams,
    Partition,
    PartitionFailure,
    ConnectFailure,
    spectral_profile,
    mixing_audit,
    sample_partition,
    connect_through_reservoir,
    build_pseudorandom,
)
from .builders import BuildFailure
from .errors import ParameterError, GenerationError, ParseError, IntegrityError

__all__ = [
    "Rng",
    "Graph",
    "BipartiteGraph",
    "min_degree",
    "max_degree",
    "neighbors",
    "common_neighbors",
    "low_degree_set",
    "is_k_connected",
    "read_edge_list",
    "write_edge_list",
    "gen_gnp",
    "gen_bipartite_gnp",
    "gen_random_regular",
    "Matching",
    "HallViolator",
    "Deficiency",
    "max_matching",
    "saturating_or_violator",
    "disjoint_star_packing",
    "SmallTree",
    "TreeCollection",
    "NicenessWitness",
    "NicenessFailure",
    "SpanningTreeFamily",
    "VerifyReport",
    "index_set",
    "certify_nice",
    "assemble",
    "verify_independent",
    "verify_independent_marksweep",
    "build_dense",
    "SparseParams",
    "PathSystem",
    "GrowthFailure",
    "grow_path_system",
    "build_sparse",
    "SpectralProfile",
    "PseudoParams",
    "Partition",
    "PartitionFailure",
    "ConnectFailure",
    "spectral_profile",
    "mixing_audit",
    "sample_partition",
    "connect_through_reservoir",
    "build_pseudorandom",
    "BuildFailure",
    "ParameterError",
    "GenerationError",
    "ParseError",
    "IntegrityError",
]
