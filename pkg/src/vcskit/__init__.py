"""Visual cryptography schemes: models, constructions, bounds and search."""

from .access import (
    AccessStructure,
    Graph,
    classify,
    enumerate_sets,
    from_graph,
    make_access_structure,
)
from .bounds import (
    BoundCertificate,
    best_lower_bound,
    bound_theoremA,
    check_corollary2,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem4,
)
from .constructions import (
    Biclique,
    StrongBicliqueCovering,
    StrongColoring,
    biclique_blocks_vcs4,
    biclique_cover_vcs2,
    builtin,
    compose_strong_layers,
    k_out_of_k,
    transport_hom,
)
from .graphs import (
    biclique_cover,
    find_onto_edge_homomorphism,
    max_induced_matching,
    strong_biclique_covering,
    strong_edge_coloring,
)
from .imaging import (
    BinaryImage,
    ShareSet,
    decode_stacked,
    encrypt_image,
    read_pbm,
    stack,
    stack_images,
    stacked_pattern_distribution,
    write_pbm,
)
from .matrices import (
    BasisScheme,
    BitMatrix,
    CollectionScheme,
    ColumnMultiset,
    canonical,
    concat,
    expand_to_collection,
    or_rows,
    restrict,
    sample_share_matrix,
    weight,
)
from .search import SearchOutcome, feasible_at, optimal_pixel_expansion
from .verify import VerifyReport, alpha_feasible, verify_basis, verify_collections, verify_scheme

__version__ = "0.1.0"
