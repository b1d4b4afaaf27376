"""Symmetric multiple chessboard complexes, shellings, homology and constrained Tverberg partitions."""

__version__ = "0.1.0"

from .complex import (  # noqa: E402
    Cell,
    ComplexSpec,
    FVector,
    LabeledPartition,
    ResourceLimitError,
    SimplicialComplex,
    deleted_join_membership,
    enumerate_facets,
    f_vector,
    is_simplex,
    symmetrized_complex_as_labeled,
)
from .homology import connectivity_evidence, euler_characteristic, reduced_homology_ranks  # noqa: E402
from .shelling import case_a_witness, constituent_order, paper_precedes, paper_shelling_order, verify_shelling  # noqa: E402
