"""Homotopy invariants of finite topological spaces.

Finite spaces are compared through three simplicial models built from
them: the order complex of the specialization preorder, the Čech nerve of
the finest open cover, and the component complex of a hypercovering.
All homology is computed over the integers with exact arithmetic.
"""

from .errors import (
    DepthTooShallow,
    InvalidInput,
    Mismatch,
    MissingEmptyOrFull,
    NoMorphismFound,
    NotAChainMap,
    NotAComplex,
    NotARefinement,
    NotATopology,
    NotConstant,
    NotContinuous,
    NotSimplicial,
    ProtoshapeError,
    SpaceMismatch,
    TooLarge,
)
from .homology import HomologyGroups, homology, homology_map, simplicial_homology
from .hypercover import (
    Hypercovering,
    cech_hypercover,
    gamma,
    hypercover_morphism,
    mccord_hypercover,
    verify_hyper,
)
from .proset import (
    DirectedPoset,
    ProSet,
    ProSetMorphism,
    compose,
    constant_value,
    identity_morphism,
    pi_map,
    pi_proset,
)
from .simplicial import (
    ChainComplex,
    SimplicialMap,
    TruncSimplicialSet,
    cech_nerve,
    coskeleton,
    normalized_chains,
    order_complex,
)
from .smith import IntegerMatrix, smith_normal_form
from .space import (
    ContinuousMap,
    FiniteSpace,
    OpenCover,
    OpenPartition,
    Preorder,
    check_continuity,
    connected_components,
    enumerate_open_partitions,
    refines,
    space_from_preorder,
    specialization_preorder,
    t0_quotient,
    validate_topology,
)

__all__ = [
    "cech_hypercover",
    "cech_nerve",
    "ChainComplex",
    "check_continuity",
    "compose",
    "connected_components",
    "constant_value",
    "ContinuousMap",
    "coskeleton",
    "DepthTooShallow",
    "DirectedPoset",
    "enumerate_open_partitions",
    "FiniteSpace",
    "gamma",
    "homology",
    "homology_map",
    "HomologyGroups",
    "hypercover_morphism",
    "Hypercovering",
    "identity_morphism",
    "IntegerMatrix",
    "InvalidInput",
    "mccord_hypercover",
    "Mismatch",
    "MissingEmptyOrFull",
    "NoMorphismFound",
    "normalized_chains",
    "NotAChainMap",
    "NotAComplex",
    "NotARefinement",
    "NotATopology",
    "NotConstant",
    "NotContinuous",
    "NotSimplicial",
    "OpenCover",
    "OpenPartition",
    "order_complex",
    "pi_map",
    "pi_proset",
    "Preorder",
    "ProSet",
    "ProSetMorphism",
    "ProtoshapeError",
    "refines",
    "simplicial_homology",
    "SimplicialMap",
    "smith_normal_form",
    "space_from_preorder",
    "SpaceMismatch",
    "specialization_preorder",
    "t0_quotient",
    "TooLarge",
    "TruncSimplicialSet",
    "validate_topology",
    "verify_hyper",
]

__version__ = "0.1.0"
