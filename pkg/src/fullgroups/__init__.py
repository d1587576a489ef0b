"""Exact computation in topological full groups of Cantor minimal systems.

Elements act as powers of the underlying transformation on the pieces of
a clopen partition; everything downstream (towers, factorizations, the
index homomorphism, kernel decompositions, finite approximation
witnesses) is computed and verified exactly over those partitions.
"""

from .canon import (
    Factorization,
    PermutationForm,
    Refusal,
    RotationForm,
    factorize,
    in_stabilizer,
    index,
    is_n_permutation,
    is_n_rotation,
    kernel_decompose,
    orbit_counts,
    order_exceeds,
    rotation_escapes,
    separation_parts,
    separation_witness,
)
from .clopen import ClopenSet, cylinder, union_all
from .errors import (
    FullGroupsError,
    NotPartitionError,
    ParseError,
    PreconditionError,
    SystemConfigError,
    VerificationError,
)
from .group import (
    GroupElement,
    cocycle_at,
    cocycle_bound,
    commutator,
    compose,
    disjoint_cylinder_block,
    element_hash,
    embed_symmetric,
    equals,
    identity,
    invert,
    make_element,
    order,
    shift,
    support,
)
from .lef import (
    FinitePermGroupDesc,
    LEFWitness,
    lef_map,
    odometer_structure,
    perm_group,
    structure_decompose,
    structure_partition,
    verify_lef,
)
from .systems import SystemSpec, base_point, language, make_system
from .towers import (
    KRPartition,
    first_return,
    induced,
    kr_from_set,
    refine_against,
    tower_sequence,
)

__all__ = [
    "ClopenSet",
    "Factorization",
    "FinitePermGroupDesc",
    "FullGroupsError",
    "GroupElement",
    "KRPartition",
    "LEFWitness",
    "NotPartitionError",
    "ParseError",
    "PermutationForm",
    "PreconditionError",
    "Refusal",
    "RotationForm",
    "SystemConfigError",
    "SystemSpec",
    "VerificationError",
    "base_point",
    "cocycle_at",
    "cocycle_bound",
    "commutator",
    "compose",
    "cylinder",
    "disjoint_cylinder_block",
    "element_hash",
    "embed_symmetric",
    "equals",
    "factorize",
    "first_return",
    "identity",
    "in_stabilizer",
    "index",
    "induced",
    "invert",
    "is_n_permutation",
    "is_n_rotation",
    "kernel_decompose",
    "kr_from_set",
    "language",
    "lef_map",
    "make_element",
    "make_system",
    "odometer_structure",
    "orbit_counts",
    "order",
    "order_exceeds",
    "perm_group",
    "refine_against",
    "rotation_escapes",
    "separation_parts",
    "separation_witness",
    "shift",
    "structure_decompose",
    "structure_partition",
    "support",
    "tower_sequence",
    "union_all",
    "verify_lef",
]
