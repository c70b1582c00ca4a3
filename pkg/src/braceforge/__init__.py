"""braceforge: regular subgroups of holomorphs of finite abelian groups.

Enumerates the regular subgroups of Hol(G,+) for a finite abelian p-group
(G,+) with a layered, pruned, checkpointed search over a Sylow p-subgroup,
classifies them up to conjugation by Aut(G,+) — equivalently, classifies
the left braces with additive group (G,+) up to isomorphism — and
cross-validates everything against an independent brute-force oracle.
"""

from .abelian import GroupSpec, add, element_order, enumerate_elements, negate
from .autgroup import (
    apply,
    aut_generators,
    compose,
    invert,
    is_automorphism,
    sylow_p_aut_generators,
)
from .braces import (
    Brace,
    RegularSubgroup,
    brace_from_regular,
    kernel_of_lambda,
    lambda_table,
    regular_from_brace,
    verify_brace,
    verify_lambda_cocycle,
)
from .checkpoint import LayerState, checkpoint_load, checkpoint_save
from .classify import (
    BraceInvariants,
    Fingerprint,
    are_isomorphic,
    brace_invariants,
    braces_isomorphic,
    class_length,
    classify_braces,
    group_fingerprint,
)
from .complements import complements, complements_brute_force
from .errors import (
    BraceforgeError,
    CapacityError,
    ContractError,
    DomainError,
    IntegrityError,
    ShapeError,
    ValidityError,
)
from .holomorph import Hol, Subgroup, conjugate_subgroup, sylow_p_hol_generators, translations_subgroup
from .layered import (
    NormalSeries,
    brute_force_regular_oracle,
    elementary_abelian_series,
    enumerate_layered,
)
from .subgroups import (
    closure,
    dedup_under_group,
    is_regular,
    merge_deduped,
    orbit_of_zero,
    size_filter,
    stabilizer_of_zero,
    transitive_preimage_filter,
)

__version__ = "0.1.0"
