"""Pattern classes of permutations: wreath products, profiles, minimal
blocks, pin sequences, and basis search."""

from .avoidance import (
    PermClass,
    av,
    class_literal,
    enumerate_members,
    member,
    named,
    parse_class,
)
from .basis_search import (
    FAMILIES,
    AntichainFamily,
    BasisRecord,
    antichain_member,
    check_antichain,
    verify_basis_element,
    wreath_basis,
)
from .blocks_pins import (
    MinimalBlock,
    PinProbeResult,
    PinSequence,
    PinWord,
    classify_pins,
    left_reaching,
    minimal_block,
    parse_pin_word,
    pin_probe,
    pin_word_to_perm,
    right_reaching,
)
from .decomposition import (
    SubstitutionDecomposition,
    is_simple,
    skeleton,
    substitution_decomposition,
    sum_skew_status,
)
from .perm_core import (
    CapExceeded,
    Permutation,
    delete_point,
    format_perm,
    inflate,
    intervals,
    involves,
    occurrences,
    parse_perm,
    points,
    reduce,
)
from .profile import (
    ProfileDecomposition,
    all_deflations,
    is_valid_deflation,
    left_greedy_profile,
    wreath_member,
)

__version__ = "0.1.0"

__all__ = [
    "AntichainFamily",
    "BasisRecord",
    "CapExceeded",
    "FAMILIES",
    "MinimalBlock",
    "PermClass",
    "Permutation",
    "PinProbeResult",
    "PinSequence",
    "PinWord",
    "ProfileDecomposition",
    "SubstitutionDecomposition",
    "all_deflations",
    "antichain_member",
    "av",
    "check_antichain",
    "class_literal",
    "classify_pins",
    "delete_point",
    "enumerate_members",
    "format_perm",
    "inflate",
    "intervals",
    "involves",
    "is_simple",
    "is_valid_deflation",
    "left_greedy_profile",
    "left_reaching",
    "member",
    "minimal_block",
    "named",
    "occurrences",
    "parse_class",
    "parse_perm",
    "parse_pin_word",
    "pin_probe",
    "pin_word_to_perm",
    "points",
    "reduce",
    "right_reaching",
    "skeleton",
    "substitution_decomposition",
    "sum_skew_status",
    "verify_basis_element",
    "wreath_basis",
    "wreath_member",
]
