"""Finite quandles, knot colorings of braid closures, and coloring-based
knot invariant reports."""

from .coloring import (
    ColoringCount,
    ColoringVector,
    CocycleInvariant,
    LiftMultiset,
    cocycle_invariant,
    col_f,
    count_colorings,
    enumerate_colorings,
    enumerate_homs,
)
from .constructions import (
    AlexanderSpec,
    Cocycle2,
    GroupModel,
    abelian_extension,
    alexander_field,
    alexander_general,
    conjugation_quandle,
    dihedral_quandle,
    find_connected_extensions,
    galkin_quandle,
    generalized_alexander,
    is_simple_alexander,
    trivial_quandle,
    validate_cocycle,
)
from .core import (
    Permutation,
    PermGroup,
    QuandleHom,
    QuandleTable,
    dual,
    find_isomorphism,
    inner_group,
    is_connected,
    product,
    properties,
    right_translation,
    validate,
)
from .errors import QuandleLabError
from .formats import SCHEMA
from .knots import BraidWord, KnotRecord, load_knot_table, mirror_word, parse_braid, symmetry_orbit
from .lab import (
    ColoringMatrix,
    bound_report,
    build_matrix,
    check_distinguishing,
    check_prop35,
    lq,
    minimize_set,
    similarity_partition,
)

__version__ = "0.1.0"
