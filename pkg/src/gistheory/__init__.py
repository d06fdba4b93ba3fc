"""Generalized interval systems, dual groups and transformational networks over Z_m."""

from .contextual import (
    affine_system,
    contextual_group,
    morphism_from_affine,
    op_J,
    op_K,
    op_Q,
    op_Qbar,
    op_W,
    ti_orbit,
    tritone_condition,
    verify_affine_commutation,
)
from .covers import cover_check, enumerate_octatonic_covers, translation_fixed_triples
from .errors import (
    DegenerateInputError,
    DegenerateSymmetryError,
    DomainError,
    GisError,
    LibraryBug,
    MembershipError,
    MorphismViolation,
    NetworkError,
    PreconditionError,
)
from .gis import (
    Gis,
    action_from_gis,
    canonical_gis,
    check_gis_morphism,
    classify_morphism,
    gis_from_action,
)
from .groupcore import Carrier, FiniteGroup, Perm, close_generators, dual_group, is_simply_transitive
from .netio import export_dot, parse_network, serialize_network, verify_network
from .pcmath import AffineMap, PcSegment, VoicePerm, parse_affine, parse_segment
from .serial import build_retro_duality, build_row_subsystem, conj_op, retro_system, rich
from .subdual import build_m7_m10_network, build_octatonic_table, build_sub_dual, conjugate_orbit

__version__ = "0.1.0"
