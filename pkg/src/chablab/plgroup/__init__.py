"""Piecewise-affine homeomorphisms of Q_p and the groups built from them."""
from .family import (
    AnnulusEntry,
    Certificate,
    FamilyError,
    FamilySpec,
    alt_generators,
    annulus_action,
    make_alt_family,
    sub_balls,
    verify_certificate,
)
from .gf import (
    GFElement,
    GFError,
    Truncation,
    admissible_level,
    from_plmap,
    germ_trivial_at,
    gf_compose,
    gf_invert,
    gf_membership,
    neighborhood_depth,
    neighborhood_member,
    split_at,
    tail_element,
    truncate_to_ball,
    truncation_range,
)
from .plmap import (
    AffinePiece,
    FixedPoints,
    NotBijective,
    PieceLimitExceeded,
    PLMap,
    Support,
    ball_permutation,
    ball_swap,
    canonicalize,
    commutator,
    compose,
    fixed_points,
    from_laws,
    in_gamma_p,
    in_lambda_p,
    in_Vp,
    invert,
    prefix_map,
    preserves,
    restrict_to,
    support,
    supported_in,
    translation_on,
)
from .words import (
    GeneratorTable,
    UnknownGenerator,
    Word,
    WordParseError,
    adding_machine,
    evaluate_word,
    format_word,
    index_of_word,
    lambda_table,
    parse_word,
    parse_word_file,
    vp_shift,
    vp_swap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
