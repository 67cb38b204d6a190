"""Explicit constructions: translations into terms and axioms built from terms."""
from .grid import (
    GRID_VOCAB, Tile, grid_closure, grid_like_formula, grid_sentence, grid_terms,
    random_grid_structure, tiles_from_json, tiling_terms, tiling_to_term, tiling_vocab, torus,
)
from .infinity import (
    C_FREE_VOCAB, INFINITY_VOCAB, infinity_axiom, infinity_axiom_c_free,
    infinity_axiom_c_free_literal, infinity_conjuncts, infinity_conjuncts_c_free,
    infinity_prefix_structure,
)
from .modal import (
    KripkeModel, KripkeVerdict, MAnd, MBox, MDia, MNot, MOr, MProp, ModalSyntaxError,
    complete_world_bound, format_modal, kripke_sat, modal_depth, modal_to_term, parse_modal,
    random_modal, s52_to_term,
)
from .ol import Levels, OLError, check_ol, is_ol, ol_levels, ol_to_term

__all__ = [
    "GRID_VOCAB", "Tile", "grid_closure", "grid_like_formula", "grid_sentence", "grid_terms",
    "random_grid_structure", "tiles_from_json", "tiling_terms", "tiling_to_term", "tiling_vocab",
    "torus", "C_FREE_VOCAB", "INFINITY_VOCAB", "infinity_axiom", "infinity_axiom_c_free",
    "infinity_axiom_c_free_literal", "infinity_conjuncts", "infinity_conjuncts_c_free",
    "infinity_prefix_structure", "KripkeModel", "KripkeVerdict", "MAnd", "MBox", "MDia", "MNot",
    "MOr", "MProp", "ModalSyntaxError", "complete_world_bound", "format_modal", "kripke_sat",
    "modal_depth", "modal_to_term", "parse_modal", "random_modal", "s52_to_term", "Levels",
    "OLError", "check_ol", "is_ol", "ol_levels", "ol_to_term",
]
