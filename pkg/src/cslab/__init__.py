"""Exact Cappell-Shaneson matrix calculus: standard forms, twist moves,
triviality certificates, enumeration and loop winding parity."""
# flake8: noqa: F401
from .cs import (
    CsMatrix,
    StdForm,
    am_matrix,
    am_std_form,
    cs_failures,
    is_cs_matrix,
    normalize_sign,
    recognize_am,
    to_standard_form,
    validate_std_form,
)
from .errors import CslabError
from .linalg import IntMat3, char_poly, det3, inverse_unimodular, mat_mul, parse_matrix
from .moves import (
    Derivation,
    Move,
    adjust_trace,
    apply_move,
    conjugate,
    move_i,
    move_ii,
    verify_derivation,
)
from .poly import CubicPoly, SturmChain, count_roots_in_interval
from .reduction import (
    EnumBounds,
    SurvivorReport,
    TrivialityCertificate,
    bounded_conjugacy_search,
    certify_trivial,
    enumerate_std_forms,
    reduce_mod_a,
    reduce_mod_d,
    survivor_filter,
    verify_certificate,
)
from .straightening import (
    MatLoop,
    homotopy_straightenable,
    linearly_straightenable,
    loop_winding,
    loop_winding_mod2,
    segment_in_glplus,
    verify_framing_swap,
    winding_number,
)

__version__ = "0.1.0"
