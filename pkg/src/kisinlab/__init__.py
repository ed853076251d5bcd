"""Exact linear algebra over truncated power-series and tame local rings.

Canonical forms and orderings for matrices over k_E[[u]]/(u^N), two-factor
shape factorizations, planted instance generators, valuation lemmas over
(Z/p^M)[x]/(x^{e0} - p), and a seeded campaign runner with a CLI.
"""

from ._kernels import BACKEND
from .canonical import (
    PropertyZCertificate,
    check_property_z,
    ordering_from_product,
    property_z_canonicalize,
    q_factorize,
)
from .campaign import SUITES, Campaign, run_suite
from .errors import (
    BadParameters,
    ConfigError,
    DivisibilityViolation,
    GapViolation,
    HypothesisViolation,
    IllegalStep,
    InputNotFactored,
    KisinlabError,
    NotInvertible,
    NotNormalizable,
    NotPropertyP,
    PrecisionExhausted,
    SearchSpaceTooLarge,
)
from .family import PhiFamily, phi_conjugate
from .filtration import (
    HRecord,
    build_h,
    check_coe2,
    check_property_a,
    coe2_witness,
    n_operator,
    suggest_m,
    taylor_twist,
)
from .gf import GF, FieldElem, gf
from .kisin import (
    HTWeights,
    RankOneBar,
    RankOneO,
    build_extension,
    check_e_phi_shape,
    diag_shape_verify,
    make_adapted_phi,
    make_triangular_instance,
    rank1_reduce,
)
from .localfield import (
    LocalFieldElem,
    LocalRing,
    LocalRingElem,
    LPolynomial,
    check_property_b,
    eisenstein_roots,
)
from .series import SeriesMatrix, TruncSeries
from .shape import (
    AllowableStep,
    BlockFactorization,
    PhiShapeFactor,
    ShapeFactorization,
    ShapedMatrix,
    allowable_step,
    check_deg,
    check_p,
    ext_block_sum,
    normalize_to_deg,
    reduce_p_to_diagonal,
    shape_decompose_phi,
    shape_factorize,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # canonical
    "PropertyZCertificate",
    "check_property_z",
    "ordering_from_product",
    "property_z_canonicalize",
    "q_factorize",
    # campaigns
    "SUITES",
    "Campaign",
    "run_suite",
    # errors
    "BadParameters",
    "ConfigError",
    "DivisibilityViolation",
    "GapViolation",
    "HypothesisViolation",
    "IllegalStep",
    "InputNotFactored",
    "KisinlabError",
    "NotInvertible",
    "NotNormalizable",
    "NotPropertyP",
    "PrecisionExhausted",
    "SearchSpaceTooLarge",
    # families
    "PhiFamily",
    "phi_conjugate",
    # filtration
    "HRecord",
    "build_h",
    "check_coe2",
    "check_property_a",
    "coe2_witness",
    "n_operator",
    "suggest_m",
    "taylor_twist",
    # fields and series
    "GF",
    "FieldElem",
    "gf",
    "SeriesMatrix",
    "TruncSeries",
    # weights and modules
    "HTWeights",
    "RankOneBar",
    "RankOneO",
    "build_extension",
    "check_e_phi_shape",
    "diag_shape_verify",
    "make_adapted_phi",
    "make_triangular_instance",
    "rank1_reduce",
    # local rings
    "LocalFieldElem",
    "LocalRing",
    "LocalRingElem",
    "LPolynomial",
    "check_property_b",
    "eisenstein_roots",
    # shapes
    "AllowableStep",
    "BlockFactorization",
    "PhiShapeFactor",
    "ShapeFactorization",
    "ShapedMatrix",
    "allowable_step",
    "check_deg",
    "check_p",
    "ext_block_sum",
    "normalize_to_deg",
    "reduce_p_to_diagonal",
    "shape_decompose_phi",
    "shape_factorize",
]
