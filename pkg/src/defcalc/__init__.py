"""Exact deformation calculus on finite-dimensional graded models.

Everything is computed over the rationals with fractions.Fraction; there
are no floats and no tolerances anywhere.  The layers, bottom up:

graded   signed multilinear algebra: graded spaces, Koszul signs, exterior
         words, cochain cohomology with class projection.
artin    finite-dimensional local base rings (truncated polynomial style)
         and elements of m (x) V.
dgla     differential graded Lie and commutative algebras, their axiom
         checkers, tensor and Hom constructions, Maurer-Cartan residuals,
         gauge action, order-by-order solving with obstruction classes.
linfty   the same homotopical data as coderivations of the reduced
         symmetric coalgebra: codifferential and morphism checks through a
         chosen weight, pushforward of Maurer-Cartan elements, homotopies
         over a polynomial-in-t extension of the base.
hitchin  the matrix-valued models: a square matrix of anticommuting
         one-letter forms, the associated dgla, the family of trace maps
         into an abelian target, and the obstruction-kernel consequence.
cli      batch front end over JSON documents with deterministic reports.
"""

from .artin import (
    ArtinAlgebra,
    ArtinVector,
    make_artin,
    validate_artin_vector,
)
from .dgla import (
    Cdga,
    CheckReport,
    Dgla,
    GaugeResult,
    McSolveResult,
    ObstructionEvent,
    bch_product,
    bracket_artin,
    check_cdga,
    check_dgla,
    gauge_act,
    gauge_equivalent,
    hom_dgla,
    is_mc,
    mc_residual,
    mc_solve,
    tensor_cdga_dgla,
    trivial_cdga,
)
from .graded import (
    GradedMap,
    GradedSpace,
    GradedVector,
    CohomologySummary,
    NotAComplexError,
    complex_cohomology,
    koszul_sign,
)
from .hitchin import (
    HiggsFieldError,
    HitchinPair,
    build_hitchin_dgla,
    build_hitchin_morphism,
    complex_C_cohomology,
    g_coefficient,
    hitchin_map,
    hitchin_target,
    make_hitchin_pair,
    matrix_wedge_dgla,
    obstruction_kernel_map,
    trace_commutator_oracle,
)
from .linfty import (
    LInftyMorphism,
    LInftyStructure,
    PolyPath,
    abelian_homotopy_witness,
    check_codifferential,
    check_linfty_morphism,
    coderivation_extend,
    linfty_from_dgla,
    linfty_mc_residual,
    morphism_extend,
    pushforward_mc,
    verify_homotopy_witness,
)

__version__ = "0.1.0"

__all__ = [
    "ArtinAlgebra",
    "ArtinVector",
    "Cdga",
    "CheckReport",
    "CohomologySummary",
    "Dgla",
    "GaugeResult",
    "GradedMap",
    "GradedSpace",
    "GradedVector",
    "HiggsFieldError",
    "HitchinPair",
    "LInftyMorphism",
    "LInftyStructure",
    "McSolveResult",
    "NotAComplexError",
    "ObstructionEvent",
    "PolyPath",
    "abelian_homotopy_witness",
    "bch_product",
    "bracket_artin",
    "build_hitchin_dgla",
    "build_hitchin_morphism",
    "check_cdga",
    "check_codifferential",
    "check_dgla",
    "check_linfty_morphism",
    "coderivation_extend",
    "complex_C_cohomology",
    "complex_cohomology",
    "g_coefficient",
    "gauge_act",
    "gauge_equivalent",
    "hitchin_map",
    "hitchin_target",
    "hom_dgla",
    "is_mc",
    "koszul_sign",
    "linfty_from_dgla",
    "linfty_mc_residual",
    "make_artin",
    "make_hitchin_pair",
    "matrix_wedge_dgla",
    "mc_residual",
    "mc_solve",
    "morphism_extend",
    "obstruction_kernel_map",
    "pushforward_mc",
    "tensor_cdga_dgla",
    "trace_commutator_oracle",
    "trivial_cdga",
    "validate_artin_vector",
    "verify_homotopy_witness",
]
