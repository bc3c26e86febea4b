"""Exact decision procedures for partial orders on dual matrices E + eps E0."""

from .canonical import (
    ChainParams,
    FactorPair,
    GeneratedPair,
    GeneratorParams,
    corollary_params,
    gen_chain,
    gen_nonsingular,
    gen_orthogonal,
    gen_pair,
    perturb_pair,
)
from .dual import (
    DualMatrix,
    DualRankValue,
    dggi,
    dmpgi,
    dmpgi_exists,
    dual_index_one,
    dual_rank,
    gdgi,
    mpdgi,
)
from .kernel import Matrix, Rational, group_inverse, matrix_index, moore_penrose, rank
from .orders import OrderKind, OrderReport, check, implication_matrix

__all__ = [
    "ChainParams", "DualMatrix", "DualRankValue", "FactorPair", "GeneratedPair", "GeneratorParams",
    "Matrix", "OrderKind", "OrderReport", "Rational", "check", "corollary_params", "dggi", "dmpgi",
    "dmpgi_exists", "dual_index_one", "dual_rank", "gdgi", "gen_chain", "gen_nonsingular",
    "gen_orthogonal", "gen_pair", "group_inverse", "implication_matrix", "matrix_index", "moore_penrose",
    "mpdgi", "perturb_pair", "rank",
]
