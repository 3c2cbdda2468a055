"""Exact power sums over F_q[t] and shuffle relations between them."""
from .errors import MZVError
from .ffield import FieldCtx, FieldElem, field_create, field_from_q
from .hg import compute_G, compute_H
from .polyrat import BiPoly, Poly, RatFunc, Series
from .powersums import power_sum, power_sum_double, power_sum_less, delta
from .prover import ProofResult, prove_identity
from .recipes import predict, predict_S, struct_params, ta_prime, t_of
from .solver import ShuffleSet, TaSet, extract_T, solve_shuffle, verify_at_d

__version__ = "0.1.0"

__all__ = [
    "MZVError", "FieldCtx", "FieldElem", "field_create", "field_from_q", "Poly", "RatFunc",
    "Series", "BiPoly", "power_sum", "power_sum_less", "power_sum_double", "delta", "compute_H",
    "compute_G", "ShuffleSet", "TaSet", "solve_shuffle", "verify_at_d", "extract_T",
    "prove_identity", "ProofResult", "predict", "predict_S", "struct_params", "ta_prime", "t_of",
]
