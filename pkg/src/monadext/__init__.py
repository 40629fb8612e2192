"""Extensions of binary operations along monads on finite sets."""
from .core import (LawReport, Monad, TElement, check_algebra_morphism, check_free_determination,
                   check_functor_laws, check_monad_laws, check_mult_naturality,
                   check_unit_naturality, get_monad, kleisli_bind, materialize_carrier, tmap)
from .extend import (ExtendedOp, check_closure, check_extension_associativity,
                     check_extension_axioms, check_homomorphism, check_left_shifts, check_oracle,
                     check_uniqueness, extend_direct, extend_via_tensor, extended_cayley_table,
                     idempotents, left_shift_ext, oracle_convolution, oracle_setwise)
from .finset import (BinOpTable, FinMap, FinSet, canonical_set, compose, cyclic_group,
                     enumerate_binary_ops, identity, is_associative, left_zero, product)
from .tensor import (check_tensor_associativity, check_tensor_naturality, check_tensor_unit,
                     oracle_tensor_exp, oracle_tensor_prob, tensor)
from .zoo import EXP, IDENTITY, INCL, LAMBDA, PROB, support

__version__ = "0.1.0"

__all__ = [
    "LawReport",
    "Monad",
    "TElement",
    "check_algebra_morphism",
    "check_free_determination",
    "check_functor_laws",
    "check_monad_laws",
    "check_mult_naturality",
    "check_unit_naturality",
    "get_monad",
    "kleisli_bind",
    "materialize_carrier",
    "tmap",
    "ExtendedOp",
    "check_closure",
    "check_extension_associativity",
    "check_extension_axioms",
    "check_homomorphism",
    "check_left_shifts",
    "check_oracle",
    "check_uniqueness",
    "extend_direct",
    "extend_via_tensor",
    "extended_cayley_table",
    "idempotents",
    "left_shift_ext",
    "oracle_convolution",
    "oracle_setwise",
    "BinOpTable",
    "FinMap",
    "FinSet",
    "canonical_set",
    "compose",
    "cyclic_group",
    "enumerate_binary_ops",
    "identity",
    "is_associative",
    "left_zero",
    "product",
    "check_tensor_associativity",
    "check_tensor_naturality",
    "check_tensor_unit",
    "oracle_tensor_exp",
    "oracle_tensor_prob",
    "tensor",
    "EXP",
    "IDENTITY",
    "INCL",
    "LAMBDA",
    "PROB",
    "support",
]
