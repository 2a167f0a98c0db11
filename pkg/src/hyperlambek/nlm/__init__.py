"""NL♦: multimodal non-associative Lambek calculus with modalities."""
from .prover import NLMDerivation, NLMProver, check_derivation_nlm, check_rule_nlm, prove_nlm
from .structure import (canon, contexts, equivalent, normalize_steps, plug, structural_class,
                        structural_path, subterm)
from .syntax import ParseError, parse_database, parse_formula, parse_sequent
from .terms import (Angle, Atom, Box, Diamond, Leaf, NLMSequent, Over, Pair, Prod, Signature,
                    SignatureError, Under, UnsupportedSignature)

__all__ = [name for name in dir() if not name.startswith("_")]
