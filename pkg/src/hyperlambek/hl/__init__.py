"""The hypergraph Lambek calculus: formulas, rules and proof search."""
from .formulas import (Division, Formula, FormulaError, Hole, LCAtom, LCOver, LCProd, LCUnder,
                       Primitive, Product, Sequent, fill_hole, head, is_skeleton_free,
                       lemma1_applies, lemma1_conclusion_check, polarity_count, prim, subformulas,
                       tr_antecedent, tr_classic)
from .rules import (RULES, Derivation, RuleCheck, backward_expansions, check_derivation,
                    check_rule)
from .search import DEFAULT_BUDGET, ProofResult, Prover, Status, prove, residuation_check
from .syntax import (HLParseError, format_formula, format_graph, parse_formula, parse_graph,
                     parse_sequent, sequent_from_json, sequent_to_json)

__all__ = [name for name in dir() if not name.startswith("_")]
