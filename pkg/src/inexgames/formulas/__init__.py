"""Formula ASTs, parser, printer, normal forms and fragment checks."""
from .ast import (LITERALS, RESERVED_PREFIX, ROOT, TEAM_ATOMS, UGAME_GROUPS,
                  And, Dep, Eq, Exc, Exists, Forall, Formula, Inc, Indep, Lit,
                  Not, Or, SOFormula, UGame, all_variables, atom_variables,
                  bound_variables, child_id, children, conj, disj, exists,
                  forall, free_variables, fresh_name, has_team_atoms,
                  is_first_order, is_nnf, relation_symbols, rename_bound,
                  rename_free, rename_relation, subformula_at,
                  subformula_multiset, ugame_group, ugame_layout_vars, walk)
from .classify import Verdict, check_myopic_so, check_x_myopic, literal_polarities
from .nnf import arrow, negate, to_nnf
from .parser import parse_formula, parse_so_formula, tokenize
from .printer import format_formula, format_so_formula
