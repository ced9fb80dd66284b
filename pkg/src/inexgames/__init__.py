"""Team semantics for inclusion-exclusion logic, second-order formulas and their games."""
from .core import Assignment, Relation, Structure, Team, Vocabulary, parse_structure, parse_team
from .errors import (ArityError, BudgetExceeded, DomainError, InexError, InvalidChoice,
                     InvalidGuard, InvalidInput, ParseError, UnsupportedFormula)
from .formulas import SOFormula, format_formula, parse_formula, parse_so_formula
from .games import Game, Strategy, enumerate_targets, parse_game, format_game, solve_membership
from .semantics import EvalBudget, eval_so, eval_team, satisfying_relations, satisfying_teams

__version__ = "0.1.0"
