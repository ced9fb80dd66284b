"""Formula-to-game compilers, the CNF reduction and the team codec for union games."""
from .codec import (Decoding, GameCodecLayout, decode_game_from_team, encode_game_in_team,
                    eval_ugame_atom, is_complete_team)
from .mcgames import (FormulaPos, TargetPos, TeamRowPos, cnf_satisfiable, cnf_to_game,
                      game_as_structure, mc_game_exclusion, mc_game_myopic, mc_game_so,
                      myopic_parts, parse_dimacs, relation_to_targets, structure_as_game,
                      target_relations, to_prenex_so)

__all__ = [
    "Decoding", "GameCodecLayout", "decode_game_from_team", "encode_game_in_team",
    "eval_ugame_atom", "is_complete_team", "FormulaPos", "TargetPos", "TeamRowPos",
    "cnf_satisfiable", "cnf_to_game", "game_as_structure", "mc_game_exclusion",
    "mc_game_myopic", "mc_game_so", "myopic_parts", "parse_dimacs", "relation_to_targets",
    "structure_as_game", "target_relations", "to_prenex_so",
]
