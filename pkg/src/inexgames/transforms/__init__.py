"""Union-closure companions, anchor guards and the game templates."""
from .companions import (TransformReport, myopic_companion_so, myopic_companion_so_report,
                         team_myopic_companion, team_myopic_companion_report)
from .guards import expand_dependence, guard_atoms, unguard_atoms
from .templates import (template_phi_win, template_psi_eex, template_psi_init,
                        template_psi_move, template_psi_target, template_psi_win,
                        template_theta_target)

__all__ = [
    "TransformReport", "myopic_companion_so", "myopic_companion_so_report",
    "team_myopic_companion", "team_myopic_companion_report", "expand_dependence",
    "guard_atoms", "unguard_atoms", "template_phi_win", "template_psi_eex",
    "template_psi_init", "template_psi_move", "template_psi_target", "template_psi_win",
    "template_theta_target",
]
