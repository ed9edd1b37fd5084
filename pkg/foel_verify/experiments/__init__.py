from .chain import (
    FoelReport,
    check_foel,
    check_gap_formula,
    check_kn_inequality,
    check_volume_monotonicity,
    foel_summary,
    gap_formula,
)
from .lieb_mattis import (
    LiebMattisModel,
    antiferromagnetic_chain,
    ferromagnetic_chain,
    lieb_mattis_scan,
    lowest_spin_by_magnetization,
    model_from_document,
    solvable_cross_model,
)
from .tables import EnergyEntry, EnergyTable, energy_table, lower_hull, ordering_level
from .trees import (
    enumerate_trees,
    line_graph_comparison,
    ssep_spectral_gap,
    tree_foel_level1,
    tree_gap_monotonicity,
    tree_sector_energies,
)

__all__ = [
    "EnergyEntry",
    "EnergyTable",
    "FoelReport",
    "LiebMattisModel",
    "antiferromagnetic_chain",
    "check_foel",
    "check_gap_formula",
    "check_kn_inequality",
    "check_volume_monotonicity",
    "energy_table",
    "enumerate_trees",
    "ferromagnetic_chain",
    "foel_summary",
    "gap_formula",
    "lieb_mattis_scan",
    "line_graph_comparison",
    "lower_hull",
    "lowest_spin_by_magnetization",
    "model_from_document",
    "ordering_level",
    "solvable_cross_model",
    "ssep_spectral_gap",
    "tree_foel_level1",
    "tree_gap_monotonicity",
    "tree_sector_energies",
]
