"""Entropic geometry of detector outcomes on multi-qubit states."""
from .baselines import comparison_sweep, concurrence, discord, mutual_information
from .infogeo import entropy_table, geometry_report, info_area, info_distance, info_volume
from .qstate import DensityMatrix, MeasurementSetting, joint_distribution, make_state
from .reactivity import IntegratorConfig, reactivity, reactivity_sweep, search_schumacher

__all__ = [
    "DensityMatrix",
    "IntegratorConfig",
    "MeasurementSetting",
    "comparison_sweep",
    "concurrence",
    "discord",
    "entropy_table",
    "geometry_report",
    "info_area",
    "info_distance",
    "info_volume",
    "joint_distribution",
    "make_state",
    "mutual_information",
    "reactivity",
    "reactivity_sweep",
    "search_schumacher",
]
__version__ = "0.1.0"
