"""Distinct distances between point sets on Pfaffian curves."""

from ._core import (
    Isometry,
    PfaffdistError,
    PointConfiguration,
    bounds_report,
    classify,
    component_bound,
    compose,
    count_incidences,
    detect_symmetries,
    distance_histogram,
    distinct_distances_3d,
    energy,
    gen_log_circles,
    generate,
    generate_from_text,
    inverse,
    log_circle_invariant,
    proximity_energy,
    rigid_motions_mapping,
    rotation_commutator,
    run_sweep,
)

__all__ = [
    "Isometry",
    "PfaffdistError",
    "PointConfiguration",
    "bounds_report",
    "classify",
    "component_bound",
    "compose",
    "count_incidences",
    "detect_symmetries",
    "distance_histogram",
    "distinct_distances_3d",
    "energy",
    "gen_log_circles",
    "generate",
    "generate_from_text",
    "inverse",
    "log_circle_invariant",
    "proximity_energy",
    "rigid_motions_mapping",
    "rotation_commutator",
    "run_sweep",
]
