"""Finite-group Chabauty computations: lattices, saturation, towers, URS and IRS."""
from .dyadic import dyadic_counterexample
from .group import (
    FiniteGroup,
    GroupError,
    Subgroup,
    SubgroupLattice,
    quotient_group,
    subgroup_lattice,
)
from .measures import InvariantMeasure, URS, irs_vertices, lift_from_quotient, saturated_push, urs_list
from .render import lattice_dot
from .saturation import (
    Tower,
    is_saturated,
    orbit_partition,
    partition_fixer,
    saturation,
    saturation_formula,
    saturation_orbit,
    saturation_table,
    trunc_saturation,
)

__all__ = [
    "FiniteGroup",
    "GroupError",
    "InvariantMeasure",
    "Subgroup",
    "SubgroupLattice",
    "Tower",
    "URS",
    "dyadic_counterexample",
    "irs_vertices",
    "is_saturated",
    "lattice_dot",
    "lift_from_quotient",
    "orbit_partition",
    "partition_fixer",
    "quotient_group",
    "saturated_push",
    "saturation",
    "saturation_formula",
    "saturation_orbit",
    "saturation_table",
    "subgroup_lattice",
    "trunc_saturation",
    "urs_list",
]
