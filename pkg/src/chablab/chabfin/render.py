"""DOT rendering of a subgroup lattice with saturation edges."""
from __future__ import annotations

from typing import Optional

from .group import Subgroup, SubgroupLattice
from .saturation import saturation


def lattice_dot(lattice: SubgroupLattice, U: Optional[Subgroup] = None, name: str = "lattice") -> str:
    """Hasse diagram (solid) plus dashed edges ``H -> [H]_U`` for unsaturated H."""
    G = lattice.group
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, H in enumerate(lattice.subgroups):
        label = f"H{i} |{H.order}| c{lattice.class_of[i]}"
        lines.append(f'  H{i} [label="{label}"];')
    for i, j in lattice.covers():
        lines.append(f"  H{i} -> H{j};")
    if U is not None:
        for i, H in enumerate(lattice.subgroups):
            j = lattice.index[saturation(G, U, H)]
            if j != i:
                lines.append(f'  H{i} -> H{j} [style=dashed, color=blue, label="sat"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
