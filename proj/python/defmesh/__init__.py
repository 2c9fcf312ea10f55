"""Deformation-based mesh generation.

Thin Python surface over the C++ core: build structured grids, run the
generate/refine/high-order pipeline from a JSON config, and export meshes.
"""

from ._core import (
    Artifacts,
    Config,
    ConfigError,
    HighOrderMesh,
    Mesh,
    Shape,
    box_grid,
    edge_deviation,
    export_msh,
    export_vtk,
    generate,
    hoe,
    hoe_edge_deviation,
    load_config,
    load_mesh,
    mesh_from_json,
    parse_config,
    plot_svg,
    rect_grid,
    refine,
)

__version__ = "0.1.0"

__all__ = [
    "Artifacts",
    "Config",
    "ConfigError",
    "HighOrderMesh",
    "Mesh",
    "Shape",
    "box_grid",
    "edge_deviation",
    "export_msh",
    "export_vtk",
    "generate",
    "hoe",
    "hoe_edge_deviation",
    "load_config",
    "load_mesh",
    "mesh_from_json",
    "parse_config",
    "plot_svg",
    "rect_grid",
    "refine",
    "__version__",
]
