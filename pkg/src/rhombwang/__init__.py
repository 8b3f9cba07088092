"""rhombwang: edge-to-edge rhombus Wang tilings with exact geometry.

Rhombus tiles carry colors on their four sides; a tiling is valid when every
shared edge matches colors. The library enumerates locally allowed patterns,
runs the disk-tiling refutation search for the domino problem on rhombus
subshifts, computes the standard reductions between square Wang tilings and
rhombus subshifts, analyzes chains (de Bruijn ribbons), and ships the Penrose
Wang tilesets.
"""

from .chains import (
    Chain,
    ChainError,
    chain_indices,
    chain_level,
    check_monotonicity_cone,
    crossings,
    extract_chains,
    index_occurrences,
)
from .cyclotomic import CycInt, CycRing, QCyc
from .geometry import (
    Contact,
    DirectionBasis,
    ExactPoint,
    GeometryError,
    Patch,
    PlacedRhombus,
    PlacementError,
    Shape,
    ShapeSet,
    classify_contact,
    connected_components,
    place_adjacent,
    placements_on_edge,
    vertex_coordinates,
)
from .patterns import (
    Pattern,
    RankExceedsKnownPrefix,
    SubshiftSpec,
    canonicalize,
    full_shift,
    is_minimal_for,
    minimal_radius,
    rank_allowed,
)
from .penrose import (
    ArrowLabel,
    ArrowTile,
    PenroseError,
    arrows_to_colors,
    penrose_arrow_tiles,
    penrose_color_action,
    penrose_wang4,
    penrose_wang20,
    pentagrid_patch,
    single_tile_isometry_counterexample,
)
from .reductions import (
    BLANK,
    ColoringReport,
    RecurrenceReport,
    ReductionError,
    ReductionReport,
    ShapeRecurrence,
    SquareWangTileset,
    WangCertificate,
    color_penrose_patch,
    color_penrose_patch_report,
    find_uniformly_recurrent_candidate,
    fresh_color_reduction,
    fresh_color_report,
    phi_r,
    phi_r_report,
    restrict_shapeset,
)
from .solver import (
    BudgetExceeded,
    EnumerationResult,
    SearchVerdict,
    disk_tiling,
    enumerate_locally_allowed,
    periodic_certificate,
    refutation_search,
)
from .tiles import (
    Tile,
    Tileset,
    TilesetError,
    check_color_validity,
    erase_colors,
    rotate_tile,
    rotation_closure,
    rotation_step,
)

__version__ = "0.1.0"

__all__ = [
    "ArrowLabel",
    "ArrowTile",
    "BLANK",
    "BudgetExceeded",
    "Chain",
    "ChainError",
    "ColoringReport",
    "Contact",
    "CycInt",
    "CycRing",
    "DirectionBasis",
    "EnumerationResult",
    "ExactPoint",
    "GeometryError",
    "Patch",
    "Pattern",
    "PenroseError",
    "PlacedRhombus",
    "PlacementError",
    "QCyc",
    "RankExceedsKnownPrefix",
    "RecurrenceReport",
    "ReductionError",
    "ReductionReport",
    "SearchVerdict",
    "Shape",
    "ShapeRecurrence",
    "ShapeSet",
    "SquareWangTileset",
    "SubshiftSpec",
    "Tile",
    "Tileset",
    "TilesetError",
    "WangCertificate",
    "arrows_to_colors",
    "canonicalize",
    "chain_indices",
    "chain_level",
    "check_color_validity",
    "check_monotonicity_cone",
    "classify_contact",
    "connected_components",
    "color_penrose_patch",
    "color_penrose_patch_report",
    "crossings",
    "disk_tiling",
    "enumerate_locally_allowed",
    "erase_colors",
    "extract_chains",
    "find_uniformly_recurrent_candidate",
    "fresh_color_reduction",
    "fresh_color_report",
    "full_shift",
    "index_occurrences",
    "is_minimal_for",
    "minimal_radius",
    "penrose_arrow_tiles",
    "penrose_color_action",
    "penrose_wang4",
    "penrose_wang20",
    "pentagrid_patch",
    "periodic_certificate",
    "phi_r",
    "phi_r_report",
    "place_adjacent",
    "placements_on_edge",
    "rank_allowed",
    "refutation_search",
    "restrict_shapeset",
    "rotate_tile",
    "rotation_closure",
    "rotation_step",
    "vertex_coordinates",
    "__version__",
]
