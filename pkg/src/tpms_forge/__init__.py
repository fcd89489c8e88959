"""tpms-forge: triply periodic minimal surface bricks for 3D printing.

Pipeline: implicit field -> voxel grid -> solidify (network/sheet, optionally
solved for a density or wall target) -> marching cubes + boundary caps ->
watertight mesh -> metrics and printability warnings -> STL/OBJ export.
"""

from .bricks import BrickResult, BrickSpec, SolidMode, build_brick, default_resolution, validate_constraints
from .errors import (
    CapExceeded,
    CapFailure,
    EnvelopeExceeded,
    ForgeError,
    GridMismatch,
    InvalidThickness,
    MalformedMesh,
    NonFiniteField,
    NonMonotoneObjective,
    NotWatertight,
    ResolutionTooCoarse,
    SinkError,
    SpecInvalid,
    TargetUnreachable,
)
from .fields import (
    FieldSample,
    FieldSpec,
    SurfaceInfo,
    SurfaceKind,
    Symmetry,
    evaluate,
    evaluate_batch,
    gradient,
    gradient_batch,
    probe,
    surface_catalog,
    symmetry_descriptor,
)
from .grids import DEFAULT_VOXEL_CAP, Domain, VoxelGrid, sample, transform_inside_negative, union_min
from .io_export import (
    read_mesh_file,
    read_obj,
    read_stl_binary,
    write_mesh_file,
    write_obj,
    write_report_json,
    write_stl_ascii,
    write_stl_binary,
)
from .mesher import TriangleMesh, cap_boundary, marching_cubes, weld_and_clean
from .metrics import (
    MeshReport,
    TopologyResult,
    area_volume,
    measure,
    min_wall,
    overhang_fraction,
    relative_density,
    topology_check,
)
from .solver import SolveResult, solve_iso_for_density, solve_iso_on_grid, solve_thickness_for_wall

__version__ = "0.1.0"
