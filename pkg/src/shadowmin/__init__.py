"""shadowmin: exact minimization of normalized inflection points over
generic immersed closed plane curves with a fixed embedded shadow."""

from .model import (ArcEnd, Corner, DecoratedShadow, End, Polygon,
                    ShadowError, ShadowIndex, Side, Vertex, canonicalize,
                    faces, validate_shadow)
from .embed import (Embedding, derive_embedding, from_gauss_code,
                    outer_face_index, with_derived_nesting)
from .blocks import BlockReport, Ring, ShadowKind, block_edges, classify
from .coorient import (CertificateResult, ConflictReport, Coor, conflicts,
                       curve_side_bits, holonomy, is_admissible,
                       polygon_admissible, verify_certificate)
from .solve import (Solution, SolveStats, mu, mu_loc, solve_bruteforce,
                    solve_cactus, solve_tree_dp)
from .gauss import (ObstructionReport, PtBounds, TurningProfile,
                    covering_depth, gauss_obstruction, pt_bounds,
                    rotation_number, validate_profile)

__version__ = "0.1.0"

__all__ = [
    "ArcEnd", "BlockReport", "CertificateResult", "ConflictReport", "Coor",
    "Corner", "DecoratedShadow", "Embedding", "End", "ObstructionReport",
    "Polygon", "PtBounds", "Ring", "ShadowError", "ShadowIndex",
    "ShadowKind", "Side", "Solution", "SolveStats", "TurningProfile",
    "Vertex",
    "block_edges", "canonicalize", "classify", "conflicts",
    "covering_depth", "curve_side_bits", "derive_embedding", "faces",
    "from_gauss_code", "gauss_obstruction", "holonomy", "is_admissible",
    "mu", "mu_loc", "outer_face_index", "polygon_admissible", "pt_bounds",
    "rotation_number", "solve_bruteforce", "solve_cactus", "solve_tree_dp",
    "validate_profile", "validate_shadow", "verify_certificate",
    "with_derived_nesting", "__version__",
]
