"""Exact Laurent expansions of quasi-cluster variables.

Two independent computation routes are exposed: enumeration of (good)
perfect matchings on snake and band graphs, and products of 2x2 step
matrices along a curve's standard path.  The skein module checks product
identities between expansions.
"""

from .curvespec import (
    Crossing,
    CurveSpec,
    LaminationSigns,
    double,
    parse_spec,
    reflect,
    render_spec,
    rotate,
)
from .errors import (
    DomainError,
    InputError,
    ParseError,
    QuasiClusterError,
    SignError,
    ValidationError,
)
from .laurent import LaurentPoly, canonical_string, mono, parse_poly, var
from .mat2 import Mat2, det, identity, mat_mul, normalize_sign, trace, upper_right
from .mpath import Step, chi, path_matrix, standard_mpath, step_matrix
from .skein import (
    IdentitySpec,
    Report,
    load_identities,
    verify_identity,
    verify_mutation,
    verify_square_relation,
)
from .snakeband import (
    Matching,
    Tile,
    TiledGraph,
    build_graph,
    coefficient_monomial,
    enumerate_matchings,
    flip_graph,
    graph_matrix_formula,
    induced_orientations,
    matching_enumerator,
    tile_matrix,
    to_dot,
    weight_monomial,
)

__version__ = "0.1.0"
