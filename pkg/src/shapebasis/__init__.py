"""Rectangle bases with prescribed shapes along a set of directions.

Geometry of the circumscribed and inscribed axis rectangles, the shape
function they induce, finite-family maximal averages, and the block
families that defeat weak-type Phi estimates.
"""

__version__ = "0.1.0"

from .basis import (
    BlockConfig,
    ShapeFunction,
    block_angles,
    check_angle_condition,
    corollary_config,
    geometric_angles,
    moriyon_witness,
    shape_from_solver,
    stokolos_intervals,
)
from .blocks import (
    BlockFamily,
    build_family,
    containment_check,
    divergence_report,
    half_area_check,
    quarter_bound_check,
    uncovered_strip_check,
    union_area,
)
from .geometry import (
    EMPTY,
    ConvexPolygon,
    Point2,
    Rectangle,
    check_rect,
    clip_convex,
    dyadic_parent,
    hat_rect,
    polygon_area,
    rect_polygon,
)
from .maximal import (
    RectFamily,
    WeakTypeReport,
    average_over,
    maximal_at,
    sandwich_check,
    superlevel_measure,
    weak_type_probe,
)
from .orlicz import SimpleFunction, YoungFunction, llogl, necessity_ratio, phi_integral
from .sampling import MeasureEstimate
from .shape_law import (
    GrowthFit,
    ShapeLawParams,
    area_multipliers,
    growth_fit,
    rho,
    rho_partials,
    sigma_lower_bound,
    sigma_star,
    solve_sigma,
)
