"""Impressionist image rendering with coherence-length shaped brushstrokes.

The pipeline: seed stroke sites on randomized grids, measure the local
directional texture coherence at each site, turn the 32-length profile into
a star polygon, and fan-fill it with a color sampled from the source image.
A fixed-radius disk brush is included as the baseline.
"""

from .brush import (
    DEFAULT_TRACE_DISTANCE,
    StarPolygon,
    fan_fill,
    line_cells,
    min_trace_distance,
    polygon_from_cld,
    scale_for_size,
    stroke_pixels,
)
from .cld import (
    DIRECTION_COUNT,
    ZERO_MEAN_GUARD,
    CldDiagram,
    DirectionTable,
    cld_at,
    coherence_length,
    default_scan_limit,
    directions,
    local_moment,
)
from .grid import (
    RNG_ALGORITHM,
    FillMode,
    GridSpec,
    StrokeSeed,
    displace_grid,
    make_seeds,
    regular_grid,
    sample_spacing,
    step_rng,
)
from .image import (
    CorruptImageError,
    GrayField,
    RgbImage,
    UnsupportedFormatError,
    global_mean,
    load_image,
    save_image,
    to_gray,
)
from .render import (
    Canvas,
    DefaultColor,
    RenderConfig,
    RenderMode,
    RenderResult,
    StrokeRecord,
    render_cldpb,
    render_cldpb_trace,
    render_cpb,
    render_cpb_trace,
    resolve_default,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # image
    "RgbImage",
    "GrayField",
    "UnsupportedFormatError",
    "CorruptImageError",
    "to_gray",
    "global_mean",
    "load_image",
    "save_image",
    # grid
    "RNG_ALGORITHM",
    "FillMode",
    "GridSpec",
    "StrokeSeed",
    "step_rng",
    "regular_grid",
    "sample_spacing",
    "displace_grid",
    "make_seeds",
    # cld
    "DIRECTION_COUNT",
    "ZERO_MEAN_GUARD",
    "DirectionTable",
    "CldDiagram",
    "directions",
    "default_scan_limit",
    "local_moment",
    "coherence_length",
    "cld_at",
    # brush
    "DEFAULT_TRACE_DISTANCE",
    "StarPolygon",
    "scale_for_size",
    "polygon_from_cld",
    "min_trace_distance",
    "line_cells",
    "stroke_pixels",
    "fan_fill",
    # render
    "RenderMode",
    "DefaultColor",
    "RenderConfig",
    "Canvas",
    "StrokeRecord",
    "RenderResult",
    "resolve_default",
    "render_cpb",
    "render_cpb_trace",
    "render_cldpb",
    "render_cldpb_trace",
]
