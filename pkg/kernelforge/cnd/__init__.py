from .models import (  # noqa: F401
    CmComposition, CndReport, Embedding, MonotonicityReport, PowerDistance,
    SchoenbergTransform, SquaredDistance,
)
from .main import (  # noqa: F401
    check_cnd, check_metrizable, classify_cm_composition, classify_schoenberg,
    cm_compose, embed, gamma_matrix, geometric_grid, induced_distance,
    induced_distance_matrix, probe_bernstein, probe_completely_monotone,
    schoenberg_transform,
)
