from .models import (  # noqa: F401
    POINT_TYPES, Channel, Constant, Euclidean, ExpDot, Flatten, GramMatrix,
    Hyperboloid, KernelSpec, Mixture, One, Point, Product, Pullback, Rescale,
    Schur, Table, Tensor, as_point, dot, point_from_dict, point_to_dict,
    sq_distance,
)
from .main import (  # noqa: F401
    cross_gram, evaluate, flatten, gram, mixture, pullback, rescale, schur,
    spec_digest, tensor, worker_pool,
)
