from .models import (  # noqa: F401
    HyperboloidPoint, InverseLogConditional, Isotropic, IsotropicAtoms,
    MinkowskiForm, SechPower,
)
from .main import (  # noqa: F401
    arccosh, beta_from_cnd, check_hyperbolic, check_log_conditional,
    hilbert_distance, hyperbolic_distance, hyperbolic_from_hilbert,
    inverse_kernel, isotropic_kernel, lift, minkowski_form, minkowski_gram,
    power_matrix, project, sech_power_kernel,
)
