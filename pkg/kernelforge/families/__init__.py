from .models import (  # noqa: F401
    Gaussian, GneitingClassic, GneitingGeneral, GneitingSpec, MaternKernel,
    MaternParams, MatrixGaussianInstance, MatrixGaussianReport, RadialCmMixture,
)
from .matrix import (  # noqa: F401
    MATRIX_KERNELS, ConstantMatrix, GammaPowerMatrix, MaternHilbertMatrix,
    MaternProductMatrix, MatrixGaussian, MatrixKernel, SeparableMatrix,
)
from .main import (  # noqa: F401
    classify_gamma_power, classify_gneiting_general, classify_matern_hilbert,
    classify_matern_product, classify_matrix_gaussian, direct_sum_rank_probe,
    gamma_power_matrix, gaussian, gneiting, matern, matern_hilbert_matrix,
    matern_oracle, matern_product_matrix, probe_c_condition, radial_cm_mixture,
)
