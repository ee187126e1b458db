from .models import PsdClass, PsdVerdict, Spectrum, SymMatrix, as_sym_matrix  # noqa: F401
from .main import (  # noqa: F401
    bessel_k, classify_psd, gamma_fn, numerical_rank, singular_values,
    sym_eigen,
)
from .quadrature import bessel_k_integral, quad_semi_infinite  # noqa: F401
