"""
Double exponential quadrature on (0, inf).

The substitution t = e^s maps (0, inf) onto the real line, where the
sinh-sinh rule s = sinh(pi/2 sinh u) makes the integrand decay doubly
exponentially in u. The trapezoid rule in u is then refined by halving the
step until two successive levels agree.
"""

import logging
import math

import numpy as np

from kernelforge import settings
from kernelforge.exceptions import DomainError, NumericalError, ParameterError

logger = logging.getLogger(__name__)

_HALF_PI = math.pi / 2.0


def _transformed(integrand, u):
    sh = np.sinh(u)
    s = np.sinh(_HALF_PI * sh)
    ds_du = _HALF_PI * np.cosh(u) * np.cosh(_HALF_PI * sh)
    t = np.exp(s)
    with np.errstate(over='ignore', under='ignore', invalid='ignore'):
        values = np.asarray(integrand(t), dtype=float) * t * ds_du
    if not np.all(np.isfinite(values)):
        bad = t[~np.isfinite(values)][0]
        raise NumericalError(f"integrand is not finite near t = {bad:.3e}")
    return values


def quad_semi_infinite(integrand, accuracy=None, max_nodes=None):
    """Integrate a positive integrable function over (0, inf).

    ``integrand`` must accept a numpy array of t values. Stops when two
    successive refinements differ by at most max(accuracy,
    accuracy * |value|).
    """
    accuracy = settings.QUAD_DEFAULT_ACCURACY if accuracy is None else accuracy
    max_nodes = settings.QUAD_MAX_NODES if max_nodes is None else max_nodes
    if not accuracy > 0:
        raise ParameterError(f"accuracy must be positive, got {accuracy}")
    u_max = math.asinh(math.asinh(settings.QUAD_LOG_RANGE) / _HALF_PI)

    h = 0.5
    count = int(math.floor(u_max / h))
    u = h * np.arange(-count, count + 1)
    estimate = h * float(np.sum(_transformed(integrand, u)))
    nodes = u.size
    level = 0
    while True:
        h /= 2.0
        level += 1
        # new nodes are the odd multiples of the halved step
        lo = math.ceil((-u_max / h - 1.0) / 2.0)
        hi = math.floor((u_max / h - 1.0) / 2.0)
        u = h * (2.0 * np.arange(lo, hi + 1) + 1.0)
        nodes += u.size
        refined = 0.5 * estimate + h * float(np.sum(_transformed(integrand, u)))
        change = abs(refined - estimate)
        estimate = refined
        if level >= settings.QUAD_MIN_LEVELS and \
                change <= max(accuracy, accuracy * abs(refined)):
            logger.debug("quadrature converged: level %d, %d nodes", level, nodes)
            return refined
        if nodes >= max_nodes:
            raise NumericalError(
                f"quadrature did not reach accuracy {accuracy} within "
                f"{max_nodes} nodes", partial=refined)


def bessel_k_integral(nu, z, accuracy=1e-13):
    """K_nu(z) from its integral representation int_0^inf e^{-z cosh t} cosh(nu t) dt.

    Independent of :func:`kernelforge.numerics.bessel_k`; used as its oracle.
    The factor e^{-z} is pulled out of the integrand to keep the integral of
    order one.
    """
    nu = float(nu)
    z = float(z)
    if not z > 0:
        raise DomainError(f"bessel_k_integral needs z > 0, got {z}")

    def integrand(t):
        with np.errstate(over='ignore'):
            base = -z * (np.cosh(t) - 1.0)
            return 0.5 * (np.exp(base + nu * t) + np.exp(base - nu * t))

    return math.exp(-z) * quad_semi_infinite(integrand, accuracy)
