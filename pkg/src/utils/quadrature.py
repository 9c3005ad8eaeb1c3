"""
Adaptive quadrature of complex-valued integrands on a finite interval.

Wraps scipy.integrate.quad, integrating real and imaginary parts separately and
turning silent accuracy warnings into QuadratureError.
"""

import logging
from typing import Callable, Optional, Sequence

from scipy import integrate

from src.config.settings import QUAD_ABS_TOL, QUAD_LIMIT, QUAD_REL_TOL
from src.types.errors import QuadratureError

logger = logging.getLogger(__name__)


def _quad_part(
    func: Callable[[float], float],
    a: float,
    b: float,
    epsabs: float,
    epsrel: float,
    limit: int,
    points: Optional[Sequence[float]],
    label: str,
) -> float:
    result = integrate.quad(
        func,
        a,
        b,
        epsabs=epsabs,
        epsrel=epsrel,
        limit=limit,
        points=points,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3 and abserr > epsabs:
        logger.warning('Quadrature of %s stopped early: %s', label, result[3])
        raise QuadratureError(
            f'Quadrature of {label} did not reach tolerance {epsabs:g} '
            f'(estimated error {abserr:g}): {result[3]}'
        )
    return value


def complex_quad(
    func: Callable[[float], complex],
    a: float,
    b: float,
    epsabs: float = QUAD_ABS_TOL,
    epsrel: float = QUAD_REL_TOL,
    limit: int = QUAD_LIMIT,
    points: Optional[Sequence[float]] = None,
    label: str = 'integrand',
) -> complex:
    """
    Integrate a complex function of one real variable over [a, b].

    Args:
        func: Integrand returning a complex number
        a, b: Integration limits
        epsabs, epsrel: Requested absolute and relative accuracy
        limit: Maximum number of adaptive subintervals
        points: Interior break points (stationary points, kinks)
        label: Name used in log messages and errors

    Returns:
        complex: The integral

    Raises:
        QuadratureError: If the adaptive rule gives up above the requested tolerance
    """
    real = _quad_part(
        lambda k: func(k).real, a, b, epsabs, epsrel, limit, points, f'Re {label}'
    )
    imag = _quad_part(
        lambda k: func(k).imag, a, b, epsabs, epsrel, limit, points, f'Im {label}'
    )
    return complex(real, imag)
