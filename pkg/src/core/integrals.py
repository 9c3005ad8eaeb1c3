"""
K-integrals behind the long-time position moments of a single walker.

For a walker started at |x, s> the exact matrix elements are

    <x' s'| U^-t x^2 U^t |x s> = -1/(2 pi) [t^2 I_A2 + t I_A1 + I_AC + I_Ao(t)]
    <x' s'| U^-t x   U^t |x s> = -i/(2 pi) [t I_B + I_B1 + I_Bo(t)]

Each integral is written over the spectral projectors Pi_d(K) of U_K, which
keeps the integrands independent of the eigenvector phase convention. This
module evaluates them three ways: the printed closed forms, adaptive
quadrature of the defining integrals, and (for the oscillatory pair) the
stationary-phase asymptote. The discrepancy ledger compares closed forms with
quadrature and records where they disagree instead of trusting either.
"""

import logging
from functools import lru_cache
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.config.settings import OSCILLATORY_QUAD_ABS_TOL, OSCILLATORY_QUAD_LIMIT, QUAD_ABS_TOL
from src.core.walk import coin_eigensystem, frequency_derivatives, projector_derivatives
from src.types.reports import LedgerRow
from src.types.walks import DOWN, UP
from src.utils.quadrature import complex_quad

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
SILVER_GAP = SQRT2 - 1.0
COINS = (DOWN, UP)
STATIONARY_POINTS = (-np.pi / 2, np.pi / 2)
CROSS_PAIRS = ((0, 1), (1, 0))

CLOSED_FORM_TOL = 1e-8
OSCILLATORY_TOL_SCALE = 0.05  # tolerance 0.05 / sqrt(t) for the oscillatory pair


def coin_sign(s: int) -> int:
    """(-1)^s with up counted as 1 and down as 0."""
    return -1 if s == UP else 1


# Closed forms


def closed_f(x: int) -> float:
    """f(x) = 2 int e^{iKx} / (3 + cos 2K) dK = √2 pi (√2 - 1)^|x| cos(pi x / 2)."""
    return float(SQRT2 * np.pi * SILVER_GAP ** abs(x) * np.cos(np.pi * x / 2))


def closed_ia(x: int) -> float:
    """I_a(x) = -1/4 int e^{iKx} (3 + cos 2K)^-2 dK."""
    envelope = SILVER_GAP ** abs(x) * (3 * SQRT2 + 2 * abs(x))
    return float(-np.pi / 64 * envelope * np.cos(np.pi * x / 2))


def closed_a2(delta: int, s_bra: int, s_ket: int) -> complex:
    if s_bra != s_ket:
        return 0j
    if delta == 0:
        return complex((1 - SQRT2) * closed_f(0))
    return complex(closed_f(delta))


def closed_b(delta: int, s_bra: int, s_ket: int) -> complex:
    if s_bra == s_ket:
        return coin_sign(s_ket) * 1j * closed_a2(delta, s_bra, s_ket)
    return 0.5j * (closed_f(delta) + closed_f(delta - coin_sign(s_ket) * 2))


def closed_b1(x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> complex:
    delta = x_bra - x_ket
    decay = 1j * np.pi * SILVER_GAP ** abs(delta) * np.cos(np.pi * delta / 2) / SQRT2
    if s_bra != s_ket:
        return complex(decay)
    local = 2j * np.pi * x_ket if delta == 0 else 0j
    return complex(local + coin_sign(s_ket) * decay)


def closed_a1(x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> complex:
    ia = closed_ia
    d = x_bra - x_ket
    xb = x_bra
    if s_bra == s_ket:
        value = (
            16 * xb * (ia(d - 2) + ia(d + 2))
            + 28 * xb * ia(d)
            + 2 * xb * (ia(d + 4) + ia(d - 4))
            + 8 * (ia(d + 2) - ia(d - 2))
        )
        return complex(value if s_ket == UP else -value)
    if s_bra == UP:
        value = (
            (4 * xb - 4) * ia(d + 2)
            + (28 * xb - 8) * ia(d)
            + (28 * xb - 20) * ia(d - 2)
            + 4 * xb * ia(d - 4)
        )
        return complex(value)
    value = (
        (4 * xb + 4) * ia(d - 2)
        + (28 * xb + 8) * ia(d)
        + (28 * xb + 20) * ia(d + 2)
        + 4 * xb * ia(d + 4)
    )
    return complex(value)


def closed_ac(x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> complex:
    """Printed constant-order integral; the same expression for every coin pair."""
    ia = closed_ia
    d = x_bra - x_ket
    xb = x_bra
    value = (
        xb**2 * ia(d - 4)
        - 4 * (1 + xb - 3 * xb**2) * ia(d - 2)
        + (16 - 24 * xb + 38 * xb**2) * ia(d)
        + (4 - 4 * xb + 12 * xb**2) * ia(d + 2)
        + xb**2 * ia(d + 4)
    )
    return complex(value)


def _phase(angle: float) -> complex:
    return complex(np.exp(1j * np.pi * angle))


def closed_ao(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    """Printed leading stationary-phase term of I_Ao, order t^-1/2."""
    xb, x = x_bra, x_ket
    prefactor = np.sqrt(np.pi / (4 * t)) * _phase(-(3 * t + xb + x) / 2)
    late = _phase(t + x) + _phase(3 * t + xb)
    early = _phase(2 * t + x) + _phase(xb)
    slope = (1 + 1j) * xb
    eighth_3, eighth_1 = _phase(0.75), _phase(0.25)

    if s_bra == s_ket == UP:
        body = eighth_3 * ((-1 + slope) * late + (slope - 1j) * early)
    elif s_bra == s_ket == DOWN:
        body = -eighth_3 * ((1 + slope) * late + (slope + 1j) * early)
    elif s_bra == UP:
        body = eighth_1 * ((slope - 1j) * early + (1 - slope) * late)
    else:
        body = eighth_3 * ((1 + (1 - 1j) * xb) * early + 1j * (1 + slope) * late)
    return complex(prefactor * body)


def closed_bo(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    """Printed leading stationary-phase term of I_Bo, order t^-1/2."""
    xb, x = x_bra, x_ket
    prefactor = np.sqrt(np.pi / 2) * np.sqrt(1.0 / t) * _phase(-(3 * t + xb + x) / 2)
    if s_bra == s_ket:
        body = 0.5j * (1 + _phase(t)) * (
            -_phase(t + xb) + _phase(2 * t + xb) + _phase(t + x) + _phase(xb)
        )
        return complex(-coin_sign(s_ket) * prefactor * body)
    body = -0.5 * (-1 + _phase(t)) * (
        _phase(t + xb) + _phase(2 * t + xb) - _phase(t + x) + _phase(xb)
    )
    return complex(prefactor * body)


# Projector-form integrands


def _bra_terms(momentum: float, x_bra: int, s_bra: int) -> np.ndarray:
    """A_d = e^{iKx'} <s'| Pi_d(K) and its first two K-derivatives, shape (3, d, col)."""
    rows = projector_derivatives(momentum)[:, :, s_bra, :]
    phase = np.exp(1j * momentum * x_bra)
    ix = 1j * x_bra
    return phase * np.stack(
        [
            rows[0],
            ix * rows[0] + rows[1],
            ix**2 * rows[0] + 2 * ix * rows[1] + rows[2],
        ]
    )


def _ket_terms(momentum: float, x_ket: int, s_ket: int) -> np.ndarray:
    """B_d = Pi_d(K) e^{-iKx} |s> and its first K-derivative, shape (2, d, row)."""
    cols = projector_derivatives(momentum)[:2, :, :, s_ket]
    phase = np.exp(-1j * momentum * x_ket)
    return phase * np.stack([cols[0], -1j * x_ket * cols[0] + cols[1]])


def _pairings(bra: np.ndarray, ket: np.ndarray) -> np.ndarray:
    """(d, e) table of bra_d . ket_e."""
    return np.einsum('dc,ec->de', bra, ket)


def _cross_phases(momentum: float, t: int) -> np.ndarray:
    """(conj(lambda_d) lambda_e)^t, shape (d, e)."""
    eigenvalues = coin_eigensystem(momentum).eigenvalues
    return np.outer(eigenvalues.conj(), eigenvalues) ** t


def _quad(integrand: Callable[[float], complex], label: str, oscillatory: bool = False) -> complex:
    if oscillatory:
        return complex_quad(
            integrand,
            -np.pi,
            np.pi,
            epsabs=OSCILLATORY_QUAD_ABS_TOL,
            limit=OSCILLATORY_QUAD_LIMIT,
            points=STATIONARY_POINTS,
            label=label,
        )
    return complex_quad(integrand, -np.pi, np.pi, epsabs=QUAD_ABS_TOL, label=label)


# Quadrature of the defining integrals


@lru_cache(maxsize=None)
def quad_f(x: int) -> float:
    value = _quad(lambda k: 2 * np.exp(1j * k * x) / (3 + np.cos(2 * k)), f'f({x})')
    return value.real


@lru_cache(maxsize=None)
def quad_ia(x: int) -> float:
    value = _quad(lambda k: -0.25 * np.exp(1j * k * x) / (3 + np.cos(2 * k)) ** 2, f'I_a({x})')
    return value.real


@lru_cache(maxsize=None)
def quad_a2(delta: int, s_bra: int, s_ket: int) -> complex:
    """I_A2 = -int sum_d omega_d'^2 A_d B_d dK."""

    def integrand(k: float) -> complex:
        speed = frequency_derivatives(k)[:, 0]
        diagonal = np.diag(_pairings(_bra_terms(k, delta, s_bra)[0], _ket_terms(k, 0, s_ket)[0]))
        return -np.sum(speed**2 * diagonal)

    return _quad(integrand, f'I_A2({delta}, {s_bra}, {s_ket})')


@lru_cache(maxsize=None)
def quad_b(delta: int, s_bra: int, s_ket: int) -> complex:
    """I_B = i int sum_d omega_d' A_d B_d dK."""

    def integrand(k: float) -> complex:
        speed = frequency_derivatives(k)[:, 0]
        diagonal = np.diag(_pairings(_bra_terms(k, delta, s_bra)[0], _ket_terms(k, 0, s_ket)[0]))
        return 1j * np.sum(speed * diagonal)

    return _quad(integrand, f'I_B({delta}, {s_bra}, {s_ket})')


@lru_cache(maxsize=None)
def quad_b1(x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> complex:
    """I_B1 = int sum_d A_d' B_d dK."""

    def integrand(k: float) -> complex:
        bra = _bra_terms(k, x_bra, s_bra)
        ket = _ket_terms(k, x_ket, s_ket)
        return np.trace(_pairings(bra[1], ket[0]))

    return _quad(integrand, f'I_B1({x_bra}, {x_ket}, {s_bra}, {s_ket})')


@lru_cache(maxsize=None)
def quad_a1(x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> complex:
    """I_A1 = int sum_d [2i omega_d' A_d' B_d + i omega_d'' A_d B_d] dK."""

    def integrand(k: float) -> complex:
        speed, curvature = frequency_derivatives(k).T
        bra = _bra_terms(k, x_bra, s_bra)
        ket = _ket_terms(k, x_ket, s_ket)
        moving = np.diag(_pairings(bra[1], ket[0]))
        still = np.diag(_pairings(bra[0], ket[0]))
        return np.sum(2j * speed * moving + 1j * curvature * still)

    return _quad(integrand, f'I_A1({x_bra}, {x_ket}, {s_bra}, {s_ket})')


@lru_cache(maxsize=None)
def quad_ac(x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> complex:
    """I_AC = int sum_d A_d'' B_d dK."""

    def integrand(k: float) -> complex:
        bra = _bra_terms(k, x_bra, s_bra)
        ket = _ket_terms(k, x_ket, s_ket)
        return np.trace(_pairings(bra[2], ket[0]))

    return _quad(integrand, f'I_AC({x_bra}, {x_ket}, {s_bra}, {s_ket})')


def _ao_amplitude(k: float, x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> np.ndarray:
    """-A_d' B_e' over (d, e); the t-free amplitude of I_Ao after one integration by parts."""
    bra = _bra_terms(k, x_bra, s_bra)
    ket = _ket_terms(k, x_ket, s_ket)
    return -_pairings(bra[1], ket[1])


def _bo_amplitude(k: float, x_bra: int, x_ket: int, s_bra: int, s_ket: int) -> np.ndarray:
    bra = _bra_terms(k, x_bra, s_bra)
    ket = _ket_terms(k, x_ket, s_ket)
    return _pairings(bra[1], ket[0])


def _off_diagonal(table: np.ndarray) -> complex:
    return table[0, 1] + table[1, 0]


@lru_cache(maxsize=None)
def quad_ao(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    """
    I_Ao(t) = int sum_{d != e} [A_d'' + 2it omega_d' A_d'] B_e (conj(lambda_d) lambda_e)^t dK.

    Evaluated in its integrated-by-parts form -int sum_{d != e} A_d' B_e' (...)^t dK,
    whose amplitude does not grow with t.
    """

    def integrand(k: float) -> complex:
        weighted = _ao_amplitude(k, x_bra, x_ket, s_bra, s_ket) * _cross_phases(k, t)
        return _off_diagonal(weighted)

    return _quad(integrand, f'I_Ao({x_bra}, {x_ket}, {s_bra}, {s_ket}; t={t})', oscillatory=True)


def quad_ao_direct(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    """I_Ao(t) straight from its definition; the amplitude grows linearly in t."""

    def integrand(k: float) -> complex:
        speed = frequency_derivatives(k)[:, 0]
        bra = _bra_terms(k, x_bra, s_bra)
        ket = _ket_terms(k, x_ket, s_ket)
        amplitude = _pairings(bra[2] + 2j * t * speed[:, None] * bra[1], ket[0])
        return _off_diagonal(amplitude * _cross_phases(k, t))

    return _quad(integrand, f'I_Ao direct (t={t})', oscillatory=True)


@lru_cache(maxsize=None)
def quad_bo(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    """I_Bo(t) = int sum_{d != e} A_d' B_e (conj(lambda_d) lambda_e)^t dK."""

    def integrand(k: float) -> complex:
        weighted = _bo_amplitude(k, x_bra, x_ket, s_bra, s_ket) * _cross_phases(k, t)
        return _off_diagonal(weighted)

    return _quad(integrand, f'I_Bo({x_bra}, {x_ket}, {s_bra}, {s_ket}; t={t})', oscillatory=True)


# Stationary phase


def stationary_phase(amplitude: Callable[[float], np.ndarray], t: int) -> complex:
    """
    Leading large-t term of int sum_{d != e} g_de(K) (conj(lambda_d) lambda_e)^t dK.

    The phase omega_d - omega_e is stationary where cos K = 0; each critical point
    K0 contributes g(K0) e^{i t phi(K0)} e^{i sgn(phi'') pi/4} sqrt(2 pi / (t |phi''|)).

    Args:
        amplitude: Returns the (d, e) table g(K)
        t: Step count (>= 1)
    """
    if t < 1:
        raise ValueError(f'Stationary phase needs t >= 1, got {t}')
    total = 0j
    for point in STATIONARY_POINTS:
        table = amplitude(point)
        phases = _cross_phases(point, t)
        curvature = frequency_derivatives(point)[:, 1]
        for d, e in CROSS_PAIRS:
            second = curvature[d] - curvature[e]
            total += (
                table[d, e]
                * phases[d, e]
                * np.exp(1j * np.sign(second) * np.pi / 4)
                * np.sqrt(2 * np.pi / (t * abs(second)))
            )
    return complex(total)


def stationary_ao(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    return stationary_phase(lambda k: _ao_amplitude(k, x_bra, x_ket, s_bra, s_ket), t)


def stationary_bo(x_bra: int, x_ket: int, s_bra: int, s_ket: int, t: int) -> complex:
    return stationary_phase(lambda k: _bo_amplitude(k, x_bra, x_ket, s_bra, s_ket), t)


class IntegralTable:
    """
    Evaluators for every integral of the asymptotic moment expansions.

    Args:
        method: 'closed' for the printed closed forms, 'quadrature' for the defining integrals
        oscillatory: How I_Ao and I_Bo are evaluated: 'closed', 'stationary' or
            'quadrature'; defaults to method
    """

    METHODS = ('closed', 'quadrature')
    OSCILLATORY_METHODS = ('closed', 'stationary', 'quadrature')

    def __init__(self, method: str = 'closed', oscillatory: Optional[str] = None):
        if method not in self.METHODS:
            raise ValueError(f'Unknown integral method {method!r}; choose from {self.METHODS}')
        oscillatory = oscillatory or method
        if oscillatory not in self.OSCILLATORY_METHODS:
            raise ValueError(
                f'Unknown oscillatory method {oscillatory!r}; '
                f'choose from {self.OSCILLATORY_METHODS}'
            )
        self.method = method
        self.oscillatory = oscillatory
        closed = method == 'closed'
        self.f = closed_f if closed else quad_f
        self.ia = closed_ia if closed else quad_ia
        self.a2 = closed_a2 if closed else quad_a2
        self.a1 = closed_a1 if closed else quad_a1
        self.ac = closed_ac if closed else quad_ac
        self.b = closed_b if closed else quad_b
        self.b1 = closed_b1 if closed else quad_b1
        self.ao = {'closed': closed_ao, 'stationary': stationary_ao, 'quadrature': quad_ao}[
            oscillatory
        ]
        self.bo = {'closed': closed_bo, 'stationary': stationary_bo, 'quadrature': quad_bo}[
            oscillatory
        ]

    def __repr__(self) -> str:
        return f'IntegralTable(method={self.method!r}, oscillatory={self.oscillatory!r})'


def integral_table(method: str = 'closed', oscillatory: Optional[str] = None) -> IntegralTable:
    return IntegralTable(method, oscillatory)


def _row(name: str, args: tuple, closed: complex, quadrature: complex, tol: float) -> LedgerRow:
    error = abs(complex(closed) - complex(quadrature))
    return LedgerRow(
        integral=name,
        args=','.join(str(a) for a in args),
        closed=complex(closed),
        quadrature=complex(quadrature),
        abs_error=error,
        tolerance=tol,
        agrees=bool(error <= tol),
    )


def discrepancy_ledger(
    max_arg: int = 2, steps: Sequence[int] = (100, 400), include_oscillatory: bool = True
) -> List[LedgerRow]:
    """
    Compare every closed form with quadrature of its defining integral.

    Position arguments run over -max_arg..max_arg and all four coin pairs. The
    oscillatory pair is compared at each t in steps with tolerance 0.05 t^-1/2,
    both for the printed formula and for the stationary-phase asymptote.

    Returns:
        List of ledger rows; rows with agrees=False mark closed forms that quadrature contradicts
    """
    span = range(-max_arg, max_arg + 1)
    coin_pairs = [(sb, sk) for sb in COINS for sk in COINS]
    rows: List[LedgerRow] = []

    for x in span:
        rows.append(_row('f', (x,), closed_f(x), quad_f(x), CLOSED_FORM_TOL))
        rows.append(_row('I_a', (x,), closed_ia(x), quad_ia(x), CLOSED_FORM_TOL))
        for sb, sk in coin_pairs:
            args = (x, sb, sk)
            rows.append(_row('I_A2', args, closed_a2(*args), quad_a2(*args), CLOSED_FORM_TOL))
            rows.append(_row('I_B', args, closed_b(*args), quad_b(*args), CLOSED_FORM_TOL))

    for xb in span:
        for xk in span:
            for sb, sk in coin_pairs:
                args = (xb, xk, sb, sk)
                rows.append(_row('I_A1', args, closed_a1(*args), quad_a1(*args), CLOSED_FORM_TOL))
                rows.append(_row('I_AC', args, closed_ac(*args), quad_ac(*args), CLOSED_FORM_TOL))
                rows.append(_row('I_B1', args, closed_b1(*args), quad_b1(*args), CLOSED_FORM_TOL))

    if include_oscillatory:
        for t in steps:
            tol = OSCILLATORY_TOL_SCALE / np.sqrt(t)
            for sb, sk in coin_pairs:
                args = (0, 0, sb, sk, t)
                exact_ao, exact_bo = quad_ao(*args), quad_bo(*args)
                rows.append(_row('I_Ao', args, closed_ao(*args), exact_ao, tol))
                rows.append(_row('I_Bo', args, closed_bo(*args), exact_bo, tol))
                rows.append(_row('I_Ao~', args, stationary_ao(*args), exact_ao, tol))
                rows.append(_row('I_Bo~', args, stationary_bo(*args), exact_bo, tol))

    disagreements = [row for row in rows if not row['agrees']]
    for row in disagreements:
        logger.warning(
            f"{row['integral']}({row['args']}): closed form {row['closed']:.10g} vs "
            f"quadrature {row['quadrature']:.10g} (|diff| {row['abs_error']:.3e})"
        )
    logger.info(f'Ledger: {len(rows)} comparisons, {len(disagreements)} disagreements')
    return rows
