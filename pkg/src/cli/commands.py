"""
Implementations of the qwalk subcommands.

Each cmd_* function computes one table or figure, writes it through an
OutputWriter and returns the results dict that goes into the JSON summary.
"""

import logging
import re
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.config.settings import COIN_NORM_TOL, MAX_SPECTRAL_N
from src.core import distance, entanglement, multiparticle, spectral, symmetry
from src.core.walk import as_coin_vector, evolve, position_distribution
from src.types.errors import InvalidCoinError
from src.types.reports import ClassicalSample, DistanceSample, SpectrumRow
from src.types.walks import CoinLike, CoinVector
from src.utils import plotting
from src.utils.file_handler import OutputWriter

logger = logging.getLogger(__name__)

_BINARY_K = re.compile(r'^\(([01]+)\)b$')


def parse_k(text: str) -> int:
    """Read k in decimal, '0b...' or '(1001010)b' form."""
    text = str(text).strip()
    if match := _BINARY_K.match(text):
        return int(match.group(1), 2)
    try:
        return int(text, 0)
    except ValueError:
        raise ValueError(f'Cannot read {text!r} as an index; use 74, 0b1001010 or (1001010)b')


def parse_int_list(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    return [int(part) for part in text.split(',') if part.strip()]


def parse_coin(spec: str, n: int) -> CoinVector:
    """
    Turn a coin spec into a normalized joint coin vector.

    Args:
        spec: 'eigen:<k>', 'basis:<xi>', a comma-separated list of 2^n complex
            amplitudes, or (n = 1 only) a coin label such as 'up'
        n: Particle count

    Raises:
        InvalidCoinError: If the spec is malformed, has the wrong length or is not normalized
    """
    spec = spec.strip()
    kind, _, value = spec.partition(':')
    try:
        if kind == 'eigen' and value:
            k = parse_k(value)
            if not 0 <= k < 2**n:
                raise InvalidCoinError(f'Eigenstate index {k} outside 0..{2**n - 1}')
            return spectral.normalized_eigenstate(n, k)
        if kind == 'basis' and value:
            xi = parse_k(value)
            if not 0 <= xi < 2**n:
                raise InvalidCoinError(f'Basis index {xi} outside 0..{2**n - 1}')
            return CoinVector.basis(n, xi)
    except ValueError as e:
        raise InvalidCoinError(str(e))

    if n == 1 and ',' not in spec:
        return CoinVector(1, as_coin_vector(spec))

    try:
        amplitudes = np.array([complex(part.replace(' ', '')) for part in spec.split(',')])
    except ValueError:
        raise InvalidCoinError(f'Cannot parse coin spec {spec!r}')
    if amplitudes.size != 2**n:
        raise InvalidCoinError(f'Coin spec has {amplitudes.size} amplitudes, n={n} needs {2**n}')
    norm = float(np.vdot(amplitudes, amplitudes).real)
    if abs(norm - 1.0) > COIN_NORM_TOL:
        raise InvalidCoinError(f'Coin spec is not normalized (|a|^2 = {norm:.12g})')
    return CoinVector(n, amplitudes)


def step_range(t_min: int, t_max: int, t_step: int = 1) -> List[int]:
    if t_min < 0 or t_max < t_min or t_step < 1:
        raise ValueError(f'Empty step range: t_min={t_min}, t_max={t_max}, t_step={t_step}')
    return list(range(t_min, t_max + 1, t_step))


def cmd_single(writer: OutputWriter, coin: CoinLike, t: int) -> Dict[str, object]:
    """Position distribution of one walker started at the origin."""
    wave = evolve(coin, t)
    table = position_distribution(wave)
    writer.write_csv(f'single_t{t}.csv', ('x', 'P_up', 'P_down', 'P_total'), table)

    positions, totals = table[:, 0], table[:, 3]
    second = float(np.sum(positions**2 * totals))
    results = {
        'total_probability': float(totals.sum()),
        'mean_x': float(np.sum(positions * totals)),
        'mean_x2': second,
        'mean_x2_over_t2': second / t**2 if t else 0.0,
    }
    if svg := writer.svg_path(f'single_t{t}.svg'):
        reachable = (positions + t) % 2 == 0
        plotting.line_chart(
            svg, positions[reachable], {'P(x)': totals[reachable]}, 'x', 'probability',
            title=f'Hadamard walk, t={t}',
        )
    return results


def cmd_distance(
    writer: OutputWriter,
    coin: CoinVector,
    steps: Sequence[int],
    positions: Optional[Sequence[int]] = None,
) -> Dict[str, object]:
    """<D>(t) over a step range with the fitted t^2 coefficient."""
    curve = distance.distance_curve(coin, steps, positions)
    rows = [DistanceSample(t=t, mean_distance=d) for t, d in curve.samples]
    writer.write_csv(
        'distance.csv', ('t', 'mean_distance'), [(r['t'], r['mean_distance']) for r in rows]
    )

    results: Dict[str, object] = {'fitted_c2': curve.fitted_c2}
    if 2 <= coin.n <= MAX_SPECTRAL_N:
        low, high = spectral.eta_bounds(coin.n)
        results.update(c2=spectral.c2(coin), eta_min=low, eta_max=high)
    if svg := writer.svg_path('distance.svg'):
        plotting.line_chart(svg, curve.steps, {'<D>': curve.values}, 't', '<D>')
    return results


def cmd_classical(
    writer: OutputWriter,
    n: int,
    steps: Sequence[int],
    trials: int,
    seed: int,
    positions: Optional[Sequence[int]] = None,
) -> Dict[str, object]:
    """Monte Carlo mean distance of classical walkers against the closed form."""
    means, errors = distance.monte_carlo_distance(n, steps, trials, seed, positions)
    rows = [
        ClassicalSample(
            t=int(t), empirical=float(m), stderr=float(e),
            formula=distance.classical_baseline(n, int(t), positions),
        )
        for t, m, e in zip(steps, means, errors)
    ]
    writer.write_csv(
        'classical.csv',
        ('t', 'empirical', 'stderr', 'formula'),
        [(r['t'], r['empirical'], r['stderr'], r['formula']) for r in rows],
    )
    results: Dict[str, object] = {'trials': trials, 'seed': seed}
    if len(steps) >= 2:
        results['slope'] = distance.classical_slope(steps, means)
        results['expected_slope'] = n - 1
    if svg := writer.svg_path('classical.svg'):
        plotting.line_chart(
            svg, list(steps), {'Monte Carlo': means, 'formula': [r['formula'] for r in rows]},
            't', 'D',
        )
    return results


def cmd_spectrum(writer: OutputWriter, n: int) -> Dict[str, object]:
    """Distinct eigenvalues of M and their degeneracies."""
    table = spectral.analytic_spectrum(n, with_vectors=False)
    by_eta = sorted(
        {entry.mu: SpectrumRow(mu=entry.mu, eta=entry.eta, degeneracy=entry.degeneracy)
         for entry in table.entries}.values(),
        key=lambda row: row['eta'],
    )
    writer.write_csv(
        'spectrum.csv', ('mu', 'eta', 'degeneracy'),
        [(r['mu'], r['eta'], r['degeneracy']) for r in by_eta],
    )
    low, high = spectral.eta_bounds(n)
    if svg := writer.svg_path('spectrum.svg'):
        plotting.bar_chart(
            svg, [f"{r['eta']:.4f}" for r in by_eta], [r['degeneracy'] for r in by_eta],
            'eigenvalue', 'degeneracy', title=f'Spectrum of M, n={n}',
        )
    return {
        'distinct': len(by_eta),
        'total_degeneracy': table.total_degeneracy(),
        'eta_min': low,
        'eta_max': high,
        'ratio': high / low,
    }


def cmd_symmetry(writer: OutputWriter, n: int, k: int) -> Dict[str, object]:
    """Subgraph partition, preserving swaps and the mu relation of eigenstate k."""
    split = symmetry.partition(n, k)
    preserved = set(symmetry.preserving_swaps(n, k))
    rows = [
        (i, j, (i, j) in preserved, symmetry.lemma_predicts_preserved(n, k, i, j))
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]
    writer.write_csv('symmetry.csv', ('i', 'j', 'preserved', 'predicted'), rows)
    return {
        'k': k,
        'S_up': list(split.up),
        'S_down': list(split.down),
        'p_k': split.p,
        'preserving_swaps': len(preserved),
        'mu': spectral.mu(n, k),
        'mu_from_swaps': symmetry.mu_from_swaps(n, k),
        'eta': spectral.eta(n, k),
        'antisymmetric_swap': symmetry.has_antisymmetric_swap(n, k),
    }


def cmd_entropy(
    writer: OutputWriter,
    coin: CoinVector,
    k: Optional[int],
    cut: Optional[Sequence[int]] = None,
    steps: Optional[Sequence[int]] = None,
) -> Dict[str, object]:
    """
    Entanglement of an eigenstate across a cut, or the coin entropy over time.

    Without steps the Schmidt spectrum of the coin vector is compared with the
    closed form; with steps the reduced coin density of the cut is followed in t.
    """
    n = coin.n
    if steps is not None:
        kept = tuple(cut) if cut else ((2,) if n >= 2 else (1,))
        series = multiparticle.coin_entropy_series(coin, steps, kept)
        writer.write_csv('coin_entropy.csv', ('t', 'entropy'), list(zip(steps, series)))
        if svg := writer.svg_path('coin_entropy.svg'):
            plotting.line_chart(svg, list(steps), {f'S{list(kept)}': series}, 't', 'entropy (bits)')
        return {'cut': list(kept), 'initial': series[0], 'final': series[-1], 'max': max(series)}

    if cut:
        kept = tuple(cut)
    else:
        kept = symmetry.partition(n, k).up if k is not None else ()
        kept = kept or (1,)
    data = entanglement.schmidt(coin.amplitudes, kept)
    writer.write_csv('schmidt.csv', ('index', 'nu'), list(enumerate(data.nu)))
    results: Dict[str, object] = {
        'cut': list(data.cut),
        'nu': data.nu[:4],
        'entropy': data.entropy,
        'rank': data.rank(),
    }
    if k is not None and k > 1:
        nu_1, nu_2 = entanglement.nu_closed_form(n, entanglement.parity(k))
        results.update(
            nu_closed=[nu_1, nu_2],
            entropy_closed=entanglement.entropy_closed_form(n, entanglement.parity(k)),
        )
    return results


def cmd_jointdist(
    writer: OutputWriter,
    coin: CoinVector,
    t: int,
    pair: Sequence[int] = (1, 2),
    positions: Optional[Sequence[int]] = None,
) -> Dict[str, object]:
    """Two-particle position distribution of a pair."""
    j, k = pair
    joint = multiparticle.joint_distribution(j, k, coin, t, positions)
    rows = [
        (a, b, joint.grid[ia, ib])
        for ia, a in enumerate(joint.positions_j)
        for ib, b in enumerate(joint.positions_k)
        if joint.grid[ia, ib] > 0.0
    ]
    writer.write_csv('jointdist.csv', (f'x_{j}', f'x_{k}', 'probability'), rows)
    if svg := writer.svg_path('jointdist.svg'):
        plotting.heatmap(
            svg, joint.grid, joint.positions_j, joint.positions_k, f'x_{j}', f'x_{k}',
            title=f'P(x_{j}, x_{k}), t={t}',
        )
    return {
        'pair': [j, k],
        'total': float(joint.grid.sum()),
        'mass_neg_pos': joint.sign_pattern_mass(-1, 1),
        'mass_pos_neg': joint.sign_pattern_mass(1, -1),
    }


def cmd_moments(
    writer: OutputWriter, coin: CoinVector, t: int, positions: Optional[Sequence[int]] = None
) -> Dict[str, object]:
    """Every <x_i^2> and every pair moment <x_j x_k>."""
    squares, table = multiparticle.all_moments(coin, t, positions)
    n = coin.n
    writer.write_csv('moments.csv', ('i', 'mean_x2'), list(enumerate(squares, start=1)))
    writer.write_csv(
        'pair_moments.csv',
        ('j', 'k', 'pair_moment'),
        [(j, k, table[j - 1, k - 1]) for j in range(1, n + 1) for k in range(j + 1, n + 1)],
    )
    if svg := writer.svg_path('moments.svg'):
        scale = t**2 if t else 1
        plotting.line_chart(
            svg, list(range(1, n + 1)), {'<x_i^2>/t^2': np.array(squares) / scale},
            'particle', '<x_i^2>/t^2', markers=True,
        )
    return {'mean_x2': squares, 'pair_moments': table}


def cmd_c2(writer: OutputWriter, coin: CoinVector) -> Dict[str, object]:
    """a^dagger M a for a coin spec, with the spectral bounds."""
    value = spectral.c2(coin)
    low, high = spectral.eta_bounds(coin.n) if coin.n >= 2 else (0.0, 0.0)
    writer.write_csv('c2.csv', ('n', 'c2', 'eta_min', 'eta_max'), [(coin.n, value, low, high)])
    return {'c2': value, 'eta_min': low, 'eta_max': high}
