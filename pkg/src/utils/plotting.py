"""
SVG figures for the reproduction commands.

Uses the non-interactive Agg backend with a fixed SVG hash salt and no date
metadata, so the same data always renders to the same bytes.
"""

import logging
from pathlib import Path
from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

logger = logging.getLogger(__name__)

matplotlib.rcParams['svg.hashsalt'] = 'qwalk-forge'
matplotlib.rcParams['svg.fonttype'] = 'none'

_METADATA = {'Date': None}


def _save(fig: plt.Figure, path: Path) -> Path:
    try:
        fig.savefig(path, format='svg', metadata=_METADATA)
    finally:
        plt.close(fig)
    logger.info(f'Rendered {path}')
    return path


def line_chart(
    path: Path,
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
    markers: bool = False,
) -> Path:
    """One polyline per named series over a shared x axis."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, values in series.items():
        ax.plot(x, values, marker='o' if markers else None, markersize=3, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def heatmap(
    path: Path,
    grid: np.ndarray,
    x_values: Sequence[int],
    y_values: Sequence[int],
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
) -> Path:
    """
    Colour map of grid[a, b] with a along the x axis and b along the y axis.

    Args:
        path: Target SVG file
        grid: 2-D array indexed [x index, y index]
        x_values, y_values: Lattice sites labelling the two axes
    """
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    extent = (x_values[0] - 0.5, x_values[-1] + 0.5, y_values[0] - 0.5, y_values[-1] + 0.5)
    image = ax.imshow(np.asarray(grid).T, origin='lower', extent=extent, cmap='viridis')
    fig.colorbar(image, ax=ax)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def bar_chart(
    path: Path,
    labels: Sequence[str],
    heights: Sequence[float],
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(range(len(heights)), heights, tick_label=list(labels))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    return _save(fig, path)
