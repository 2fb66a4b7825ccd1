"""Safety-border post-processing of an estimated obstacle map."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .grid import BinaryGrid, GridGeometry, TernaryGrid, UNDECIDED


def gaussian_kernel(size: int = 13, radius: float = 3.0) -> np.ndarray:
    """Unit-sum Gaussian kernel with standard deviation ``radius / 2``."""
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be a positive odd integer, got {size}")
    if radius <= 0:
        raise ValueError("kernel radius must be positive")
    sigma = radius / 2.0
    ax = np.arange(size) - size // 2
    g = np.exp(-(ax**2) / (2 * sigma**2))
    k = np.outer(g, g)
    return k / k.sum()


def lowpass(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    # zero padding: the outside of the map never contributes obstacle mass
    return ndimage.convolve(np.asarray(values, dtype=float), kernel, mode="constant", cval=0.0)


def postprocess_obstacles(
    b_hat: TernaryGrid,
    kernel_size: int = 13,
    kernel_radius: float = 3.0,
    L: int = 1,
    tau: float = 0.1,
) -> BinaryGrid:
    """Filter, downsample by ``L`` and threshold at ``tau`` to get the planning map.

    Undecided cells count as obstacles. Downsampling keeps cell (1, 1) and every
    L-th cell after it; trailing cells that do not fill a full block are dropped.
    """
    if int(L) != L or L < 1:
        raise ValueError(f"downsample factor must be an integer >= 1, got {L}")
    if not 0 < tau < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {tau}")
    n = b_hat.geometry.n
    n_out = n // L
    if n_out < 2:
        raise ValueError(f"downsampling a {n}x{n} map by {L} leaves fewer than 2 cells")
    occ = np.where(b_hat.values == UNDECIDED, 1.0, b_hat.values)
    filtered = lowpass(occ, gaussian_kernel(kernel_size, kernel_radius))
    down = filtered[: n_out * L : L, : n_out * L : L]
    geom = GridGeometry(n_out, b_hat.geometry.delta * L)
    return BinaryGrid(geom, (down > tau).astype(np.uint8))
