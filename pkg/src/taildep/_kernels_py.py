"""Pure-NumPy implementation of the exceedance-counting kernels.

The compiled module ``taildep._kernels`` provides the same two functions;
``taildep._backend`` picks whichever imports. Both must stay bit-for-bit
interchangeable: every threshold is walked to the exact boundary of the set
``{m : floor(m * x_j) >= n - rank + 1}`` so that counting thresholds <= m
is identical to evaluating the floor-rule indicator directly, ulp for ulp.
"""

import numpy as np


def exceedance_thresholds(ranks: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Smallest level at which each row exceeds in some coordinate.

    Row i counts toward the exceedance sum at level m exactly when
    ``m >= out[i]``. Coordinates with ``x_j = 0`` never trigger an
    exceedance (their threshold sits at +inf).
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    x = np.asarray(x, dtype=np.float64)
    n = ranks.shape[0]
    pos = x > 0.0
    if not pos.any():
        return np.full(n, np.inf)
    c = (n - ranks[:, pos] + 1).astype(np.float64)
    xp = x[pos]
    t = c / xp
    # Division can land one ulp on either side of the true boundary of
    # {m : floor(m * x_j) >= c}; walk to the exact minimal double.
    while True:
        low = t * xp < c
        if not low.any():
            break
        t[low] = np.nextafter(t[low], np.inf)
    while True:
        down = np.nextafter(t, -np.inf)
        still = down * xp >= c
        if not still.any():
            break
        t[still] = down[still]
    return t.min(axis=1)


def counts_at_levels(tsorted: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Number of thresholds <= m for each level m (``tsorted`` ascending)."""
    levels = np.asarray(levels, dtype=np.float64)
    return np.searchsorted(tsorted, levels, side="right").astype(np.int64)
