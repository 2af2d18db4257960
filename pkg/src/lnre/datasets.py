"""Embedded datasets.

Newcomb's light speed measurements (66 passage times, coded as deviations
from 24800 ns): the two negative values are the famous outliers that make
the series a standard robustness benchmark.
"""

import numpy as np

NEWCOMB = (
    26, 26, 26, 26, 26, 27, 27, 27, 27, 27, 27,
    25, 25, 25, 25, 25, 28, 28, 28, 28, 28, 28,
    28, 24, 24, 24, 24, 24, 29, 29, 29, 29, 29,
    23, 23, 23, 30, 30, 30, 22, 22, 31, 31, 21,
    21, 32, 32, 32, 32, 32, 20, 33, 33, 19, 34,
    36, 36, 36, 36, 16, 16, 37, 39, 40, -2, -44,
)


def newcomb() -> np.ndarray:
    """The 66 Newcomb light speed values as floats."""
    return np.asarray(NEWCOMB, dtype=float)
