"""Order-independent, correctly rounded reductions.

math.fsum is exact up to the final rounding, so results do not depend on how
per-mode contributions were chunked or scheduled.
"""

import math

import numpy as np


def exact_sum(values) -> float:
    return math.fsum(np.asarray(values, dtype=float).ravel())


def exact_csum(values) -> complex:
    values = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))
