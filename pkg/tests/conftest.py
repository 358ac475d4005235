import numpy as np


def align_phase(vec, reference):
    """Rotate vec by the global phase that best matches reference."""
    overlap = np.vdot(vec, reference)
    if overlap == 0:
        return np.asarray(vec)
    return np.asarray(vec) * (overlap / abs(overlap))


def legendre(n, x):
    """Legendre polynomial P_n(x) by the three-term recurrence."""
    p_prev, p = 1.0, x
    if n == 0:
        return p_prev
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p
