import numpy as np


def central_diff(value_fn, x, h=1e-6):
    """Independent gradient oracle: componentwise central finite differences."""
    x = np.asarray(x, dtype=np.float64)
    g = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (value_fn(x + e) - value_fn(x - e)) / (2.0 * h)
    return g
