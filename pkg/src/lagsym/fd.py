"""Sixth-order central finite differences of callables."""

import numpy as np

# first-derivative weights for offsets -3..3
_W6 = np.array([-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60])
_OFFSETS = np.arange(-3, 4)


def derivative(f, x, h):
    """d f / d x at ``x`` (array ok) with the 7-point central stencil."""
    x = np.asarray(x, dtype=float)
    acc = np.zeros(np.broadcast(x, np.asarray(h)).shape)
    for k, w in zip(_OFFSETS, _W6):
        if w:
            acc = acc + w * np.asarray(f(x + k * h))
    return acc / h


def partial_t(F, t, s, h):
    """d/dt of F(t, s) holding s fixed."""
    return derivative(lambda tt: F(tt, s), t, h)


def partial_s(F, t, s, h):
    """d/ds of F(t, s) holding t fixed."""
    return derivative(lambda ss: F(t, ss), s, h)


STENCIL_HALF_WIDTH = 3
