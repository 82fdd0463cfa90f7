"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import numbers

import numpy as np

from .errors import InputError


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_real(value, name, *, positive=False, nonnegative=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InputError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise InputError(f"{name} must be finite")
    if positive and value <= 0:
        raise InputError(f"{name} must be > 0, got {value}")
    if nonnegative and value < 0:
        raise InputError(f"{name} must be >= 0, got {value}")
    return value


def check_points(Z) -> np.ndarray:
    """Coerce to a 1-D complex array.

    An (n, 2) real array is read as (re, im) columns.
    """
    arr = np.asarray(Z)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.atleast_1d(arr).astype(complex).ravel()
    if not np.all(np.isfinite(arr)):
        raise InputError("points must be finite")
    return arr


def check_slit_set(E):
    """Accept a SlitSet, an (a, b) real interval, or a list of segments."""
    from .potential import SlitSet

    if isinstance(E, SlitSet):
        return E
    if isinstance(E, tuple) and len(E) == 2 and all(isinstance(x, numbers.Number) for x in E):
        return SlitSet([E])
    try:
        return SlitSet(list(E))
    except TypeError:
        raise InputError(f"cannot interpret {E!r} as a slit set") from None
