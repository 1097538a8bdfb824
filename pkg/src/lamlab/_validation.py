"""Small argument checks shared by the public functions."""

import numbers

import numpy as np


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def check_int(value, name, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValidationError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_real(value, name, minimum=None, maximum=None, strict_min=False, strict_max=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")
    if minimum is not None:
        bad = value <= minimum if strict_min else value < minimum
        if bad:
            op = ">" if strict_min else ">="
            raise ValidationError(f"{name} must be {op} {minimum}, got {value}")
    if maximum is not None:
        bad = value >= maximum if strict_max else value > maximum
        if bad:
            op = "<" if strict_max else "<="
            raise ValidationError(f"{name} must be {op} {maximum}, got {value}")
    return value


def check_choice(value, name, choices):
    if value not in choices:
        raise ValidationError(f"{name} must be one of {sorted(choices)}, got {value!r}")
    return value


def as_int_array(values, name, ndim=1):
    arr = np.asarray(values)
    if arr.ndim != ndim:
        raise ValidationError(f"{name} must be {ndim}-dimensional")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValidationError(f"{name} must contain integers")
    return arr.astype(np.int64)
