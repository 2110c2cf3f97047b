import math

import numpy as np

from .constants import MISSING_TEXT, NEG_INF_TEXT, POS_INF_TEXT


def format_number(value, precision):
    if value is None:
        return MISSING_TEXT
    value = float(value)
    if math.isnan(value):
        return MISSING_TEXT
    if math.isinf(value):
        return POS_INF_TEXT if value > 0 else NEG_INF_TEXT
    return "{:.{}g}".format(value, precision)


def json_number(value):
    if value is None:
        return None
    value = float(value)
    if math.isnan(value):
        return None
    if math.isinf(value):
        return POS_INF_TEXT if value > 0 else NEG_INF_TEXT
    return value


def as_scalar_or_array(values, was_scalar):
    if was_scalar:
        return float(np.asarray(values).reshape(()))
    return values
