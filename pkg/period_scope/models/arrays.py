from typing import Annotated

import numpy as np
from pydantic import PlainSerializer, PlainValidator


def _as_float_vector(value) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != 1:
        raise ValueError(f"expected a one-dimensional sequence, got shape {array.shape}")
    array.flags.writeable = False
    return array


def _as_float_matrix(value) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != 2:
        raise ValueError(f"expected a two-dimensional array, got shape {array.shape}")
    array.flags.writeable = False
    return array


def _as_int_matrix(value) -> np.ndarray:
    array = np.array(value, dtype=np.int64)
    if array.ndim != 2:
        raise ValueError(f"expected a two-dimensional array, got shape {array.shape}")
    array.flags.writeable = False
    return array


def _to_list(array: np.ndarray) -> list:
    return array.tolist()


# Read-only numpy arrays that serialize to nested JSON lists
FloatVector = Annotated[
    np.ndarray, PlainValidator(_as_float_vector), PlainSerializer(_to_list, return_type=list)
]
FloatMatrix = Annotated[
    np.ndarray, PlainValidator(_as_float_matrix), PlainSerializer(_to_list, return_type=list)
]
IntMatrix = Annotated[
    np.ndarray, PlainValidator(_as_int_matrix), PlainSerializer(_to_list, return_type=list)
]
