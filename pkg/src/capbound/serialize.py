"""JSON (de)serialization for channels and bipartite states.

Complex matrices are stored as nested lists of [re, im] pairs so that files
round-trip bit-exactly (floats are emitted by json with repr precision).
"""

from __future__ import annotations

import numpy as np

from .channels import BipartiteState, Channel, ChannelError, DimensionError, StateError


def matrix_to_json(mat: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(mat, dtype=complex)]


def matrix_from_json(data, shape=None) -> np.ndarray:
    try:
        arr = np.array([[complex(c[0], c[1]) for c in row] for row in data])
    except (TypeError, IndexError, ValueError) as exc:
        raise ValueError("matrix entries must be nested [re, im] pairs") from exc
    if shape is not None and arr.shape != shape:
        raise ValueError(f"matrix has shape {arr.shape}, expected {shape}")
    return arr


def channel_to_dict(ch: Channel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_json(k) for k in ch.kraus],
    }


def channel_from_dict(data: dict) -> Channel:
    try:
        din = int(data["dim_in"])
        dout = int(data["dim_out"])
        kraus_raw = data["kraus"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ChannelError(f"channel JSON missing or malformed field: {exc}") from exc
    if not isinstance(kraus_raw, list) or not kraus_raw:
        raise ChannelError("channel JSON needs a non-empty 'kraus' list")
    kraus = [matrix_from_json(k, shape=(dout, din)) for k in kraus_raw]
    return Channel(tuple(kraus))


def state_to_dict(state: BipartiteState) -> dict:
    return {
        "dim_a": state.dim_a,
        "dim_b": state.dim_b,
        "rho": matrix_to_json(state.rho),
    }


def state_from_dict(data: dict) -> BipartiteState:
    try:
        da = int(data["dim_a"])
        db = int(data["dim_b"])
        rho_raw = data["rho"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"state JSON missing or malformed field: {exc}") from exc
    rho = matrix_from_json(rho_raw, shape=(da * db, da * db))
    return BipartiteState(da, db, rho)


VALIDATION_ERRORS = (ChannelError, DimensionError, StateError, ValueError)
