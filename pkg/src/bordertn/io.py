"""JSON interchange for tensors, matrix polynomials and map families.

Layouts
-------
Tensor::

    {"legs": [{"id": "a", "dim": 2}, ...], "data": [[re, im], ...]}

``data`` is row-major over ``legs``. Leg ids that are not strings are stored
as ``{"int": n}`` or ``{"tuple": [...]}`` so they round-trip exactly.

PolyTensor::

    {"legs": [...], "terms": {"<exponent>": [[re, im], ...], ...}}

Map family::

    {"maps": {"<vertex>": [{"exponent": k, "matrix": [[[re, im], ...], ...]}, ...]},
     "prefactor_exponent": d, "approx_degree": d, "error_degree": e}

The last three keys are optional.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

import numpy as np

from .tensor import DenseTensor, Leg, MatrixPoly, PolyTensor


def _id_to_json(i) -> Any:
    if isinstance(i, str):
        return i
    if isinstance(i, (bool, np.bool_)):
        raise TypeError("boolean leg ids are not supported")
    if isinstance(i, (int, np.integer)):
        return {"int": int(i)}
    if isinstance(i, tuple):
        return {"tuple": [_id_to_json(x) for x in i]}
    raise TypeError(f"leg id {i!r} cannot be serialized")


def _id_from_json(obj) -> Any:
    if isinstance(obj, str):
        return obj
    if isinstance(obj, Mapping) and "int" in obj:
        return int(obj["int"])
    if isinstance(obj, Mapping) and "tuple" in obj:
        return tuple(_id_from_json(x) for x in obj["tuple"])
    raise ValueError(f"malformed leg id {obj!r}")


def complex_list(arr) -> list:
    flat = np.asarray(arr, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def complex_array(pairs, shape) -> np.ndarray:
    a = np.asarray(pairs, dtype=float)
    if a.size == 0:
        return np.zeros(shape, dtype=complex)
    if a.ndim < 1 or a.shape[-1] != 2:
        raise ValueError("complex data must be [re, im] pairs")
    return (a[..., 0] + 1j * a[..., 1]).reshape(shape)


def legs_to_json(legs) -> list:
    return [{"id": _id_to_json(leg.id), "dim": leg.dim} for leg in legs]


def legs_from_json(obj) -> list:
    return [Leg(_id_from_json(x["id"]), int(x["dim"])) for x in obj]


def tensor_to_dict(t: DenseTensor) -> dict:
    return {"legs": legs_to_json(t.legs), "data": complex_list(t.data)}


def tensor_from_dict(obj: Mapping) -> DenseTensor:
    legs = legs_from_json(obj["legs"])
    shape = [leg.dim for leg in legs]
    return DenseTensor(legs, complex_array(obj["data"], shape))


def poly_to_dict(p: PolyTensor) -> dict:
    return {"legs": legs_to_json(p.legs),
            "terms": {str(k): complex_list(t.data) for k, t in p.terms.items()}}


def poly_from_dict(obj: Mapping) -> PolyTensor:
    legs = legs_from_json(obj["legs"])
    shape = [leg.dim for leg in legs]
    terms = {int(k): DenseTensor(legs, complex_array(v, shape)) for k, v in obj["terms"].items()}
    return PolyTensor(terms, legs)


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    a = np.asarray(obj, dtype=float)
    if a.ndim == 2:
        return a.astype(complex)
    if a.ndim != 3 or a.shape[-1] != 2:
        raise ValueError("matrix must be a real matrix or rows of [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def matrix_poly_to_json(mp: MatrixPoly) -> list:
    if not mp.terms:
        return [{"exponent": 0, "matrix": matrix_to_json(np.zeros(mp.shape))}]
    return [{"exponent": k, "matrix": matrix_to_json(m)} for k, m in mp.terms.items()]


def matrix_poly_from_json(obj) -> MatrixPoly:
    terms = {}
    shape = None
    for item in obj:
        m = matrix_from_json(item["matrix"])
        shape = m.shape
        k = int(item["exponent"])
        terms[k] = terms.get(k, 0) + m
    if shape is None:
        raise ValueError("empty matrix polynomial")
    return MatrixPoly(terms, shape)


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def load_json(path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def save_json(obj, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj) + "\n")
