"""Dense tensors with named legs, polynomial-entry tensors and matrix polynomials.

Every leg carries an explicit id and a dimension. Operations match legs by id,
never by position, and data is stored row-major over the leg sequence, so the
flattening order of any tensor is determined by ``tensor.ids``.

All objects here are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from numbers import Number
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import flops

DEFAULT_RANK_TOL = 1e-10

LegId = Hashable


@dataclass(frozen=True)
class Leg:
    id: LegId
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"leg {self.id!r}: dimension must be a positive integer, got {self.dim}")


def _as_leg(leg) -> Leg:
    if isinstance(leg, Leg):
        return leg
    lid, dim = leg
    return Leg(lid, int(dim))


class DenseTensor:
    """A complex array whose axes are labelled by :class:`Leg` objects.

    Parameters
    ----------
    legs : sequence of Leg or (id, dim) pairs
        Axis labels in storage order. Ids must be unique.
    data : array_like
        Values; either already shaped like the legs or flat in row-major order.
    """

    __slots__ = ("legs", "data")
    __array_ufunc__ = None

    def __init__(self, legs: Iterable, data):
        legs = tuple(_as_leg(leg) for leg in legs)
        ids = [leg.id for leg in legs]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate leg ids: {ids}")
        shape = tuple(leg.dim for leg in legs)
        arr = np.array(data, dtype=complex)
        if arr.size != prod(shape):
            raise ValueError(f"data has {arr.size} entries, legs require {prod(shape)}")
        arr = arr.reshape(shape)
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DenseTensor is immutable")

    @classmethod
    def from_array(cls, data, ids: Sequence[LegId]) -> "DenseTensor":
        arr = np.asarray(data)
        if arr.ndim != len(ids):
            raise ValueError(f"array has {arr.ndim} axes but {len(ids)} ids were given")
        return cls([Leg(i, d) for i, d in zip(ids, arr.shape)], arr)

    @classmethod
    def zeros(cls, legs: Iterable) -> "DenseTensor":
        legs = [_as_leg(leg) for leg in legs]
        return cls(legs, np.zeros([leg.dim for leg in legs]))

    @classmethod
    def scalar(cls, value: complex) -> "DenseTensor":
        return cls([], np.asarray(value))

    # -- introspection -------------------------------------------------
    @property
    def ids(self) -> tuple:
        return tuple(leg.id for leg in self.legs)

    @property
    def dims(self) -> tuple:
        return tuple(leg.dim for leg in self.legs)

    @property
    def size(self) -> int:
        return self.data.size

    def axis(self, leg_id: LegId) -> int:
        for n, leg in enumerate(self.legs):
            if leg.id == leg_id:
                return n
        raise KeyError(f"no leg {leg_id!r} in tensor with legs {self.ids}")

    def leg(self, leg_id: LegId) -> Leg:
        return self.legs[self.axis(leg_id)]

    def has_leg(self, leg_id: LegId) -> bool:
        return leg_id in self.ids

    def item(self) -> complex:
        if self.legs:
            raise ValueError("tensor is not a scalar")
        return complex(self.data)

    # -- relabeling and reordering --------------------------------------
    def relabel(self, mapping: Mapping[LegId, LegId]) -> "DenseTensor":
        legs = [Leg(mapping.get(leg.id, leg.id), leg.dim) for leg in self.legs]
        return DenseTensor(legs, self.data)

    def transpose(self, ids: Sequence[LegId]) -> "DenseTensor":
        ids = list(ids)
        if sorted(map(repr, ids)) != sorted(map(repr, self.ids)):
            raise ValueError(f"transpose order {ids} is not a permutation of {self.ids}")
        axes = [self.axis(i) for i in ids]
        return DenseTensor([self.legs[a] for a in axes], np.transpose(self.data, axes))

    def array(self, ids: Optional[Sequence[LegId]] = None) -> np.ndarray:
        if ids is None:
            return self.data
        return np.transpose(self.data, [self.axis(i) for i in ids])

    def conj(self) -> "DenseTensor":
        return DenseTensor(self.legs, self.data.conj())

    def norm(self) -> float:
        return float(np.linalg.norm(self.data.ravel()))

    def _aligned(self, other: "DenseTensor") -> np.ndarray:
        if len(self.legs) != len(other.legs) or set(self.ids) != set(other.ids):
            raise ValueError(f"leg signature mismatch: {self.ids} vs {other.ids}")
        for leg in self.legs:
            if other.leg(leg.id).dim != leg.dim:
                raise ValueError(f"leg {leg.id!r}: dimension {leg.dim} vs {other.leg(leg.id).dim}")
        return other.array(self.ids)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        return DenseTensor(self.legs, self.data + self._aligned(other))

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        return DenseTensor(self.legs, self.data - self._aligned(other))

    def __mul__(self, c) -> "DenseTensor":
        if not isinstance(c, Number):
            return NotImplemented
        return DenseTensor(self.legs, self.data * c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "DenseTensor":
        return DenseTensor(self.legs, self.data / c)

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(self.legs, -self.data)

    def allclose(self, other: "DenseTensor", atol: float = 1e-12, rtol: float = 0.0) -> bool:
        return bool(np.allclose(self.data, self._aligned(other), atol=atol, rtol=rtol))

    def __repr__(self) -> str:
        legs = ", ".join(f"{leg.id!r}:{leg.dim}" for leg in self.legs)
        return f"DenseTensor([{legs}], norm={self.norm():.6g})"


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------

def contract(a: DenseTensor, b: DenseTensor, pairs: Sequence = ()) -> DenseTensor:
    """Sum over paired legs of ``a`` and ``b``.

    The result carries the unpaired legs of ``a`` followed by the unpaired legs
    of ``b``, each in their original order.
    """
    pairs = [tuple(p) for p in pairs]
    la = [p[0] for p in pairs]
    lb = [p[1] for p in pairs]
    if len(set(la)) != len(la) or len(set(lb)) != len(lb):
        raise ValueError(f"a leg is paired more than once in {pairs}")
    ax_a = [a.axis(i) for i in la]
    ax_b = [b.axis(i) for i in lb]
    for i, j, x, y in zip(la, lb, ax_a, ax_b):
        if a.dims[x] != b.dims[y]:
            raise ValueError(f"cannot pair {i!r} (dim {a.dims[x]}) with {j!r} (dim {b.dims[y]})")
    free_a = [leg for n, leg in enumerate(a.legs) if n not in ax_a]
    free_b = [leg for n, leg in enumerate(b.legs) if n not in ax_b]
    k = prod(a.dims[x] for x in ax_a)
    flops.record_matmul(prod(leg.dim for leg in free_a), k, prod(leg.dim for leg in free_b))
    data = np.tensordot(a.data, b.data, axes=(ax_a, ax_b))
    return DenseTensor(free_a + free_b, data)


def outer(a: DenseTensor, b: DenseTensor) -> DenseTensor:
    return contract(a, b, ())


def group_legs(t: DenseTensor, groups) -> DenseTensor:
    """Fuse legs into composite legs.

    ``groups`` is either a mapping ``new_id -> [old ids]`` or a sequence of
    id lists (new ids are then tuples of the member ids). Groups must partition
    the legs of ``t``. Each new leg's index is the mixed-radix number formed by
    its members in the listed order, first member most significant.
    """
    if isinstance(groups, Mapping):
        items = [(k, list(v)) for k, v in groups.items()]
    else:
        items = [(tuple(g), list(g)) for g in groups]
    members = [i for _, g in items for i in g]
    if len(members) != len(set(members)) or set(members) != set(t.ids) or any(not g for _, g in items):
        raise ValueError(f"groups {[g for _, g in items]} do not partition legs {t.ids}")
    data = t.array(members)
    legs = [Leg(new, prod(t.leg(i).dim for i in g)) for new, g in items]
    return DenseTensor(legs, data.reshape([leg.dim for leg in legs]))


def split_leg(t: DenseTensor, leg_id: LegId, legs: Sequence) -> DenseTensor:
    """Inverse of :func:`group_legs` for one composite leg."""
    legs = [_as_leg(leg) for leg in legs]
    n = t.axis(leg_id)
    if prod(leg.dim for leg in legs) != t.dims[n]:
        raise ValueError(f"cannot split leg {leg_id!r} of dim {t.dims[n]} into {legs}")
    new_legs = list(t.legs[:n]) + legs + list(t.legs[n + 1:])
    return DenseTensor(new_legs, t.data.reshape([leg.dim for leg in new_legs]))


def apply_local_map(t: DenseTensor, leg: LegId, m, new_id: Optional[LegId] = None) -> DenseTensor:
    """Act with the matrix ``m`` (rows x cols) on one leg; the leg keeps its slot."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("local map must be a matrix")
    n = t.axis(leg)
    if m.shape[1] != t.dims[n]:
        raise ValueError(f"map has {m.shape[1]} columns but leg {leg!r} has dim {t.dims[n]}")
    rest = t.size // t.dims[n]
    flops.record_matmul(m.shape[0], m.shape[1], rest)
    data = np.moveaxis(np.tensordot(m, t.data, axes=([1], [n])), 0, n)
    legs = list(t.legs)
    legs[n] = Leg(leg if new_id is None else new_id, m.shape[0])
    return DenseTensor(legs, data)


def apply_local_maps(t: DenseTensor, maps: Mapping[LegId, np.ndarray]) -> DenseTensor:
    for leg, m in maps.items():
        t = apply_local_map(t, leg, m)
    return t


def _bipartition(t: DenseTensor, part) -> tuple:
    part = list(part)
    if not part or len(set(part)) == len(t.ids) or any(p not in t.ids for p in part):
        raise ValueError(f"{part} is not a proper nonempty subset of legs {t.ids}")
    rest = [i for i in t.ids if i not in part]
    return part, rest


def flatten(t: DenseTensor, row_legs) -> np.ndarray:
    """Matrix with ``row_legs`` (in tensor order) as rows and the rest as columns."""
    rows = [i for i in t.ids if i in set(row_legs)]
    rows, cols = _bipartition(t, rows)
    m = prod(t.leg(i).dim for i in rows)
    return t.array(rows + cols).reshape(m, -1)


def singular_values(t: DenseTensor, part) -> np.ndarray:
    return np.linalg.svd(flatten(t, part), compute_uv=False)


def svd_truncate(t: DenseTensor, row_legs, chi: Optional[int], bond_id: LegId = "bond",
                 tol: float = 0.0):
    """Truncated SVD across the cut ``row_legs | rest``.

    Returns ``(U, SV, discarded_weight)`` where ``U`` carries the row legs (in
    tensor order) plus ``bond_id`` and ``SV`` carries ``bond_id`` plus the other
    legs. At most ``chi`` singular values are kept (all if ``chi`` is None);
    values at or below ``tol`` times the largest are dropped as well, but at
    least one is always kept. ``discarded_weight`` is the sum of squared dropped
    singular values.
    """
    if chi is not None and chi < 1:
        raise ValueError("chi must be at least 1")
    rows = [i for i in t.ids if i in set(row_legs)]
    rows, cols = _bipartition(t, rows)
    mat = t.array(rows + cols).reshape(prod(t.leg(i).dim for i in rows), -1)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = len(s) if chi is None else min(chi, len(s))
    if s.size and s[0] > 0:
        keep = min(keep, max(1, int(np.sum(s > tol * s[0]))))
    else:
        keep = 1
    flops.record_factorization(mat.shape[0], mat.shape[1], keep)
    discarded = float(np.sum(s[keep:] ** 2))
    bond = Leg(bond_id, keep)
    U = DenseTensor([t.leg(i) for i in rows] + [bond], u[:, :keep])
    SV = DenseTensor([bond] + [t.leg(i) for i in cols], s[:keep, None] * vh[:keep])
    return U, SV, discarded


def qr_split(t: DenseTensor, row_legs, bond_id: LegId = "bond"):
    """Exact factorization ``t = Q R`` across ``row_legs | rest`` without truncation."""
    rows = [i for i in t.ids if i in set(row_legs)]
    rows, cols = _bipartition(t, rows)
    mat = t.array(rows + cols).reshape(prod(t.leg(i).dim for i in rows), -1)
    q, r = np.linalg.qr(mat)
    flops.record_factorization(mat.shape[0], mat.shape[1], q.shape[1])
    bond = Leg(bond_id, q.shape[1])
    return (DenseTensor([t.leg(i) for i in rows] + [bond], q),
            DenseTensor([bond] + [t.leg(i) for i in cols], r))


def schmidt_rank(t: DenseTensor, part, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values of the ``part | rest`` flattening above ``tol * s_max``."""
    s = singular_values(t, part)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def inner_product(a: DenseTensor, b: DenseTensor) -> complex:
    """``<a|b>``, conjugate-linear in ``a``; legs are matched by id."""
    return complex(np.vdot(a.data, a._aligned(b)))


def norm(t: DenseTensor) -> float:
    return t.norm()


def scalar_mul(c: complex, t: DenseTensor) -> DenseTensor:
    return t * c


def add(a: DenseTensor, b: DenseTensor) -> DenseTensor:
    return a + b


# ---------------------------------------------------------------------------
# polynomial objects
# ---------------------------------------------------------------------------

class MatrixPoly:
    """A matrix whose entries are polynomials in a formal parameter ``eps``.

    ``terms`` maps nonnegative integer exponents to equally shaped matrices;
    all-zero terms are dropped on construction.
    """

    __slots__ = ("rows", "cols", "terms")

    def __init__(self, terms: Mapping[int, np.ndarray], shape: Optional[tuple] = None):
        clean = {}
        for k, m in terms.items():
            if int(k) != k or k < 0:
                raise ValueError(f"exponents must be nonnegative integers, got {k}")
            m = np.array(m, dtype=complex)
            if m.ndim != 2:
                raise ValueError("MatrixPoly terms must be matrices")
            if shape is None:
                shape = m.shape
            if m.shape != tuple(shape):
                raise ValueError(f"term {k} has shape {m.shape}, expected {shape}")
            if np.any(m != 0):
                m.setflags(write=False)
                clean[int(k)] = m
        if shape is None:
            raise ValueError("cannot infer the shape of an empty MatrixPoly")
        object.__setattr__(self, "rows", int(shape[0]))
        object.__setattr__(self, "cols", int(shape[1]))
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("MatrixPoly is immutable")

    @classmethod
    def constant(cls, m) -> "MatrixPoly":
        m = np.asarray(m, dtype=complex)
        return cls({0: m}, m.shape)

    @classmethod
    def monomial(cls, m, k: int) -> "MatrixPoly":
        m = np.asarray(m, dtype=complex)
        return cls({k: m}, m.shape)

    @classmethod
    def identity(cls, n: int) -> "MatrixPoly":
        return cls.constant(np.eye(n))

    @classmethod
    def diagonal_monomials(cls, exponents: Sequence[int], coeffs=None) -> "MatrixPoly":
        """Diagonal map ``|i> -> coeffs[i] * eps**exponents[i] |i>``."""
        n = len(exponents)
        coeffs = np.ones(n) if coeffs is None else np.asarray(coeffs)
        terms: dict = {}
        for i, k in enumerate(exponents):
            terms.setdefault(int(k), np.zeros((n, n), dtype=complex))[i, i] = coeffs[i]
        return cls(terms, (n, n))

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def min_exponent(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    @property
    def max_exponent(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def __call__(self, eps: complex) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        for k, m in self.terms.items():
            out = out + m * eps ** k
        return out

    def __matmul__(self, other: "MatrixPoly") -> "MatrixPoly":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        terms: dict = {}
        for k1, a in self.terms.items():
            for k2, b in other.terms.items():
                terms[k1 + k2] = terms.get(k1 + k2, 0) + a @ b
        return MatrixPoly(terms, (self.rows, other.cols))

    def kron(self, other: "MatrixPoly") -> "MatrixPoly":
        terms: dict = {}
        for k1, a in self.terms.items():
            for k2, b in other.terms.items():
                terms[k1 + k2] = terms.get(k1 + k2, 0) + np.kron(a, b)
        return MatrixPoly(terms, (self.rows * other.rows, self.cols * other.cols))

    def __add__(self, other: "MatrixPoly") -> "MatrixPoly":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        terms = dict(self.terms)
        for k, m in other.terms.items():
            terms[k] = terms.get(k, 0) + m
        return MatrixPoly(terms, self.shape)

    def __mul__(self, c) -> "MatrixPoly":
        return MatrixPoly({k: m * c for k, m in self.terms.items()}, self.shape)

    __rmul__ = __mul__

    def shift(self, k: int) -> "MatrixPoly":
        """Multiply by ``eps**k``."""
        return MatrixPoly({e + k: m for e, m in self.terms.items()}, self.shape)

    def __repr__(self) -> str:
        return f"MatrixPoly({self.rows}x{self.cols}, exponents={list(self.terms)})"


class PolyTensor:
    """A tensor whose entries are polynomials in ``eps``: ``sum_k eps**k * terms[k]``."""

    __slots__ = ("legs", "terms")

    def __init__(self, terms: Mapping[int, DenseTensor], legs: Optional[Sequence] = None):
        clean = {}
        for k, t in terms.items():
            if int(k) != k or k < 0:
                raise ValueError(f"exponents must be nonnegative integers, got {k}")
            if legs is None:
                legs = t.legs
            legs = tuple(_as_leg(leg) for leg in legs)
            t = t.transpose([leg.id for leg in legs]) if t.ids != tuple(leg.id for leg in legs) else t
            if t.legs != legs:
                raise ValueError(f"term {k} has legs {t.legs}, expected {legs}")
            if np.any(t.data != 0):
                clean[int(k)] = t
        if legs is None:
            raise ValueError("cannot infer legs of an empty PolyTensor")
        object.__setattr__(self, "legs", tuple(_as_leg(leg) for leg in legs))
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("PolyTensor is immutable")

    @property
    def ids(self) -> tuple:
        return tuple(leg.id for leg in self.legs)

    @property
    def exponents(self) -> list:
        return list(self.terms)

    @property
    def min_exponent(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    @property
    def max_exponent(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    @property
    def entry_count(self) -> int:
        return sum(t.size for t in self.terms.values())

    def term(self, k: int) -> DenseTensor:
        return self.terms.get(k, DenseTensor.zeros(self.legs))

    def evaluate(self, eps: complex) -> DenseTensor:
        data = np.zeros([leg.dim for leg in self.legs], dtype=complex)
        for k, t in self.terms.items():
            data = data + t.data * eps ** k
        return DenseTensor(self.legs, data)

    def __repr__(self) -> str:
        return f"PolyTensor(legs={self.ids}, exponents={self.exponents})"


def poly_apply(t: DenseTensor, maps: Mapping[LegId, MatrixPoly],
               budget: Optional[int] = None) -> PolyTensor:
    """Exact expansion of ``(A_1(eps) x ... x A_m(eps)) t`` as a :class:`PolyTensor`.

    Legs without a map are left untouched. ``budget`` caps the number of stored
    polynomial-term entries; exceeding it raises ``MemoryError`` rather than
    silently expanding a lattice-sized object.
    """
    current = {0: t}
    for leg, mp in maps.items():
        if mp.cols != t.leg(leg).dim:
            raise ValueError(f"map for leg {leg!r} has {mp.cols} columns, leg has dim {t.leg(leg).dim}")
        nxt: dict = {}
        for k1, part in current.items():
            for k2, m in mp.terms.items():
                piece = apply_local_map(part, leg, m)
                nxt[k1 + k2] = piece if k1 + k2 not in nxt else nxt[k1 + k2] + piece
        current = {k: v for k, v in nxt.items() if np.any(v.data != 0)}
        if budget is not None and sum(v.size for v in current.values()) > budget:
            raise MemoryError(
                f"symbolic expansion exceeds the budget of {budget} entries; "
                "use numeric sampling instead"
            )
    legs = None
    if not current:
        legs = list(t.legs)
        for leg, mp in maps.items():
            n = [x.id for x in legs].index(leg)
            legs[n] = Leg(leg, mp.rows)
    return PolyTensor(current, legs)


TensorLike = Union[DenseTensor, PolyTensor]
