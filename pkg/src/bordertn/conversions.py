"""Restrictions, degenerations and their lift from plaquettes to lattices."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Mapping, Optional

import numpy as np

from .structures import EntanglementStructure
from .tensor import (
    DenseTensor,
    MatrixPoly,
    PolyTensor,
    apply_local_maps,
    poly_apply,
)

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class LocalMapFamily:
    """One matrix polynomial per leg (vertex or party slot).

    ``approx_degree`` and ``error_degree`` are optional certified values; they
    are filled in by constructors that know them and consumed by
    :func:`compose_with_restriction` and the interpolation planner.
    """

    maps: Mapping
    approx_degree: Optional[int] = None
    error_degree: Optional[int] = None

    def __post_init__(self):
        for k, m in self.maps.items():
            if not isinstance(m, MatrixPoly):
                raise TypeError(f"map for {k!r} is not a MatrixPoly")

    @classmethod
    def constant(cls, maps: Mapping) -> "LocalMapFamily":
        return cls({k: MatrixPoly.constant(m) for k, m in maps.items()}, 0, 0)

    @property
    def source_dims(self) -> dict:
        return {k: m.cols for k, m in self.maps.items()}

    @property
    def target_dims(self) -> dict:
        return {k: m.rows for k, m in self.maps.items()}

    @property
    def max_degree(self) -> int:
        return sum(m.max_exponent or 0 for m in self.maps.values())

    @property
    def min_degree(self) -> int:
        return sum(m.min_exponent or 0 for m in self.maps.values())

    def evaluate(self, eps: complex) -> Dict:
        return {k: m(eps) for k, m in self.maps.items()}

    def relabel(self, mapping: Mapping) -> "LocalMapFamily":
        return LocalMapFamily({mapping.get(k, k): m for k, m in self.maps.items()},
                              self.approx_degree, self.error_degree)

    def to_dict(self) -> dict:
        from .io import matrix_poly_to_json

        out = {"maps": {str(k): matrix_poly_to_json(m) for k, m in self.maps.items()}}
        if self.approx_degree is not None:
            out["approx_degree"] = self.approx_degree
        if self.error_degree is not None:
            out["error_degree"] = self.error_degree
        return out

    @classmethod
    def from_dict(cls, obj: Mapping, key_type=str) -> "LocalMapFamily":
        from .io import matrix_poly_from_json

        maps = {key_type(k): matrix_poly_from_json(v) for k, v in obj["maps"].items()}
        return cls(maps, obj.get("approx_degree"), obj.get("error_degree"))


@dataclass(frozen=True)
class DegenerationCertificate:
    """Outcome of :func:`analyze_degeneration`.

    The expanded state is ``eps**d * (leading + sum_l eps**l * residual_terms[d+l])``
    up to the reported proportionality constant, i.e. ``leading`` is the
    actual lowest term and ``leading == proportionality * target``.
    """

    d: int
    e: int
    leading: DenseTensor
    residual_terms: Dict[int, DenseTensor]
    proportionality: complex
    mismatch: float = 0.0
    warnings: tuple = field(default=())

    @property
    def residual_exponents(self) -> list:
        return sorted(self.residual_terms)

    def to_dict(self) -> dict:
        c = complex(self.proportionality)
        return {
            "d": self.d,
            "e": self.e,
            "leading_norm": self.leading.norm(),
            "proportionality": [c.real, c.imag],
            "residual_exponents": self.residual_exponents,
            "leading_mismatch": self.mismatch,
        }


class CertificateError(ValueError):
    pass


def apply_restriction(structure_tensor: DenseTensor, maps: Mapping) -> DenseTensor:
    """Apply one constant matrix per leg."""
    for k, m in maps.items():
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[1] != structure_tensor.leg(k).dim:
            raise ValueError(f"map for {k!r} has shape {m.shape}, leg has dim {structure_tensor.leg(k).dim}")
    return apply_local_maps(structure_tensor, maps)


def proportionality(actual: DenseTensor, target: DenseTensor) -> tuple:
    """Best ``c`` with ``actual ~ c * target`` and the relative mismatch."""
    a = actual.data.ravel()
    b = actual._aligned(target).ravel()
    nb = np.vdot(b, b).real
    if nb == 0:
        raise CertificateError("target tensor is zero")
    c = np.vdot(b, a) / nb
    na = np.linalg.norm(a)
    mismatch = float(np.linalg.norm(a - c * b) / na) if na > 0 else float("inf")
    return complex(c), mismatch


def analyze_degeneration(source: DenseTensor, maps, target: DenseTensor,
                         tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> DegenerationCertificate:
    """Expand ``(x A_l(eps)) source`` exactly and certify its lowest term against ``target``."""
    if isinstance(maps, LocalMapFamily):
        maps = maps.maps
    poly = poly_apply(source, maps, budget=budget)
    if not poly.terms:
        raise CertificateError("the degenerated tensor is identically zero")
    # terms at rounding level (e.g. 1 + exp(i pi) in floating point) count as zero
    scale = max(t.norm() for t in poly.terms.values())
    terms = {k: t for k, t in poly.terms.items() if t.norm() > tol * scale}
    notes = tuple(f"dropped numerically vanishing term eps^{k}" for k in poly.terms if k not in terms)
    d, top = min(terms), max(terms)
    leading = terms[d]
    c, mismatch = proportionality(leading, target)
    if mismatch > tol:
        raise CertificateError(
            f"leading term at eps^{d} is not proportional to the target (relative mismatch {mismatch:.3e})"
        )
    residual = {k: t for k, t in terms.items() if k != d}
    return DegenerationCertificate(d, top - d, leading, residual, c, mismatch, notes)


def lift_to_lattice(plaquette_family: LocalMapFamily, structure: EntanglementStructure,
                    faces: Optional[int] = None, per_edge: Optional[Mapping] = None) -> LocalMapFamily:
    """Per-vertex maps built from per-slot plaquette maps.

    ``plaquette_family.maps`` is keyed by party slot ``0..m-1``. Every vertex
    receives the Kronecker product of the slot maps it absorbs, in its leg
    order. ``per_edge`` optionally overrides the family for selected edges
    (e.g. up and down triangles with different maps). The certified degrees are
    the plaquette degrees times the number of faces.
    """
    F = structure.faces
    if faces is not None and faces != F:
        raise ValueError(f"structure has {F} faces, {faces} were declared")
    per_edge = dict(per_edge or {})
    for e, members in structure.graph.edges:
        fam = per_edge.get(e, plaquette_family)
        missing = [p for p in range(len(members)) if p not in fam.maps]
        if missing:
            raise ValueError(f"family lacks maps for slots {missing} of edge {e!r}")
        dims = structure.plaquettes[e].party_dims()
        for p in range(len(members)):
            if fam.maps[p].cols != dims[p]:
                raise ValueError(f"slot map {p} has {fam.maps[p].cols} columns, edge {e!r} party has dim {dims[p]}")
    vmaps = {}
    for v in structure.graph.vertices:
        parts = [per_edge.get(e, plaquette_family).maps[p] for e, p in structure.vertex_legs[v]]
        vmaps[v] = reduce(lambda a, b: a.kron(b), parts)
    fams = [per_edge.get(e, plaquette_family) for e, _ in structure.graph.edges]
    d = None if any(f.approx_degree is None for f in fams) else sum(f.approx_degree for f in fams)
    e = None if any(f.error_degree is None for f in fams) else sum(f.error_degree for f in fams)
    return LocalMapFamily(vmaps, d, e)


@dataclass(frozen=True)
class ScaledFamily:
    """``T(eps) = eps**(-d) * (x_l B_l A_l(eps)) source``, evaluated numerically."""

    family: LocalMapFamily
    d: int

    def evaluate_maps(self, eps: complex) -> Dict:
        return self.family.evaluate(eps)

    def apply(self, source: DenseTensor, eps: complex) -> DenseTensor:
        if eps == 0:
            raise ValueError("T(eps) is only evaluated away from eps = 0")
        return apply_local_maps(source, self.evaluate_maps(eps)) * (eps ** (-self.d))

    @property
    def degree(self) -> int:
        """Degree of ``T(eps)`` as a polynomial once the prefactor is applied.

        Uses the certified error degree when the prefactor equals the certified
        approximation degree, otherwise the bound from the maps' top exponents.
        """
        fam = self.family
        if fam.error_degree is not None and fam.approx_degree == self.d:
            return fam.error_degree
        return fam.max_degree - self.d

    def expand(self, source: DenseTensor, budget: int = DEFAULT_BUDGET) -> PolyTensor:
        poly = poly_apply(source, self.family.maps, budget=budget)
        if poly.terms and poly.min_exponent < self.d:
            raise CertificateError("prefactor leaves a pole at eps = 0")
        return PolyTensor({k - self.d: t for k, t in poly.terms.items()}, poly.legs)


def compose_with_restriction(lattice_family: LocalMapFamily, b_maps: Optional[Mapping] = None,
                             d: Optional[int] = None) -> ScaledFamily:
    """Compose each vertex map with a constant matrix and attach the ``eps**(-d)`` prefactor."""
    d = lattice_family.approx_degree if d is None else d
    if d is None:
        raise ValueError("approximation degree unknown; pass d explicitly")
    if lattice_family.approx_degree is not None and d > lattice_family.approx_degree:
        raise ValueError(f"d={d} exceeds the certified approximation degree {lattice_family.approx_degree}")
    if lattice_family.approx_degree is None and d > lattice_family.min_degree:
        raise ValueError(f"d={d} exceeds the minimal exponent {lattice_family.min_degree}")
    maps = dict(lattice_family.maps)
    for v, b in (b_maps or {}).items():
        b = np.asarray(b, dtype=complex)
        if b.shape[1] != maps[v].rows:
            raise ValueError(f"B map for {v!r} has {b.shape[1]} columns, family produces dim {maps[v].rows}")
        maps[v] = MatrixPoly.constant(b) @ maps[v]
    fam = LocalMapFamily(maps, lattice_family.approx_degree, lattice_family.error_degree)
    return ScaledFamily(fam, d)


def recertify(source: DenseTensor, family: LocalMapFamily, target: DenseTensor,
              tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> DegenerationCertificate:
    """Certify a lifted family; warns if cancellations moved the lowest exponent."""
    cert = analyze_degeneration(source, family, target, tol, budget)
    if family.approx_degree is not None and cert.d != family.approx_degree:
        warnings.warn(
            f"lowest exponent is {cert.d}, declared approximation degree was {family.approx_degree}; "
            "using the actual value"
        )
    return cert
