"""Boundary-MPS contraction of PEPS sandwiches ``<bra|O|ket>``.

A :class:`PepsNetwork` lists its sites in layers (rows for the square lattice,
alternating vertex lines and tip rows for the kagome lattice). Every virtual
bond joins two sites of the same layer or of consecutive layers, and sites in
a layer are ordered left to right.

The contraction sweeps one boundary MPS up from the bottom layer and one down
from the top layer and overlaps them in the middle. Within a layer the
zip-up schedule is used: the running tensor absorbs the boundary-MPS tensors
the next site attaches to, then the ket site tensor, then the bra site tensor,
and is finally split into a new MPS tensor (truncated SVD to ``chi``, or an
exact QR split when ``chi`` is None) and the rest.

Leg ids inside the sweep: ``("k", bond)`` and ``("b", bond)`` are ket and bra
copies of a virtual bond, ``("o", j)`` the bonds of the current boundary MPS and
``("n", j)`` those of the MPS being built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import flops
from .cost import cost_kagome, cost_square
from .structures import EntanglementStructure, PlaquetteSpec, kagome_position, kagome_structure
from .tensor import (DenseTensor, Leg, apply_local_map, contract, qr_split, singular_values,
                     svd_truncate)

SiteId = str


@dataclass(frozen=True)
class PepsNetwork:
    """Site tensors with a physical leg (id = site id) and named virtual bonds.

    ``layers`` lists site ids bottom to top, each layer ordered by increasing
    horizontal position. ``kind`` selects the cost model; ``params`` records
    the bond dimensions used to build the network.
    """

    kind: str
    tensors: Mapping[SiteId, DenseTensor]
    layers: Tuple[Tuple[SiteId, ...], ...]
    positions: Mapping[SiteId, Tuple[float, float]] = field(default_factory=dict)
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        sites = [s for layer in self.layers for s in layer]
        if sorted(sites) != sorted(self.tensors):
            raise ValueError("layers must list every site exactly once")
        owners: Dict = {}
        for s, t in self.tensors.items():
            if not t.has_leg(s):
                raise ValueError(f"site {s!r} lacks its physical leg")
            for leg in t.legs:
                if leg.id == s:
                    continue
                owners.setdefault(leg.id, []).append((s, leg.dim))
        layer_of = {s: n for n, layer in enumerate(self.layers) for s in layer}
        for b, ends in owners.items():
            if len(ends) != 2:
                raise ValueError(f"bond {b!r} is attached to {len(ends)} sites")
            (s1, d1), (s2, d2) = ends
            if d1 != d2:
                raise ValueError(f"bond {b!r} has mismatched dimensions {d1} and {d2}")
            if abs(layer_of[s1] - layer_of[s2]) > 1:
                raise ValueError(f"bond {b!r} skips a layer")

    @property
    def sites(self) -> List[SiteId]:
        return [s for layer in self.layers for s in layer]

    def bonds(self, site: SiteId) -> List:
        return [i for i in self.tensors[site].ids if i != site]

    def bond_sites(self) -> Dict:
        out: Dict = {}
        for s, t in self.tensors.items():
            for b in self.bonds(s):
                out.setdefault(b, []).append(s)
        return out

    def phys_dim(self, site: SiteId) -> int:
        return self.tensors[site].leg(site).dim

    def bond_dim(self, bond) -> int:
        s = self.bond_sites()[bond][0]
        return self.tensors[s].leg(bond).dim

    def with_tensors(self, tensors: Mapping[SiteId, DenseTensor]) -> "PepsNetwork":
        return PepsNetwork(self.kind, dict(tensors), self.layers, self.positions, self.params)

    def state(self) -> DenseTensor:
        """Dense state over the physical legs (small networks only)."""
        t = DenseTensor.scalar(1.0)
        for s in self.sites:
            t = contract(t, self.tensors[s], [(b, b) for b in self.bonds(s) if t.has_leg(b)])
        return t.transpose(self.sites)


@dataclass(frozen=True)
class ContractionReport:
    value: complex
    discarded_weight: float
    multiply_count: int
    model_cost: float
    chi: Optional[int]
    schedule: str
    max_bond: int = 1
    truncations: int = 0
    tie_breaks: int = 0

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "discarded_weight": self.discarded_weight,
            "multiply_count": self.multiply_count,
            "model_cost": self.model_cost,
            "chi": self.chi,
            "schedule": self.schedule,
            "max_bond": self.max_bond,
            "tie_breaks": self.tie_breaks,
        }


# ---------------------------------------------------------------------------
# network builders
# ---------------------------------------------------------------------------

def _random_tensor(legs, rng) -> DenseTensor:
    shape = [leg.dim for leg in legs]
    data = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return DenseTensor(legs, data / np.sqrt(max(1, prod(shape))) * 2)


def square_peps(Lx: int, Ly: int, D1: int = 2, D2: int = 2, d: int = 2, seed=None,
                tensors: Optional[Mapping] = None) -> PepsNetwork:
    """Random open-boundary square PEPS.

    Site ``"x{x}.y{y}"``; horizontal bonds ``"h.x{x}.y{y}"`` (dim ``D1``, along a
    row) and vertical bonds ``"v.x{x}.y{y}"`` (dim ``D2``, between rows).
    """
    if Lx < 1 or Ly < 1:
        raise ValueError("lattice sizes must be >= 1")
    rng = np.random.default_rng(seed)
    site = lambda x, y: f"x{x}.y{y}"  # noqa: E731
    out = {}
    for y in range(Ly):
        for x in range(Lx):
            legs = [Leg(site(x, y), d)]
            if x > 0:
                legs.append(Leg(f"h.x{x - 1}.y{y}", D1))
            if x < Lx - 1:
                legs.append(Leg(f"h.x{x}.y{y}", D1))
            if y > 0:
                legs.append(Leg(f"v.x{x}.y{y - 1}", D2))
            if y < Ly - 1:
                legs.append(Leg(f"v.x{x}.y{y}", D2))
            out[site(x, y)] = _random_tensor(legs, rng) if tensors is None else tensors[site(x, y)]
    layers = tuple(tuple(site(x, y) for x in range(Lx)) for y in range(Ly))
    pos = {site(x, y): (float(x), float(y)) for y in range(Ly) for x in range(Lx)}
    return PepsNetwork("square", out, layers, pos, {"D1": D1, "D2": D2, "d": d, "Lx": Lx, "Ly": Ly})


def kagome_layers(vertices: Sequence[SiteId]) -> Tuple[Tuple[SiteId, ...], ...]:
    """Tips below line 0, then each vertex line followed by its row of ``C`` tips."""
    def layer(v):
        kind, rs, _ = v.split(".")
        r = int(rs[1:])
        return 2 * r + 1 if kind in ("A", "B") else 2 * r + 2

    groups: Dict[int, List[SiteId]] = {}
    for v in vertices:
        groups.setdefault(layer(v), []).append(v)
    return tuple(tuple(sorted(groups[k], key=lambda v: kagome_position(v)[0])) for k in sorted(groups))


def slot_bonds(structure: EntanglementStructure, edge, party: int) -> List[Leg]:
    """Virtual bonds carried by one party slot: one for a pair, two for a MaMu cycle."""
    spec = structure.plaquettes[edge]
    if spec.kind == "max_entangled":
        return [Leg(f"{edge}/b0", spec.params[0])]
    if spec.kind == "mamu":
        D, m = spec.params, len(spec.params)
        return [Leg(f"{edge}/b{(party - 1) % m}", D[party - 1]), Leg(f"{edge}/b{party}", D[party])]
    raise ValueError(f"plaquette kind {spec.kind!r} is not a bond network")


def peps_from_restriction(structure: EntanglementStructure, maps: Mapping[SiteId, np.ndarray],
                          kind: str = "generic", layers=None, positions=None, params=None) -> PepsNetwork:
    """PEPS whose site tensors are the per-vertex maps applied to pair/MaMu plaquettes.

    Contracting all virtual bonds reproduces ``(x_v A_v) Psi`` for the
    structure tensor ``Psi``.
    """
    tensors = {}
    for v in structure.graph.vertices:
        bonds = [leg for e, p in structure.vertex_legs[v] for leg in slot_bonds(structure, e, p)]
        A = np.asarray(maps[v], dtype=complex)
        if A.shape[1] != prod(leg.dim for leg in bonds):
            raise ValueError(f"map for {v!r} has {A.shape[1]} columns, bonds give {prod(l.dim for l in bonds)}")
        tensors[v] = DenseTensor([Leg(v, A.shape[0])] + bonds, A.reshape([A.shape[0]] + [l.dim for l in bonds]))
    if layers is None:
        layers = kagome_layers(structure.graph.vertices) if kind == "kagome" else (tuple(structure.graph.vertices),)
    positions = dict(structure.coords) if positions is None else positions
    return PepsNetwork(kind, tensors, tuple(layers), positions, dict(params or {}))


def kagome_peps(rows: int, cols: int, K: Sequence[int] = (2, 2, 2), D: Optional[Sequence[int]] = None,
                d: int = 2, seed=None) -> PepsNetwork:
    """Random kagome PEPS on the sheared patch of :func:`kagome_structure`.

    ``K = (K1, K2, K3)`` are the bonds of up triangles (A-B, B-C, C-A) and
    ``D = (D1, D2, D3)`` those of down triangles (B-A', A'-C', C'-B).
    """
    D = tuple(K) if D is None else tuple(D)
    st = kagome_structure(rows, cols, PlaquetteSpec.mamu(*K), PlaquetteSpec.mamu(*D))
    rng = np.random.default_rng(seed)
    maps = {}
    for v in st.graph.vertices:
        cols_ = st.vertex_dims()[v]
        maps[v] = (rng.normal(size=(d, cols_)) + 1j * rng.normal(size=(d, cols_))) / np.sqrt(cols_) * 2
    return peps_from_restriction(st, maps, "kagome",
                                 params={"K": tuple(K), "D": D, "d": d, "rows": rows, "cols": cols})


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------

class _Sweep:
    """Mutable sweep state; one instance per contraction."""

    def __init__(self, chi: Optional[int]):
        self.chi = chi
        self.discarded = 0.0
        self.max_bond = 1
        self.truncations = 0
        self.tie_breaks = 0
        self.log_scale = 0.0

    def split(self, carry: DenseTensor, row_legs, bond_id):
        if self.chi is None:
            U, R = qr_split(carry, row_legs, bond_id)
        else:
            U, R, dw = svd_truncate(carry, row_legs, self.chi, bond_id)
            self.discarded += dw
            self.truncations += 1
            kept = U.leg(bond_id).dim
            if dw > 0:
                s = singular_values(carry, row_legs)
                if kept < len(s) and np.isclose(s[kept - 1], s[kept], rtol=1e-12, atol=0):
                    self.tie_breaks += 1
        self.max_bond = max(self.max_bond, U.leg(bond_id).dim)
        return U, R


def _site_tensors(ket: PepsNetwork, bra: PepsNetwork, site: SiteId, op) -> Tuple[DenseTensor, DenseTensor]:
    k = ket.tensors[site]
    if op is not None:
        k = apply_local_map(k, site, op)
    k = k.relabel({b: ("k", b) for b in ket.bonds(site)} | {site: ("phys", site)})
    b = bra.tensors[site].conj().relabel({x: ("b", x) for x in bra.bonds(site)} | {site: ("phys", site)})
    return k, b


def _absorb_layer(old: List[DenseTensor], layer: Sequence[SiteId], ket: PepsNetwork, bra: PepsNetwork,
                  ops: Mapping, forward: Dict[SiteId, List], partner_x: Mapping, sweep: _Sweep) -> List[DenseTensor]:
    """Zip one layer of sites into the boundary MPS ``old``."""
    attached = []
    for s in layer:
        mine = {("k", b) for b in ket.bonds(s)}
        idx = [j for j, t in enumerate(old) if mine.intersection(t.ids)]
        attached.append(max(idx) if idx else -1)
    n_old = len(old)
    carry = DenseTensor.from_array(np.ones((1, 1)), [("n", 0), ("o", 0)])
    j = 0
    new: List[DenseTensor] = []
    for t, s in enumerate(layer):
        upto = max(attached[t], j - 1)
        while j <= upto:
            carry = contract(carry, old[j], [(("o", j), ("o", j))])
            j += 1
        k, b = _site_tensors(ket, bra, s, ops.get(s))
        carry = contract(carry, k, [(i, i) for i in k.ids if i[0] == "k" and carry.has_leg(i)])
        carry = contract(carry, b, [(i, i) for i in b.ids if carry.has_leg(i)])
        if t < len(layer) - 1:
            rows = [("n", t)] + [(c, x) for x in forward[s] for c in ("k", "b")]
            U, carry = sweep.split(carry, rows, ("n", t + 1))
            new.append(U.transpose([("n", t)] + [i for i in U.ids if i not in (("n", t), ("n", t + 1))] + [("n", t + 1)]))
        else:
            while j < n_old:
                carry = contract(carry, old[j], [(("o", j), ("o", j))])
                j += 1
            carry = contract(carry, DenseTensor.from_array(np.ones((1, 1)), [("o", n_old), ("n", t + 1)]),
                             [(("o", n_old), ("o", n_old))])
            new.append(carry)
    new = _split_tips(new, partner_x, sweep)
    # normalize to keep magnitudes in range; the scale is restored at the end
    out = []
    for T in new:
        nrm = T.norm()
        if nrm > 0:
            sweep.log_scale += np.log(nrm)
            T = T / nrm
        out.append(T.relabel({("n", i): ("o", i) for i in range(len(new) + 1)}))
    return out


def _split_tips(chain: List[DenseTensor], partner_x: Mapping, sweep: _Sweep) -> List[DenseTensor]:
    """Split MPS tensors carrying several sandwich bonds into one tensor per bond.

    Bonds are ordered by the horizontal position of the site that will absorb
    them, so each tensor of the result attaches to a single site.
    """
    out: List[DenseTensor] = []
    for t, T in enumerate(chain):
        left, right = ("n", t), ("n", t + 1)
        bonds = sorted({i[1] for i in T.ids if i[0] == "k"}, key=lambda b: (partner_x[b], str(b)))
        T = T.relabel({left: ("L",), right: ("R",)})
        for n, b in enumerate(bonds[:-1]):
            U, T = sweep.split(T, [("L",), ("k", b), ("b", b)], ("cut", n))
            out.append(U.relabel({("cut", n): ("R",)}))
            T = T.relabel({("cut", n): ("L",)})
        out.append(T)
    relabeled = []
    for t, T in enumerate(out):
        relabeled.append(T.relabel({("L",): ("n", t), ("R",): ("n", t + 1)}))
    return relabeled


def _sweep(layers: Sequence[Sequence[SiteId]], ket, bra, ops, pos, sweep: _Sweep) -> List[DenseTensor]:
    """Boundary MPS after absorbing ``layers`` in order."""
    placed = set()
    bond_sites = ket.bond_sites()
    mps: List[DenseTensor] = []
    for layer in layers:
        later = set(ket.sites) - placed - set(layer)
        forward = {s: [x for x in ket.bonds(s) if any(o in later for o in bond_sites[x] if o != s)]
                   for s in layer}
        partner_x = {x: pos(o) for s in layer for x in forward[s] for o in bond_sites[x] if o != s}
        mps = _absorb_layer(mps, layer, ket, bra, ops, forward, partner_x, sweep)
        placed |= set(layer)
    return mps


def _chain_positions(mps: List[DenseTensor], ket: PepsNetwork, pos) -> List[float]:
    """Horizontal position of each MPS tensor: the midpoint of its open bond, kept nondecreasing."""
    bond_sites = ket.bond_sites()
    out, last = [], float("-inf")
    for T in mps:
        xs = [pos(o) for i in T.ids if i[0] == "k" for o in bond_sites[i[1]]]
        last = max(last, sum(xs) / len(xs)) if xs else last
        out.append(last)
    return out


def _overlap(bottom: List[DenseTensor], top: List[DenseTensor], xb: List[float], xt: List[float]) -> complex:
    bot = [t.relabel({i: ("bot", i[1]) for i in t.ids if i[0] == "o"}) for t in bottom]
    tp = [t.relabel({i: ("top", i[1]) for i in t.ids if i[0] == "o"}) for t in top]
    order = sorted([(x, 0, n) for n, x in enumerate(xb)] + [(x, 1, n) for n, x in enumerate(xt)])
    carry = DenseTensor.scalar(1.0)
    for _, side, n in order:
        T = bot[n] if side == 0 else tp[n]
        carry = contract(carry, T, [(i, i) for i in T.ids if carry.has_leg(i)])
    if carry.size != 1:
        raise RuntimeError("overlap left open legs")
    return complex(carry.data.ravel()[0])


def _check_pair(ket: PepsNetwork, bra: PepsNetwork) -> None:
    if ket.layers != bra.layers:
        raise ValueError("ket and bra lattices differ")
    for s in ket.sites:
        if ket.phys_dim(s) != bra.phys_dim(s):
            raise ValueError(f"physical dimension mismatch at {s!r}")
        if sorted(map(str, ket.bonds(s))) != sorted(map(str, bra.bonds(s))):
            raise ValueError(f"bond wiring differs at {s!r}")


def boundary_contract(ket: PepsNetwork, bra: Optional[PepsNetwork] = None, chi: Optional[int] = None,
                      ops: Optional[Mapping] = None) -> ContractionReport:
    """``<bra|O|ket>`` by boundary MPS sweeps from both ends meeting in the middle."""
    bra = ket if bra is None else bra
    _check_pair(ket, bra)
    if chi is not None and chi < 1:
        raise ValueError("chi must be at least 1")
    ops = dict(ops or {})
    sweep = _Sweep(chi)
    layers = list(ket.layers)
    mid = len(layers) // 2
    order = {s: float(i) for layer in layers for i, s in enumerate(layer)}
    pos = lambda s: ket.positions.get(s, (order[s], 0.0))[0]  # noqa: E731
    with flops.count_flops() as counter:
        bottom = _sweep(layers[:mid], ket, bra, ops, pos, sweep)
        top = _sweep(layers[mid:][::-1], ket, bra, ops, pos, sweep)
        xb = _chain_positions(bottom, ket, pos)
        xt = _chain_positions(top, ket, pos)
        value = _overlap(bottom, top, xb, xt) * np.exp(sweep.log_scale)
    model = model_cost(ket, bra, chi if chi is not None else sweep.max_bond)
    return ContractionReport(complex(value), sweep.discarded, counter.total, model, chi, ket.kind,
                             sweep.max_bond, sweep.truncations, sweep.tie_breaks)


def contract_square(net: PepsNetwork, bra: Optional[PepsNetwork] = None, chi: Optional[int] = None,
                    ops: Optional[Mapping] = None) -> ContractionReport:
    if net.kind != "square" or (bra is not None and bra.kind != "square"):
        raise ValueError("contract_square needs square-lattice networks")
    return boundary_contract(net, bra, chi, ops)


def contract_kagome(net: PepsNetwork, bra: Optional[PepsNetwork] = None, chi: Optional[int] = None,
                    ops: Optional[Mapping] = None) -> ContractionReport:
    if net.kind != "kagome" or (bra is not None and bra.kind != "kagome"):
        raise ValueError("contract_kagome needs kagome networks")
    return boundary_contract(net, bra, chi, ops)


def model_cost(ket: PepsNetwork, bra: PepsNetwork, chi: float, C_mm: float = 1.0, C_svd: float = 1.0) -> float:
    """Number of sites times the per-tensor cost formula of the lattice."""
    n = len(ket.sites)
    d = max(ket.phys_dim(s) for s in ket.sites)
    if ket.kind == "square":
        return n * cost_square(chi, ket.params.get("D1", 1), ket.params.get("D2", 1), d, C_mm, C_svd)
    if ket.kind == "kagome" and "K" in ket.params:
        return n * cost_kagome(chi, d, ket.params["D"], bra.params.get("D"), ket.params["K"],
                               bra.params.get("K"), C_mm, C_svd)
    return float("nan")


# ---------------------------------------------------------------------------
# dense oracle
# ---------------------------------------------------------------------------

def dense_contract(ket: PepsNetwork, bra: Optional[PepsNetwork] = None, ops: Optional[Mapping] = None,
                   max_entries: int = 2 ** 26) -> complex:
    """``<bra|O|ket>`` by absorbing fused double-layer sites one at a time, without truncation.

    Sites are absorbed in layer order; each step is a single ``np.tensordot``
    over the bonds shared with the running tensor. Raises ``MemoryError`` if
    the running tensor would exceed ``max_entries``.
    """
    bra = ket if bra is None else bra
    _check_pair(ket, bra)
    ops = dict(ops or {})
    running = np.ones(())
    open_bonds: List = []
    for s in [s for layer in ket.layers for s in layer]:
        bonds = ket.bonds(s)
        k = ket.tensors[s].array([s] + bonds)
        if s in ops:
            k = np.tensordot(np.asarray(ops[s], dtype=complex), k, axes=(1, 0))
        b = bra.tensors[s].array([s] + bonds).conj()
        n = len(bonds)
        pair = np.tensordot(k, b, axes=(0, 0))
        pair = pair.transpose([x for i in range(n) for x in (i, n + i)])
        fused = pair.reshape([ket.bond_dim(x) * bra.bond_dim(x) for x in bonds])
        shared = [x for x in bonds if x in open_bonds]
        fresh = [x for x in bonds if x not in open_bonds]
        rest = [x for x in open_bonds if x not in shared]
        size = prod(ket.bond_dim(x) * bra.bond_dim(x) for x in rest + fresh)
        if size > max_entries:
            raise MemoryError(f"dense oracle intermediate of {size} entries exceeds {max_entries}")
        running = np.tensordot(running, fused, axes=([open_bonds.index(x) for x in shared],
                                                     [bonds.index(x) for x in shared]))
        open_bonds = rest + fresh
    return complex(running)


# ---------------------------------------------------------------------------
# border PEPS samples
# ---------------------------------------------------------------------------

def _structure_params(structure: EntanglementStructure, d: int) -> dict:
    ups = [structure.plaquettes[e] for e, tag in structure.tags.items() if tag == "up"]
    downs = [structure.plaquettes[e] for e, tag in structure.tags.items() if tag == "down"]
    out = {"d": d}
    if ups and ups[0].kind == "mamu":
        out["K"] = tuple(ups[0].params)
        out["D"] = tuple((downs or ups)[0].params)
    return out


def border_peps(structure: EntanglementStructure, family, eps: complex, kind: str = "kagome") -> PepsNetwork:
    """PEPS of the sample ``T(eps)`` of a scaled family over a bond-network structure."""
    if eps == 0:
        raise ValueError("samples are taken away from eps = 0")
    maps = dict(family.evaluate_maps(eps))
    first = structure.graph.vertices[0]
    maps[first] = maps[first] * complex(eps ** (-family.d))
    d = max(m.shape[0] for m in maps.values())
    return peps_from_restriction(structure, maps, kind, params=_structure_params(structure, d))


def expectation_by_boundary(structure: EntanglementStructure, family, ops: Optional[Mapping] = None,
                            plan=None, mode: str = "real", radius: Optional[float] = None,
                            chi: Optional[int] = None, kind: str = "kagome"):
    """Interpolated ``<T|O|T>`` where every sample is a boundary-MPS contraction.

    Returns ``(ExpectationResult, reports)`` with one :class:`ContractionReport`
    per sample point.
    """
    from .interpolation import ExpectationResult, holdout_error, interpolate_at_zero, make_plan

    plan = make_plan(2 * family.degree, mode, radius) if plan is None else plan
    reports: Dict[complex, ContractionReport] = {}

    def sample(eps):
        ket = border_peps(structure, family, eps, kind)
        bra = ket if np.isreal(eps) else border_peps(structure, family, np.conj(eps), kind)
        rep = boundary_contract(ket, bra, chi, ops)
        reports[complex(eps)] = rep
        return rep.value

    value, values = interpolate_at_zero(sample, plan)
    ordered = [reports[complex(p)] for p in plan.points]
    err = holdout_error(sample, plan, values)
    return ExpectationResult(complex(value), plan, values, err), ordered


def rvb_exact_peps(rows: int, cols: int, project: bool = True) -> PepsNetwork:
    """Exact bond-(3,2,2) PEPS of the kagome lambda (or RVB) patch from the MaMu(3,2,2) restriction."""
    from .conversions import LocalMapFamily, lift_to_lattice
    from .zoo import LAMBDA_MAMU_DIMS, lambda_restriction_maps, rvb_projector

    spec = PlaquetteSpec.mamu(*LAMBDA_MAMU_DIMS)
    st = kagome_structure(rows, cols, spec)
    fam = lift_to_lattice(LocalMapFamily.constant(lambda_restriction_maps()), st)
    maps = {v: m(0) for v, m in fam.maps.items()}
    if project:
        P = rvb_projector()
        maps = {v: (P @ A if A.shape[0] == 9 else A) for v, A in maps.items()}
    d = max(A.shape[0] for A in maps.values())
    return peps_from_restriction(st, maps, "kagome", params=_structure_params(st, d))
