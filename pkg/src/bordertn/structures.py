"""Plaquette states, hypergraphs and entanglement structures.

Leg naming
----------
* A plaquette on edge ``e`` has one leg per party, ``f"{e}.{p}"`` with ``p``
  0-based.
* The MaMu plaquette with bond dimensions ``(D_0, ..., D_{m-1})`` places bond
  ``l`` between parties ``l`` and ``l+1`` (cyclically). Party ``l`` carries the
  pair ``(bond_{l-1}, bond_l)`` fused into one leg, first index most
  significant, so its dimension is ``D_{l-1} * D_l``.
* A structure tensor has one leg per vertex, with the vertex id as leg id.

Kagome coordinates
------------------
Cell ``(r, c)`` holds vertices ``A(r,c)``, ``B(r,c)`` on line ``r`` and
``C(r,c)`` above them. The up triangle is ``U(r,c) = (A(r,c), B(r,c), C(r,c))``
and the down triangle is ``D(r,c) = (B(r,c), A(r,c+1), C(r-1,c+1))``. Vertex
ids read ``"A.r0.c1"``; horizontal positions are ``x = 2c + r`` for ``A``,
``x + 1`` for ``B`` and ``x + 0.5`` for ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .tensor import DenseTensor, Leg, contract, group_legs

VertexId = str
EdgeId = str
Slot = Tuple[EdgeId, int]


# ---------------------------------------------------------------------------
# plaquettes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaquetteSpec:
    """Description of the state placed on one (hyper)edge.

    ``kind`` is one of ``"max_entangled"``, ``"ghz"``, ``"mamu"``, ``"lambda"``
    or ``"custom"``. Use the classmethod constructors rather than filling the
    fields by hand.
    """

    kind: str
    params: tuple = ()
    tensor: Optional[DenseTensor] = field(default=None, compare=False)

    @classmethod
    def max_entangled(cls, dim: int) -> "PlaquetteSpec":
        return cls("max_entangled", (int(dim),))

    @classmethod
    def ghz(cls, parties: int, levels: int) -> "PlaquetteSpec":
        return cls("ghz", (int(parties), int(levels)))

    @classmethod
    def mamu(cls, *dims: int) -> "PlaquetteSpec":
        return cls("mamu", tuple(int(x) for x in dims))

    @classmethod
    def lam(cls) -> "PlaquetteSpec":
        return cls("lambda", ())

    @classmethod
    def custom(cls, tensor: DenseTensor) -> "PlaquetteSpec":
        return cls("custom", (), tensor)

    @property
    def parties(self) -> int:
        if self.kind == "max_entangled":
            return 2
        if self.kind == "ghz":
            return self.params[0]
        if self.kind == "mamu":
            return len(self.params)
        if self.kind == "lambda":
            return 3
        if self.kind == "custom":
            return len(self.tensor.legs)
        raise ValueError(f"unsupported plaquette kind {self.kind!r}")

    def party_dims(self) -> tuple:
        if self.kind == "max_entangled":
            return (self.params[0],) * 2
        if self.kind == "ghz":
            return (self.params[1],) * self.params[0]
        if self.kind == "mamu":
            D = self.params
            return tuple(D[l - 1] * D[l] for l in range(len(D)))
        if self.kind == "lambda":
            return (3, 3, 3)
        if self.kind == "custom":
            return self.tensor.dims
        raise ValueError(f"unsupported plaquette kind {self.kind!r}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "params": list(self.params)}
        if self.kind == "custom":
            from .io import tensor_to_dict

            out["tensor"] = tensor_to_dict(self.tensor)
        return out

    @classmethod
    def from_dict(cls, obj: Mapping) -> "PlaquetteSpec":
        kind = obj["kind"]
        if kind == "custom":
            from .io import tensor_from_dict

            return cls.custom(tensor_from_dict(obj["tensor"]))
        return cls(kind, tuple(int(x) for x in obj.get("params", ())))


def ghz_tensor(parties: int, levels: int, ids: Optional[Sequence] = None) -> DenseTensor:
    """``sum_i |i ... i>`` on ``parties`` legs of dimension ``levels``."""
    if parties < 1 or levels < 1:
        raise ValueError("GHZ needs at least one party and one level")
    ids = list(range(parties)) if ids is None else list(ids)
    data = np.zeros((levels,) * parties)
    for i in range(levels):
        data[(i,) * parties] = 1.0
    return DenseTensor.from_array(data, ids)


def max_entangled_tensor(dim: int, ids: Sequence = (0, 1)) -> DenseTensor:
    return DenseTensor.from_array(np.eye(dim), list(ids))


def lambda_tensor(ids: Sequence = (0, 1, 2)) -> DenseTensor:
    """Antisymmetric three-index tensor on qutrits plus ``|222>``."""
    data = np.zeros((3, 3, 3))
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                         (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.items():
        data[i, j, k] = s
    data[2, 2, 2] = 1.0
    return DenseTensor.from_array(data, list(ids))


def mamu_bond_tensor(dims: Sequence[int], edge: EdgeId = "e") -> DenseTensor:
    """Ungrouped MaMu plaquette: a cycle of maximally entangled pairs.

    Leg ``f"{edge}.{p}/b{l}"`` is party ``p``'s half of bond ``l``. Legs are
    ordered party by party, each party listing ``bond_{p-1}`` then ``bond_p``.
    """
    m = len(dims)
    if m < 2 or any(int(x) < 1 for x in dims):
        raise ValueError(f"invalid MaMu dimensions {dims}")
    t = DenseTensor.scalar(1.0)
    for l in range(m):
        pair = max_entangled_tensor(dims[l], (f"{edge}.{l}/b{l}", f"{edge}.{(l + 1) % m}/b{l}"))
        t = contract(t, pair)
    order = []
    for p in range(m):
        order += [f"{edge}.{p}/b{(p - 1) % m}", f"{edge}.{p}/b{p}"]
    return t.transpose(order)


def mamu_tensor(dims: Sequence[int], edge: Optional[EdgeId] = None) -> DenseTensor:
    """Grouped MaMu plaquette with one leg per party."""
    e = "e" if edge is None else edge
    m = len(dims)
    t = mamu_bond_tensor(dims, e)
    groups = {(f"{e}.{p}" if edge is not None else p): [f"{e}.{p}/b{(p - 1) % m}", f"{e}.{p}/b{p}"]
              for p in range(m)}
    return group_legs(t, groups)


def make_plaquette(spec: PlaquetteSpec, edge: Optional[EdgeId] = None) -> DenseTensor:
    """Exact plaquette tensor with legs ``f"{edge}.{p}"`` (or ``p`` if no edge given)."""
    m = spec.parties
    ids = list(range(m)) if edge is None else [f"{edge}.{p}" for p in range(m)]
    if spec.kind == "max_entangled":
        return max_entangled_tensor(spec.params[0], ids)
    if spec.kind == "ghz":
        return ghz_tensor(spec.params[0], spec.params[1], ids)
    if spec.kind == "mamu":
        return mamu_tensor(spec.params, edge)
    if spec.kind == "lambda":
        return lambda_tensor(ids)
    if spec.kind == "custom":
        return spec.tensor.relabel(dict(zip(spec.tensor.ids, ids)))
    raise ValueError(f"unsupported plaquette kind {spec.kind!r}")


def w_state(L: int) -> DenseTensor:
    """``sum |i_1 ... i_L>`` over bit strings of weight one."""
    if L < 1:
        raise ValueError("W state needs L >= 1")
    data = np.zeros((2,) * L)
    for p in range(L):
        idx = [0] * L
        idx[p] = 1
        data[tuple(idx)] = 1.0
    return DenseTensor.from_array(data, list(range(L)))


# ---------------------------------------------------------------------------
# hypergraphs and structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    vertices: Tuple[VertexId, ...]
    edges: Tuple[Tuple[EdgeId, Tuple[VertexId, ...]], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        eids = [e for e, _ in self.edges]
        if len(set(eids)) != len(eids):
            raise ValueError("duplicate edge ids")
        for e, members in self.edges:
            if len(set(members)) != len(members):
                raise ValueError(f"edge {e!r} lists a vertex twice")
            missing = [v for v in members if v not in vs]
            if missing:
                raise ValueError(f"edge {e!r} references unknown vertices {missing}")

    @classmethod
    def make(cls, vertices, edges) -> "Hypergraph":
        return cls(tuple(vertices), tuple((e, tuple(m)) for e, m in edges))

    def edge(self, e: EdgeId) -> Tuple[VertexId, ...]:
        for eid, members in self.edges:
            if eid == e:
                return members
        raise KeyError(e)

    def degree(self, v: VertexId) -> int:
        return sum(v in members for _, members in self.edges)


def default_grouping(g: Hypergraph) -> Dict[VertexId, List[Slot]]:
    """Each vertex absorbs its slot of every incident edge, in edge order."""
    out: Dict[VertexId, List[Slot]] = {v: [] for v in g.vertices}
    for e, members in g.edges:
        for p, v in enumerate(members):
            out[v].append((e, p))
    return out


@dataclass(frozen=True)
class EntanglementStructure:
    """Plaquettes on the edges of a hypergraph with their legs grouped per vertex."""

    graph: Hypergraph
    plaquettes: Mapping[EdgeId, PlaquetteSpec]
    vertex_legs: Mapping[VertexId, Tuple[Slot, ...]]
    coords: Mapping[VertexId, tuple] = field(default_factory=dict, compare=False)
    tags: Mapping[EdgeId, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = self.graph
        for e, members in g.edges:
            if e not in self.plaquettes:
                raise ValueError(f"edge {e!r} has no plaquette")
            if self.plaquettes[e].parties != len(members):
                raise ValueError(
                    f"plaquette on {e!r} has {self.plaquettes[e].parties} parties, edge has {len(members)}"
                )
        seen = {}
        for v, slots in self.vertex_legs.items():
            if v not in g.vertices:
                raise ValueError(f"grouping mentions unknown vertex {v!r}")
            for s in slots:
                if s in seen:
                    raise ValueError(f"slot {s} assigned to both {seen[s]!r} and {v!r}")
                seen[s] = v
        for e, members in g.edges:
            for p in range(len(members)):
                if (e, p) not in seen:
                    raise ValueError(f"orphan party slot {(e, p)}")
        for v in g.vertices:
            if not self.vertex_legs.get(v):
                raise ValueError(f"vertex {v!r} absorbs no legs")
        if len(seen) != sum(len(m) for _, m in g.edges):
            raise ValueError("grouping assigns slots that do not exist")

    @property
    def faces(self) -> int:
        return len(self.graph.edges)

    def slot_dim(self, slot: Slot) -> int:
        e, p = slot
        return self.plaquettes[e].party_dims()[p]

    def vertex_dims(self) -> Dict[VertexId, int]:
        return {v: prod(self.slot_dim(s) for s in self.vertex_legs[v]) for v in self.graph.vertices}

    def bond_dimension(self) -> float:
        """``max_v D_v ** (1 / deg v)``, with ``deg v`` the number of absorbed legs."""
        dims = self.vertex_dims()
        return max(dims[v] ** (1.0 / len(self.vertex_legs[v])) for v in self.graph.vertices)

    def slot_vertex(self) -> Dict[Slot, VertexId]:
        return {s: v for v, slots in self.vertex_legs.items() for s in slots}

    def tensor(self) -> DenseTensor:
        """Dense resource state with one leg per vertex."""
        t = DenseTensor.scalar(1.0)
        for e, _ in self.graph.edges:
            t = contract(t, make_plaquette(self.plaquettes[e], e))
        groups = {v: [f"{e}.{p}" for e, p in self.vertex_legs[v]] for v in self.graph.vertices}
        return group_legs(t, groups)

    def with_plaquettes(self, spec: PlaquetteSpec) -> "EntanglementStructure":
        """Same wiring with every plaquette replaced by ``spec``."""
        return EntanglementStructure(self.graph, {e: spec for e, _ in self.graph.edges},
                                     self.vertex_legs, self.coords, self.tags)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.graph.vertices),
            "edges": [{"id": e, "vertices": list(m)} for e, m in self.graph.edges],
            "plaquettes": {e: self.plaquettes[e].to_dict() for e, _ in self.graph.edges},
            "grouping": {v: [[e, p] for e, p in self.vertex_legs[v]] for v in self.graph.vertices},
            "coords": {v: list(c) for v, c in self.coords.items()},
            "tags": dict(self.tags),
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "EntanglementStructure":
        g = Hypergraph.make(obj["vertices"], [(e["id"], e["vertices"]) for e in obj["edges"]])
        plaq = {e: PlaquetteSpec.from_dict(p) for e, p in obj["plaquettes"].items()}
        grouping = obj.get("grouping")
        legs = ({v: tuple((e, int(p)) for e, p in s) for v, s in grouping.items()}
                if grouping else {v: tuple(s) for v, s in default_grouping(g).items()})
        coords = {v: tuple(c) for v, c in obj.get("coords", {}).items()}
        return cls(g, plaq, legs, coords, dict(obj.get("tags", {})))


def build_structure(g: Hypergraph, plaquettes, grouping=None):
    """Assemble an :class:`EntanglementStructure` and its dense tensor.

    ``plaquettes`` is a single :class:`PlaquetteSpec` used on every edge or a
    mapping from edge id to spec. ``grouping`` defaults to
    :func:`default_grouping`.
    """
    if isinstance(plaquettes, PlaquetteSpec):
        plaquettes = {e: plaquettes for e, _ in g.edges}
    grouping = default_grouping(g) if grouping is None else grouping
    s = EntanglementStructure(g, dict(plaquettes), {v: tuple(map(tuple, x)) for v, x in grouping.items()})
    return s, s.tensor()


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeDescriptor:
    kind: str
    size: tuple
    boundary: str = "open"

    def __post_init__(self):
        if self.kind not in ("cycle", "path", "square", "kagome"):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if any(int(s) < 1 for s in self.size):
            raise ValueError("lattice sizes must be >= 1")
        if self.boundary not in ("open", "periodic"):
            raise ValueError("boundary must be 'open' or 'periodic'")
        if self.boundary == "periodic" and self.kind != "cycle":
            raise ValueError("periodic boundaries are only supported for cycles")

    @property
    def faces(self) -> int:
        if self.kind == "cycle":
            return self.size[0]
        if self.kind == "path":
            return self.size[0] - 1
        if self.kind == "square":
            return self.size[0] * self.size[-1]
        return self.size[0] * self.size[1]


def cycle_structure(L: int, spec: Optional[PlaquetteSpec] = None) -> EntanglementStructure:
    """Ring of ``L`` vertices with a two-party plaquette on each edge.

    Vertex ``v{l}`` absorbs edge ``e{l-1}`` first and ``e{l}`` second, so with
    maximally entangled pairs the tensor equals the grouped MaMu plaquette.
    """
    if L < 2:
        raise ValueError("cycle needs L >= 2")
    spec = PlaquetteSpec.max_entangled(2) if spec is None else spec
    verts = [f"v{l}" for l in range(L)]
    edges = [(f"e{l}", (verts[l], verts[(l + 1) % L])) for l in range(L)]
    g = Hypergraph.make(verts, edges)
    legs = {verts[l]: ((f"e{(l - 1) % L}", 1), (f"e{l}", 0)) for l in range(L)}
    coords = {v: (float(l), 0.0) for l, v in enumerate(verts)}
    return EntanglementStructure(g, {e: spec for e, _ in edges}, legs, coords)


def path_structure(L: int, spec: Optional[PlaquetteSpec] = None) -> EntanglementStructure:
    if L < 2:
        raise ValueError("path needs L >= 2")
    spec = PlaquetteSpec.max_entangled(2) if spec is None else spec
    verts = [f"v{l}" for l in range(L)]
    g = Hypergraph.make(verts, [(f"e{l}", (verts[l], verts[l + 1])) for l in range(L - 1)])
    coords = {v: (float(l), 0.0) for l, v in enumerate(verts)}
    return EntanglementStructure(g, {e: spec for e, _ in g.edges},
                                 {v: tuple(s) for v, s in default_grouping(g).items()}, coords)


def single_edge_structure(spec: PlaquetteSpec) -> EntanglementStructure:
    """One hyperedge over all of its parties' vertices."""
    verts = [f"v{p}" for p in range(spec.parties)]
    g = Hypergraph.make(verts, [("e0", verts)])
    return EntanglementStructure(g, {"e0": spec}, {v: (("e0", p),) for p, v in enumerate(verts)})


def square_ghz_structure(L: int, k: int, Ly: Optional[int] = None) -> EntanglementStructure:
    """``L x Ly`` faces, each carrying a four-party GHZ(k) plaquette.

    Vertices form an ``(L+1) x (Ly+1)`` grid named ``"s.x{x}.y{y}"``; face
    ``"f.x{x}.y{y}"`` spans the corners ``(x,y), (x+1,y), (x+1,y+1), (x,y+1)``
    in that party order. Interior vertices absorb four GHZ legs.
    """
    Ly = L if Ly is None else Ly
    if L < 1 or Ly < 1:
        raise ValueError("square plaquette lattice needs at least one face per side")
    name = lambda x, y: f"s.x{x}.y{y}"  # noqa: E731
    verts = [name(x, y) for y in range(Ly + 1) for x in range(L + 1)]
    edges = []
    for y in range(Ly):
        for x in range(L):
            edges.append((f"f.x{x}.y{y}", (name(x, y), name(x + 1, y), name(x + 1, y + 1), name(x, y + 1))))
    g = Hypergraph.make(verts, edges)
    coords = {name(x, y): (float(x), float(y)) for y in range(Ly + 1) for x in range(L + 1)}
    spec = PlaquetteSpec.ghz(4, k)
    return EntanglementStructure(g, {e: spec for e, _ in edges},
                                 {v: tuple(s) for v, s in default_grouping(g).items()}, coords)


def kagome_vertex(kind: str, r: int, c: int) -> str:
    return f"{kind}.r{r}.c{c}"


def kagome_position(v: VertexId) -> Tuple[float, float]:
    kind, rs, cs = v.split(".")
    r, c = int(rs[1:]), int(cs[1:])
    x = 2 * c + r
    if kind == "A":
        return (float(x), float(2 * r))
    if kind == "B":
        return (float(x + 1), float(2 * r))
    return (x + 0.5, float(2 * r + 1))


def kagome_triangles(rows: int, cols: int) -> List[Tuple[str, str, Tuple[VertexId, VertexId, VertexId]]]:
    """``(edge id, "up"|"down", parties)`` for a sheared kagome patch.

    ``rows`` strips of ``cols`` triangles each, alternating up and down and
    starting with an up triangle. Strip ``r`` starts at cell column
    ``rows - 1 - r`` so that consecutive strips share the ``C`` tips.
    """
    if rows < 1 or cols < 1:
        raise ValueError("kagome patch needs rows, cols >= 1")
    out = []
    for r in range(rows):
        c0 = rows - 1 - r
        for t in range(cols):
            c = c0 + t // 2
            if t % 2 == 0:
                parts = (kagome_vertex("A", r, c), kagome_vertex("B", r, c), kagome_vertex("C", r, c))
                out.append((f"U.r{r}.c{c}", "up", parts))
            else:
                parts = (kagome_vertex("B", r, c), kagome_vertex("A", r, c + 1), kagome_vertex("C", r - 1, c + 1))
                out.append((f"D.r{r}.c{c}", "down", parts))
    return out


def kagome_structure(rows: int, cols: int, spec: Optional[PlaquetteSpec] = None,
                     down_spec: Optional[PlaquetteSpec] = None) -> EntanglementStructure:
    """Kagome patch with ``spec`` on up triangles and ``down_spec`` (default ``spec``) on down ones."""
    spec = PlaquetteSpec.lam() if spec is None else spec
    down_spec = spec if down_spec is None else down_spec
    tris = kagome_triangles(rows, cols)
    verts: List[VertexId] = []
    for _, _, parts in tris:
        for v in parts:
            if v not in verts:
                verts.append(v)
    verts.sort(key=lambda v: (kagome_position(v)[1], kagome_position(v)[0]))
    g = Hypergraph.make(verts, [(e, parts) for e, _, parts in tris])
    plaq = {e: (spec if tag == "up" else down_spec) for e, tag, _ in tris}
    return EntanglementStructure(g, plaq, {v: tuple(s) for v, s in default_grouping(g).items()},
                                 {v: kagome_position(v) for v in verts}, {e: tag for e, tag, _ in tris})


def kagome_lambda_structure(rows: int, cols: int) -> EntanglementStructure:
    return kagome_structure(rows, cols, PlaquetteSpec.lam())


def lattice_structure(desc: LatticeDescriptor, spec: Optional[PlaquetteSpec] = None) -> EntanglementStructure:
    if desc.kind == "cycle":
        return cycle_structure(desc.size[0], spec)
    if desc.kind == "path":
        return path_structure(desc.size[0], spec)
    if desc.kind == "square":
        k = 2 if spec is None else spec.party_dims()[0]
        return square_ghz_structure(desc.size[0], k, desc.size[1] if len(desc.size) > 1 else None)
    return kagome_structure(desc.size[0], desc.size[1], spec)
