"""Explicit restrictions and degenerations between plaquette states.

Every constructor returns plain matrices or a :class:`LocalMapFamily` keyed by
party slot (``0..m-1``) or by vertex id. :data:`ZOO` packages them with their
source and target tensors so they can be certified uniformly.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .conversions import (DegenerationCertificate, LocalMapFamily, analyze_degeneration,
                          compose_with_restriction, lift_to_lattice)
from .smith import box_solutions
from .structures import (PlaquetteSpec, cycle_structure, kagome_structure, lambda_tensor, mamu_tensor,
                         w_state)
from .tensor import DenseTensor, MatrixPoly, apply_local_maps, schmidt_rank

ENUMERATION_BUDGET = 10 ** 7


# ---------------------------------------------------------------------------
# W state
# ---------------------------------------------------------------------------

def w_mps_matrices(L: int) -> Tuple[MatrixPoly, MatrixPoly]:
    """``M0 = diag(1, w)`` with ``w = exp(i pi / L)`` and ``M1 = diag(eps, 0)``."""
    if L < 2:
        raise ValueError("W-state MPS needs L >= 2")
    omega = cmath.exp(1j * cmath.pi / L)
    M0 = MatrixPoly.constant(np.diag([1.0, omega]))
    M1 = MatrixPoly.monomial(np.diag([1.0, 0.0]), 1)
    return M0, M1


def w_border_mps(L: int) -> Tuple[LocalMapFamily, "EntanglementStructure"]:  # noqa: F821
    """Translation-invariant bond-2 degeneration of MaMu on a ring of ``L`` sites to W(L).

    Vertex ``v{l}`` maps its bond pair ``(a, b)`` to the physical bit ``s``
    with amplitude ``M_s[a, b]``; contracting the ring gives
    ``tr(M_{s_1} ... M_{s_L})``.
    """
    M0, M1 = w_mps_matrices(L)
    terms: Dict[int, np.ndarray] = {}
    for s, M in enumerate((M0, M1)):
        for k, mat in M.terms.items():
            row = np.zeros((2, 4), dtype=complex)
            row[s] = mat.reshape(-1)
            terms[k] = terms.get(k, 0) + row
    vertex_map = MatrixPoly(terms, (2, 4))
    structure = cycle_structure(L)
    fam = LocalMapFamily({v: vertex_map for v in structure.graph.vertices}, 1, L - 1)
    return fam, structure


def w_product_state(L: int, eps: complex) -> DenseTensor:
    """``eps**-1 * ((|0> + eps|1>)^{x L} - |0...0>)``, the product-state W family."""
    v = np.array([1.0, eps], dtype=complex)
    data = v
    for _ in range(L - 1):
        data = np.multiply.outer(data, v)
    data = np.array(data)
    data[(0,) * L] -= 1.0
    return DenseTensor.from_array(data / eps, list(range(L)))


def symbolic_w_trace(word: Sequence[int], L: int) -> Dict[int, Dict[int, int]]:
    """Exact ``tr(M_{s_1} ... M_{s_n})`` for the W-state MPS matrices.

    Entries are kept as integer combinations of ``eps**a * w**b`` with
    ``w**L = -1`` reduced exactly. Returns ``{a: {b: coeff}}`` with zero
    coefficients removed; an empty dict means the trace is exactly zero.
    """
    # diagonal entry 0: M0 -> 1, M1 -> eps ; entry 1: M0 -> w, M1 -> 0
    m = sum(1 for s in word if s == 1)
    n = len(word) - m
    out: Dict[int, Dict[int, int]] = {}

    def add(a, b, c):
        b %= 2 * L
        if b >= L:
            b, c = b - L, -c
        bucket = out.setdefault(a, {})
        bucket[b] = bucket.get(b, 0) + c

    add(m, 0, 1)
    if m == 0:
        add(0, n, 1)
    return {a: {b: c for b, c in d.items() if c} for a, d in out.items() if any(d.values())}


# ---------------------------------------------------------------------------
# lambda tensor
# ---------------------------------------------------------------------------

LAMBDA_MAMU_DIMS = (3, 2, 2)


def lambda_restriction_223() -> List[np.ndarray]:
    """MPS matrices ``M^[j]_a`` (``a = 0, 1, 2``) restricting MaMu(3,2,2) to lambda.

    Entry ``j`` has shape ``(3, rows, cols)``; party ``j`` holds the bond pair
    ``(bond_{j-1}, bond_j)`` of the MaMu plaquette with bond dims (3, 2, 2).
    """
    h = 0.5
    m1 = np.array([
        [[0, h, 0], [h, 0, 0]],
        [[0, -1, 0], [1, 0, 0]],
        [[1, 0, 1], [0, -1, 0]],
    ], dtype=float)
    m2 = np.array([
        [[0, h], [h, 0], [0, 0]],
        [[0, -1], [1, 0], [0, 0]],
        [[1, 0], [0, -1], [1, 0]],
    ], dtype=float)
    m3 = np.array([
        [[0, h], [h, 0]],
        [[0, -1], [1, 0]],
        [[1, 0], [0, -1]],
    ], dtype=float)
    return [m1, m2, m3]


def mps_to_maps(mats: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Turn per-party MPS matrices ``M[a][x, y]`` into maps ``A[a, x*cols + y]``."""
    return [np.asarray(m).reshape(m.shape[0], -1) for m in mats]


def lambda_restriction_maps() -> Dict[int, np.ndarray]:
    return dict(enumerate(mps_to_maps(lambda_restriction_223())))


def lambda_bond3_maps() -> Dict[int, np.ndarray]:
    """A bond-3 restriction MaMu(3,3,3) -> lambda.

    ``A_i = |i><i|``, ``B_j[b, c] = lambda[b, j, c]``, ``C_k = |k><(1,1,1)|``:
    the first party copies its bond, the second reads lambda off its bond pair
    and the third projects its incoming bond on the uniform vector.
    """
    lam = lambda_tensor().data.real
    A = np.zeros((3, 3, 3))
    for i in range(3):
        A[i, i, i] = 1.0  # A_i[x, y] = delta_{x i} delta_{x y}
    B = np.transpose(lam, (1, 0, 2))
    C = np.zeros((3, 3, 3))
    for k in range(3):
        C[k, k, :] = 1.0
    return dict(enumerate(mps_to_maps([A, B, C])))


def lambda_degeneration_222(correction_party: int = 2) -> LocalMapFamily:
    """Bond-2 degeneration of MaMu(2,2,2) to lambda with ``d = 2``, ``e = 2``.

    Every party uses ``M0 = eps/2 X``, ``M1 = eps [[0,-1],[1,0]]``,
    ``M2 = Z``; the party ``correction_party`` adds ``eps**2 / 2`` times the
    identity to ``M2``. The ``eps**4`` residual carries ``|2>`` on that party.
    """
    X = np.array([[0, 1], [1, 0]], dtype=float)
    Y = np.array([[0, -1], [1, 0]], dtype=float)
    Z = np.diag([1.0, -1.0])
    fam = {}
    for j in range(3):
        t1 = np.zeros((3, 4))
        t1[0] = 0.5 * X.ravel()
        t1[1] = Y.ravel()
        t0 = np.zeros((3, 4))
        t0[2] = Z.ravel()
        terms = {0: t0, 1: t1}
        if j == correction_party:
            t2 = np.zeros((3, 4))
            t2[2] = 0.5 * np.eye(2).ravel()
            terms[2] = t2
        fam[j] = MatrixPoly(terms, (3, 4))
    return LocalMapFamily(fam, 2, 2)


def lambda_residual(correction_party: int = 2) -> DenseTensor:
    """``(1/4|00> - |11>)`` on the other two parties, ``|2>`` on ``correction_party``."""
    data = np.zeros((3, 3, 3))
    others = [p for p in range(3) if p != correction_party]
    for (a, b), c in {(0, 0): 0.25, (1, 1): -1.0}.items():
        idx = [0, 0, 0]
        idx[others[0]], idx[others[1]], idx[correction_party] = a, b, 2
        data[tuple(idx)] = c
    return DenseTensor.from_array(data, [0, 1, 2])


def rvb_projector() -> np.ndarray:
    """Vertex map from two qutrit slots to a spin-1/2: ``|i2>, |2i> -> |i>`` for ``i in {0, 1}``."""
    P = np.zeros((2, 9))
    for i in range(2):
        P[i, 3 * i + 2] = 1.0
        P[i, 6 + i] = 1.0
    return P


def rvb_border_family(rows: int, cols: int, project: bool = True):
    """Border PEPS of bond 2 for the kagome RVB (or bare lambda) patch.

    Returns ``(structure, scaled family, target)`` where ``structure`` carries
    MaMu(2,2,2) on every triangle, the family applies the lifted
    lambda degeneration (then the vertex projector when ``project``) and
    ``target`` is the dense state it reconstructs.
    """
    st = kagome_structure(rows, cols, PlaquetteSpec.mamu(2, 2, 2))
    fam = lift_to_lattice(lambda_degeneration_222(), st)
    target = kagome_structure(rows, cols, PlaquetteSpec.lam()).tensor()
    b_maps = None
    if project:
        P = rvb_projector()
        b_maps = {v: P for v in st.graph.vertices if st.vertex_dims()[v] == 4 ** 2}
        target = apply_local_maps(target, {v: P for v in b_maps})
    return st, compose_with_restriction(fam, b_maps), target


# ---------------------------------------------------------------------------
# diagonal MaMu -> GHZ degenerations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionSet:
    """Index tuples solving the linear system inside the box.

    ``solutions`` use the stored index base (``base``); ``zero_based`` shifts
    them to ``0..k-1``.
    """

    solutions: Tuple[Tuple[int, ...], ...]
    base: int = 0
    inhomogeneity: tuple = ()
    zero_based_inhomogeneity: tuple = ()

    @property
    def ghz_level(self) -> int:
        return len(self.solutions)

    @property
    def zero_based(self) -> List[Tuple[int, ...]]:
        return [tuple(i - self.base for i in s) for s in self.solutions]

    def unique_after_fixing_pairs(self) -> bool:
        """Each cyclically adjacent pair ``(i_{l-1}, i_l)`` occurs in at most one solution."""
        if not self.solutions:
            return True
        m = len(self.solutions[0])
        for l in range(m):
            pairs = [(s[l - 1], s[l]) for s in self.solutions]
            if len(set(pairs)) != len(pairs):
                return False
        return True


def _vertex_map_from_exponents(exps: np.ndarray) -> MatrixPoly:
    return MatrixPoly.diagonal_monomials([int(x) for x in exps.ravel()])


def diag_exponent_m3(i: int, j: int, g: int) -> int:
    return (i - g) ** 2 + 2 * i * j


def ghz_support_tensor(solutions_zero_based: Sequence[Tuple[int, ...]], dims: Sequence[int]) -> DenseTensor:
    """Grouped MaMu-shaped tensor with unit entries on the given bond assignments."""
    m = len(dims)
    data = np.zeros([dims[l - 1] * dims[l] for l in range(m)])
    for s in solutions_zero_based:
        data[tuple(s[l - 1] * dims[l] + s[l] for l in range(m))] = 1.0
    return DenseTensor.from_array(data, list(range(m)))


def count_sum_solutions(dims: Sequence[int], g: int, base: int = 1) -> List[Tuple[int, ...]]:
    ranges = [range(base, base + k) for k in dims]
    return [s for s in itertools.product(*ranges) if sum(s) == g]


def optimal_sum_target(dims: Sequence[int], base: int = 1) -> int:
    """Smallest ``g`` maximizing the number of box points with ``sum == g``."""
    lo, hi = base * len(dims), sum(base + k - 1 for k in dims)
    counts = {g: len(count_sum_solutions(dims, g, base)) for g in range(lo, hi + 1)}
    best = max(counts.values())
    return min(g for g, c in counts.items() if c == best)


def diag_mamu_to_ghz(k1: int, k2: int, k3: int, g: Optional[int] = None,
                     base: int = 1) -> Tuple[LocalMapFamily, SolutionSet]:
    """Diagonal degeneration of MaMu(k1,k2,k3) to a GHZ state.

    Bond ``l`` carries index ``i_l`` taking values ``base .. base+k_l-1``.
    Party ``l`` holds ``(i_{l-1}, i_l) = (i, j)`` and multiplies it by
    ``eps**((i - g)**2 + 2 i j)``. The exponents sum to
    ``(i_0 + i_1 + i_2 - g)**2 + 2 g**2``, so the lowest order ``2 g**2`` is
    supported on the solutions of ``i_0 + i_1 + i_2 = g``. ``g=None`` picks the
    smallest value maximizing the solution count.
    """
    dims = (k1, k2, k3)
    if min(dims) < 1:
        raise ValueError("bond dimensions must be >= 1")
    if g is None:
        g = optimal_sum_target(dims, base)
    sols = count_sum_solutions(dims, g, base)
    if not sols:
        raise ValueError(f"no solutions of i_0 + i_1 + i_2 = {g} in the box")
    maps = {}
    for l in range(3):
        a, b = dims[l - 1], dims[l]
        exps = np.array([[diag_exponent_m3(i + base, j + base, g) for j in range(b)] for i in range(a)])
        maps[l] = _vertex_map_from_exponents(exps)
    fam = LocalMapFamily(maps, 2 * g * g, None)
    sol = SolutionSet(tuple(sols), base, (g,), (g - 3 * base,))
    return fam, sol


def cycle_orthogonal_vectors(m: int) -> List[Tuple[int, ...]]:
    """Integer vectors ``c_1 .. c_m`` in ``Z^(m-2)`` orthogonal unless cyclically adjacent.

    ``c_1 = (1, ..., 1)``, ``c_2 = -e_1``, ``c_j = e_{j-2} - e_{j-1}`` for
    ``3 <= j <= m-1`` and ``c_m = e_{m-2}``.
    """
    if m < 4:
        raise ValueError("cycle vectors are constructed for m >= 4")
    n = m - 2
    e = lambda i: [int(t == i - 1) for t in range(n)]  # noqa: E731
    vecs = [[1] * n, [-x for x in e(1)]]
    for j in range(3, m):
        vecs.append([a - b for a, b in zip(e(j - 2), e(j - 1))])
    vecs.append(e(n))
    return [tuple(v) for v in vecs]


def _rank(rows: Sequence[Sequence[int]]) -> int:
    M = [[Fraction(x) for x in r] for r in rows]
    rank, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / M[rank][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def check_cycle_vectors(vectors: Sequence[Sequence[int]]) -> Tuple[bool, bool]:
    """``(cyclic orthogonality holds, independence after removing any adjacent pair)``."""
    m = len(vectors)
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))  # noqa: E731
    ortho = all(dot(vectors[a], vectors[b]) == 0
                for a in range(m) for b in range(m)
                if a != b and (a - b) % m not in (1, m - 1))
    indep = True
    for j in range(m):
        rest = [vectors[l] for l in range(m) if l not in (j, (j + 1) % m)]
        if _rank(rest) != len(rest):
            indep = False
    return ortho, indep


def cycle_exponents(vectors: Sequence[Sequence[int]], g: Sequence[int], dims: Sequence[int]) -> List[np.ndarray]:
    """Per-party exponent tables whose sum is ``||sum_l c_l i_l - g||^2`` plus a constant.

    Party ``l`` holds ``(i_{l-1}, i_l)`` (0-based) and gets
    ``|c_{l-1}|^2 i^2 - 2<g, c_{l-1}> i + 2 <c_{l-1}, c_l> i j``, shifted so its
    minimum over the box is zero.
    """
    m = len(vectors)
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))  # noqa: E731
    tables = []
    for l in range(m):
        cp, c = vectors[l - 1], vectors[l]
        a, b = dims[l - 1], dims[l]
        t = np.array([[dot(cp, cp) * i * i - 2 * dot(g, cp) * i + 2 * dot(cp, c) * i * j
                       for j in range(b)] for i in range(a)], dtype=np.int64)
        tables.append(t - t.min())
    return tables


def cycle_solutions(vectors, g, dims, method: str = "auto") -> List[Tuple[int, ...]]:
    """0-based index tuples in the box with ``sum_l c_l i_l = g``."""
    m = len(vectors)
    A = [[vectors[l][r] for l in range(m)] for r in range(len(g))]
    if method == "smith" or (method == "auto" and m == 4):
        return box_solutions(A, list(g), [0] * m, [k - 1 for k in dims])
    if prod(dims) > ENUMERATION_BUDGET:
        raise MemoryError(f"box has {prod(dims)} points, above the enumeration budget {ENUMERATION_BUDGET}")
    grids = np.indices(dims).reshape(m, -1)
    ok = np.ones(grids.shape[1], dtype=bool)
    for row, target in zip(A, g):
        ok &= (np.asarray(row) @ grids) == target
    return [tuple(int(x) for x in col) for col in grids[:, ok].T]


def diag_mamu_cycle(m: int, k, g: Optional[Sequence[int]] = None) -> Tuple[LocalMapFamily, SolutionSet]:
    """Diagonal degeneration of MaMu on an ``m``-cycle via cycle-orthogonal vectors.

    ``g=None`` scans all inhomogeneities reachable inside the box and keeps
    the first one with the most solutions.
    """
    dims = (k,) * m if isinstance(k, int) else tuple(k)
    vecs = cycle_orthogonal_vectors(m)
    if g is None:
        if prod(dims) > ENUMERATION_BUDGET:
            raise MemoryError("box too large for an exhaustive inhomogeneity scan")
        grids = np.indices(dims).reshape(m, -1)
        C = np.array(vecs).T
        vals = C @ grids
        uniq, counts = np.unique(vals.T, axis=0, return_counts=True)
        g = tuple(int(x) for x in uniq[int(np.argmax(counts))])
    g = tuple(int(x) for x in g)
    sols = cycle_solutions(vecs, g, dims)
    if not sols:
        raise ValueError(f"no solutions for inhomogeneity {g}")
    tables = cycle_exponents(vecs, g, dims)
    maps = {l: _vertex_map_from_exponents(tables[l]) for l in range(m)}
    d = min(sum(int(tables[l][s[l - 1], s[l]]) for l in range(m)) for s in sols)
    return LocalMapFamily(maps, d, None), SolutionSet(tuple(sols), 0, g, g)


def mamu4_to_ghz(k: int, level: Optional[int] = None) -> Tuple[LocalMapFamily, SolutionSet]:
    """MaMu on four parties with ``k`` levels per bond degenerating to a GHZ state.

    Uses the four cycle vectors ``(1,1), (-1,0), (1,-1), (0,1)`` with
    inhomogeneity ``(g, g)``, ``g = floor(k/2)`` (0-based indices). Solutions are
    found with the Smith normal form. ``level`` keeps only the first ``level``
    solutions, composing the degeneration with a projection on party 0.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    g = k // 2
    fam, sol = diag_mamu_cycle(4, k, (g, g))
    if level is not None:
        if not 1 <= level <= sol.ghz_level:
            raise ValueError(f"level {level} not in 1..{sol.ghz_level}")
        keep = sol.solutions[:level]
        mask = np.zeros(k * k)
        for s in keep:
            mask[s[3] * k + s[0]] = 1.0
        P = MatrixPoly.constant(np.diag(mask))
        maps = dict(fam.maps)
        maps[0] = P @ maps[0]
        fam = LocalMapFamily(maps, fam.approx_degree, None)
        sol = SolutionSet(tuple(keep), 0, sol.inhomogeneity, sol.zero_based_inhomogeneity)
    return fam, sol


def ghz_level_lower_bound(k: int) -> int:
    return ceil(k * k / 2)


def mamu4_resource_dim(D: int) -> int:
    """Smallest ``k`` with ``ceil(k^2 / 2) >= D``."""
    k = 1
    while ghz_level_lower_bound(k) < D:
        k += 1
    return k


# ---------------------------------------------------------------------------
# GHZ equivalence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GhzCheck:
    ok: bool
    support: int
    ranks: Tuple[int, ...]
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_ghz_equivalence(leading: DenseTensor, level: int, tol: float = 1e-10) -> GhzCheck:
    """Whether ``leading`` is a uniform superposition of ``level`` locally orthogonal product states.

    Checks that the support has ``level`` entries of equal modulus and that
    every single-party flattening has Schmidt rank ``level``.
    """
    data = leading.data
    scale = np.max(np.abs(data)) if data.size else 0.0
    if scale == 0:
        return GhzCheck(False, 0, (), "tensor is zero")
    support = np.argwhere(np.abs(data) > tol * scale)
    vals = np.abs(data[tuple(support.T)])
    ranks = tuple(schmidt_rank(leading, [i], tol) for i in leading.ids)
    problems = []
    if len(support) != level:
        problems.append(f"support size {len(support)} != level {level}")
    if np.max(vals) - np.min(vals) > tol * scale:
        problems.append("support amplitudes differ in modulus")
    for i, r in zip(leading.ids, ranks):
        if r != level:
            problems.append(f"party {i!r} has Schmidt rank {r} != {level}")
    return GhzCheck(not problems, len(support), ranks, "; ".join(problems))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZooEntry:
    name: str
    description: str
    source: DenseTensor
    family: LocalMapFamily
    target: DenseTensor
    expected: Tuple[int, Optional[int]]
    target_label: str = ""
    extra: dict = field(default_factory=dict)

    def certify(self, tol: float = 1e-10) -> DegenerationCertificate:
        cert = analyze_degeneration(self.source, self.family, self.target, tol)
        d, e = self.expected
        if cert.d != d or (e is not None and cert.e != e):
            raise ValueError(f"{self.name}: expected (d, e) = {self.expected}, got ({cert.d}, {cert.e})")
        return cert


def _w_entry(L: int = 4) -> ZooEntry:
    fam, s = w_border_mps(L)
    target = w_state(L).relabel({p: f"v{p}" for p in range(L)})
    return ZooEntry("w_border_mps", f"ring MaMu[{L}](2) -> W({L}), bond 2", s.tensor(), fam, target,
                    (1, L - 1), "w_state", {"L": L})


def _lambda_restr_entry() -> ZooEntry:
    return ZooEntry("lambda_restriction_223", "MaMu(3,2,2) -> lambda (restriction)",
                    mamu_tensor(LAMBDA_MAMU_DIMS), LocalMapFamily.constant(lambda_restriction_maps()),
                    lambda_tensor(), (0, 0), "lambda")


def _lambda_bond3_entry() -> ZooEntry:
    return ZooEntry("lambda_restriction_333", "MaMu(3,3,3) -> lambda (restriction)",
                    mamu_tensor((3, 3, 3)), LocalMapFamily.constant(lambda_bond3_maps()),
                    lambda_tensor(), (0, 0), "lambda")


def _lambda_degen_entry() -> ZooEntry:
    return ZooEntry("lambda_degeneration_222", "MaMu(2,2,2) degenerates to lambda",
                    mamu_tensor((2, 2, 2)), lambda_degeneration_222(), lambda_tensor(), (2, 2), "lambda")


def _diag_entry(dims, g) -> ZooEntry:
    fam, sol = diag_mamu_to_ghz(*dims, g=g)
    target = ghz_support_tensor(sol.zero_based, dims)
    name = "diag_mamu_to_ghz_" + "".join(map(str, dims))
    return ZooEntry(name, f"MaMu{dims} -> GHZ({sol.ghz_level}), g={sol.inhomogeneity[0]} (1-based)",
                    mamu_tensor(dims), fam, target, (fam.approx_degree, None), f"ghz({sol.ghz_level})",
                    {"level": sol.ghz_level, "g": sol.inhomogeneity[0]})


def _mamu4_entry(k: int = 3) -> ZooEntry:
    fam, sol = mamu4_to_ghz(k)
    dims = (k,) * 4
    return ZooEntry("mamu4_to_ghz", f"MaMu[4]({k}) -> GHZ[4]({sol.ghz_level})", mamu_tensor(dims), fam,
                    ghz_support_tensor(sol.zero_based, dims), (fam.approx_degree, None),
                    f"ghz({sol.ghz_level})", {"level": sol.ghz_level, "k": k})


ZOO: Dict[str, Callable[..., ZooEntry]] = {
    "w_border_mps": _w_entry,
    "lambda_restriction_223": _lambda_restr_entry,
    "lambda_restriction_333": _lambda_bond3_entry,
    "lambda_degeneration_222": _lambda_degen_entry,
    "diag_mamu_to_ghz_223": lambda: _diag_entry((2, 2, 3), 5),
    "diag_mamu_to_ghz_233": lambda: _diag_entry((2, 3, 3), 5),
    "diag_mamu_to_ghz_222": lambda: _diag_entry((2, 2, 2), None),
    "mamu4_to_ghz": _mamu4_entry,
}


def zoo_entry(name: str, **kwargs) -> ZooEntry:
    if name not in ZOO:
        raise KeyError(f"unknown construction {name!r}; available: {sorted(ZOO)}")
    return ZOO[name](**kwargs)
