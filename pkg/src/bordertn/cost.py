"""Closed-form cost models for boundary-MPS contraction.

Constants follow the usual conventions: ``C_mm * a * b * c`` for an ``a x b``
by ``b x c`` matrix product and ``C_svd * chi * a * b`` for a rank-``chi``
truncated SVD of an ``a x b`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class CostModel:
    chi: float
    d: int
    C_mm: float = 1.0
    C_svd: float = 1.0

    def __post_init__(self):
        if min(self.chi, self.d, self.C_mm, self.C_svd) <= 0:
            raise ValueError("cost model parameters must be positive")


def cost_square(chi: float, D1: float, D2: float, d: float, C_mm: float = 1.0, C_svd: float = 1.0) -> float:
    """Per-tensor bulk cost on the square lattice.

    ``(C_mm + C_svd) chi^3 D1^2 D2^2 + 2 C_mm chi^2 D1^3 D2^3 d`` with ``D1`` the
    bond along the boundary MPS and ``D2`` the bond crossing it.
    """
    return (C_mm + C_svd) * chi ** 3 * D1 ** 2 * D2 ** 2 + 2 * C_mm * chi ** 2 * D1 ** 3 * D2 ** 3 * d


def cost_square_boundary(chi: float, D1: float, D2: float, d: float, C_mm: float = 1.0,
                         C_svd: float = 1.0) -> float:
    """Cost of the first tensor of a row: ``C_svd chi^2 D1^2 D2^2 + C_mm chi D1^3 (D2^2 + D2) d``."""
    return C_svd * chi ** 2 * D1 ** 2 * D2 ** 2 + C_mm * chi * D1 ** 3 * (D2 ** 2 + D2) * d


def cost_kagome(chi: float, d: float, D_up: Sequence[float], D_down: Optional[Sequence[float]] = None,
                K_up: Optional[Sequence[float]] = None, K_down: Optional[Sequence[float]] = None,
                C_mm: float = 1.0, C_svd: float = 1.0) -> float:
    """Upper bound for one kagome tensor absorption, maximized over the three step types.

    ``D_*`` are the bonds ``(D1, D2, D3)`` of down triangles and ``K_*`` those
    of up triangles; ``*_up`` refers to the ket layer and ``*_down`` to the bra
    layer. Omitted arguments default to ``D_down = D_up``, ``K_up = D_up`` and
    ``K_down = K_up``.
    """
    Du = tuple(D_up)
    Dd = Du if D_down is None else tuple(D_down)
    Ku = Du if K_up is None else tuple(K_up)
    Kd = Ku if K_down is None else tuple(K_down)
    D1u, D2u, D3u = Du
    D1d, D2d, D3d = Dd
    K1u, K2u, K3u = Ku
    K1d, K2d, K3d = Kd
    svd = max(D1u * D1d * D2u * D2d, D3u * D3d * K2u * K2d, K1u * K1d * K3u * K3d)
    mm3 = max(K2u * K2d * K3u * K3d, D1u * D1d * K1u * K1d, D2u * D2d * D3u * D3d)
    mm2 = max(
        K2u * K2d * K3u * K3d * D1u * D2u + K2d * K3d * D1u * D1d * D2u * D2d,
        D1u * D1d * K1u * K1d * D3u * K2u + D1d * K1d * D3u * D3d * K2u * K2d,
        D2u * D2d * D3u * D3d * K1u * K3u + D2d * D3d * K1u * K1d * K3u * K3d,
    )
    return C_svd * chi ** 3 * svd + C_mm * chi ** 3 * mm3 + C_mm * chi ** 2 * d * mm2


def cost_kagome_collapsed(chi: float, D1: float, D2: float, d: float, C_mm: float = 1.0,
                          C_svd: float = 1.0) -> float:
    """``(C_svd + C_mm) chi^3 D1^2 D2^2 + 2 C_mm chi^2 D1^3 D2^3 d``, valid for ``D1 = D3 <= D2``."""
    return (C_svd + C_mm) * chi ** 3 * D1 ** 2 * D2 ** 2 + 2 * C_mm * chi ** 2 * D1 ** 3 * D2 ** 3 * d


def cost_exact_rvb(L: int, D: float, d: float, e: int = 2) -> dict:
    """Exact-contraction cost on a ``2(L+1) x 2(L+1)`` lattice, without and with degeneration sampling.

    ``exact = 2 (L+1) (D^(4L) - 1) / (D^4 - 1) D^10 d``; the degeneration
    variant multiplies by the ``2 e L + 1`` interpolation samples.
    """
    if L < 1 or D < 2:
        raise ValueError("need L >= 1 and D >= 2")
    geom = (D ** (4 * L) - 1) / (D ** 4 - 1)
    exact = 2 * (L + 1) * geom * D ** 10 * d
    return {"exact": exact, "degeneration": exact * (2 * e * L + 1), "samples": 2 * e * L + 1}


def rvb_cost_ratio(L: int, d: float = 2, e: int = 2, D_exact: float = 3, D_border: float = 2) -> float:
    """Exact cost at ``D_exact`` over the sampled cost at ``D_border``."""
    return cost_exact_rvb(L, D_exact, d, e)["exact"] / cost_exact_rvb(L, D_border, d, e)["degeneration"]
