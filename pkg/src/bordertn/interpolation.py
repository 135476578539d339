"""Exact values at ``eps = 0`` from sampled evaluations of polynomial families.

A degeneration family ``T(eps)`` is a polynomial of known degree ``n``; its
value at zero is ``sum_i gamma_i T(eps_i)`` for any ``n + 1`` distinct nonzero
points, with ``gamma_i`` the Lagrange basis polynomials evaluated at zero.
Expectation values ``<T(eps)|O|T(eps)>`` are polynomials of degree ``2n`` for
real ``eps``; for complex points the bra is evaluated at the conjugate point
so that the sampled quantity stays analytic.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Sequence, Union

import numpy as np

from .conversions import ScaledFamily
from .tensor import DenseTensor, apply_local_maps, contract

PARTITION_TOL = 1e-12
HOLDOUT_TOL = 1e-8
CONDITION_WARN = 1e6
DEFAULT_COMPLEX_RADIUS = 0.7
DEFAULT_REAL_RADIUS = 0.7


def lagrange_weights(points: Sequence[complex]) -> np.ndarray:
    """``gamma_i = prod_{j != i} x_j / (x_j - x_i)``, the Lagrange basis at zero."""
    x = np.asarray(points, dtype=complex)
    n = len(x)
    if n == 0:
        raise ValueError("need at least one point")
    for i in range(n):
        for j in range(i + 1, n):
            if x[i] == x[j]:
                raise ValueError(f"duplicate interpolation point {x[i]}")
    w = np.ones(n, dtype=complex)
    for i in range(n):
        for j in range(n):
            if j != i:
                w[i] *= x[j] / (x[j] - x[i])
    if abs(w.sum() - 1) > PARTITION_TOL * max(1.0, np.abs(w).max()):
        raise ValueError(f"Lagrange weights fail the partition of unity: |sum - 1| = {abs(w.sum() - 1):.2e}")
    return w


def least_squares_weights(points: Sequence[complex], degree: int) -> np.ndarray:
    """Weights producing the value at zero of the least-squares polynomial fit."""
    x = np.asarray(points, dtype=complex)
    scale = np.abs(x).max()
    V = np.vander(x / scale, degree + 1, increasing=True)
    return np.linalg.pinv(V)[0]


def real_points(count: int, radius: float = DEFAULT_REAL_RADIUS) -> np.ndarray:
    """Chebyshev nodes on ``[-radius, radius]`` avoiding zero."""
    m = count if count % 2 == 0 else count + 1
    k = np.arange(m)
    nodes = radius * np.cos((2 * k + 1) * np.pi / (2 * m))
    return nodes[:count]


def complex_points(count: int, radius: float = DEFAULT_COMPLEX_RADIUS) -> np.ndarray:
    """``radius * exp(2 pi i k / count)``; Lagrange weights are exactly ``1/count``."""
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


@dataclass(frozen=True)
class InterpolationPlan:
    points: np.ndarray
    weights: np.ndarray
    degree: int
    mode: str = "real"
    radius: float = DEFAULT_REAL_RADIUS

    def __post_init__(self):
        if len(self.points) < self.degree + 1:
            raise ValueError(f"degree {self.degree} needs {self.degree + 1} points, got {len(self.points)}")
        if np.any(self.points == 0):
            raise ValueError("interpolation points must be nonzero")

    @property
    def least_squares(self) -> bool:
        return len(self.points) > self.degree + 1

    @property
    def condition(self) -> float:
        """Lebesgue-type constant ``sum |gamma_i|`` (scale invariant)."""
        return float(np.abs(self.weights).sum())

    @property
    def max_weight(self) -> float:
        return float(np.abs(self.weights).max())

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "mode": self.mode,
            "radius": self.radius,
            "points": [[float(z.real), float(z.imag)] for z in np.asarray(self.points, dtype=complex)],
            "weights": [[float(z.real), float(z.imag)] for z in np.asarray(self.weights, dtype=complex)],
            "max_weight": self.max_weight,
        }


def make_plan(degree: int, mode: str = "real", radius: Optional[float] = None,
              count: Optional[int] = None) -> InterpolationPlan:
    """Sample points and weights for a polynomial of the given degree.

    ``count`` larger than ``degree + 1`` gives an oversampled least-squares
    plan.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    count = degree + 1 if count is None else count
    if mode == "real":
        r = DEFAULT_REAL_RADIUS if radius is None else radius
        pts = real_points(count, r).astype(float)
    elif mode == "complex":
        r = DEFAULT_COMPLEX_RADIUS if radius is None else radius
        pts = complex_points(count, r)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    w = lagrange_weights(pts) if count == degree + 1 else least_squares_weights(pts, degree)
    if mode == "real":
        w = w.real
    if np.abs(w).max() > CONDITION_WARN:
        warnings.warn(f"interpolation weights reach {np.abs(w).max():.2e}")
    return InterpolationPlan(np.asarray(pts), np.asarray(w), degree, mode, float(r))


def plan_from_points(points: Sequence[complex], degree: Optional[int] = None) -> InterpolationPlan:
    pts = np.asarray(points)
    degree = len(pts) - 1 if degree is None else degree
    w = lagrange_weights(pts) if len(pts) == degree + 1 else least_squares_weights(pts, degree)
    mode = "complex" if np.iscomplexobj(pts) and np.any(pts.imag) else "real"
    if mode == "real":
        pts, w = pts.real, w.real
    return InterpolationPlan(pts, w, degree, mode, float(np.abs(pts).max()))


def barycentric_value(points: Sequence[complex], values: Sequence, x: complex):
    """Value at ``x`` of the polynomial interpolating ``values`` at ``points``."""
    pts = np.asarray(points, dtype=complex)
    n = len(pts)
    basis = []
    for i in range(n):
        li = 1.0 + 0j
        for j in range(n):
            if j != i:
                li *= (x - pts[j]) / (pts[i] - pts[j])
        basis.append(complex(li))
    return weighted_sum(basis, values)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("BORDERTN_THREADS", "1")))
    except ValueError:
        return 1


def evaluate_all(fn: Callable, points: Sequence) -> list:
    """``[fn(p) for p in points]``, optionally threaded; order is preserved."""
    n = worker_count()
    if n <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, points))


def weighted_sum(weights, values):
    """Deterministic left-to-right reduction."""
    total = values[0] * complex(weights[0])
    for w, v in zip(weights[1:], values[1:]):
        total = total + v * complex(w)
    return total


def interpolate_at_zero(evaluate: Callable, plan: InterpolationPlan):
    """``(sum_i gamma_i f(eps_i), [f(eps_i)])``."""
    values = evaluate_all(evaluate, list(plan.points))
    return weighted_sum(list(plan.weights), values), values


def _rel_err(a, b) -> float:
    if isinstance(a, DenseTensor):
        diff = (a - b).norm()
        ref = max(a.norm(), b.norm())
    else:
        diff = abs(a - b)
        ref = max(abs(a), abs(b))
    return diff / ref if ref > 0 else diff


def holdout_point(plan: InterpolationPlan) -> complex:
    """A point not in the plan, inside its sampling radius."""
    if plan.mode == "complex":
        n = len(plan.points)
        return 0.9 * plan.radius * np.exp(1j * np.pi / n)
    return 0.61803398875 * plan.radius


def holdout_error(evaluate: Callable, plan: InterpolationPlan, values) -> float:
    """Relative gap between the fitted polynomial and a direct evaluation at an unused point."""
    if plan.least_squares:
        return 0.0
    x = holdout_point(plan)
    direct = evaluate(x)
    return _rel_err(barycentric_value(plan.points, values, x), direct)


def tune_radius(evaluate: Callable, degree: int, mode: str = "real",
                radii: Sequence[float] = (0.25, 0.5, 0.7, 1.0, 1.5)) -> float:
    """Radius minimizing the rounding amplification ``sum |gamma_i f_i| / |sum gamma_i f_i|``."""
    best, best_r = np.inf, radii[0]
    for r in radii:
        plan = make_plan(degree, mode, r)
        value, values = interpolate_at_zero(evaluate, plan)
        mag = lambda v: v.norm() if isinstance(v, DenseTensor) else abs(v)  # noqa: E731
        amp = sum(abs(w) * mag(v) for w, v in zip(plan.weights, values)) / max(mag(value), 1e-300)
        if amp < best:
            best, best_r = amp, r
    return best_r


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reconstruction:
    state: DenseTensor
    summands: List[DenseTensor]
    plan: InterpolationPlan
    holdout_error: float

    def summand_maps(self, family: ScaledFamily, i: int) -> dict:
        """Constant per-vertex maps whose action on the source gives summand ``i``."""
        eps = self.plan.points[i]
        maps = family.evaluate_maps(eps)
        first = next(iter(maps))
        maps[first] = maps[first] * (self.plan.weights[i] * eps ** (-family.d))
        return maps


class DegreeError(ValueError):
    pass


def reconstruct_state(source: DenseTensor, family: ScaledFamily, plan: Optional[InterpolationPlan] = None,
                      mode: str = "real", radius: Optional[float] = None,
                      holdout_tol: float = HOLDOUT_TOL) -> Reconstruction:
    """``T = sum_i W_i`` with ``W_i = gamma_i T(eps_i)``, checked at a holdout point."""
    plan = make_plan(family.degree, mode, radius) if plan is None else plan
    evaluate = lambda eps: family.apply(source, eps)  # noqa: E731
    state, values = interpolate_at_zero(evaluate, plan)
    err = holdout_error(evaluate, plan, values)
    if err > holdout_tol:
        raise DegreeError(f"holdout mismatch {err:.2e}: the declared degree {plan.degree} is too low")
    summands = [v * complex(w) for v, w in zip(values, plan.weights)]
    return Reconstruction(state, summands, plan, err)


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

Observable = Union[None, Mapping, DenseTensor]


def apply_observable(O: Observable, t: DenseTensor) -> DenseTensor:
    """Act with ``O`` on ``t``.

    ``O`` is ``None`` (identity), a mapping ``leg -> matrix`` (product of
    single-site operators) or a DenseTensor with legs ``("out", leg)`` and
    ``("in", leg)``.
    """
    if O is None:
        return t
    if isinstance(O, Mapping):
        return apply_local_maps(t, O)
    ins = [i for i in O.ids if isinstance(i, tuple) and i[0] == "in"]
    out = contract(O, t, [(i, i[1]) for i in ins])
    out = out.relabel({("out", i[1]): i[1] for i in ins})
    return out.transpose(t.ids)


def product_operator(ops: Mapping, legs) -> DenseTensor:
    """Dense operator form of a product observable, legs ``("out", v)..., ("in", v)...``."""
    t = DenseTensor.scalar(1.0)
    for leg in legs:
        m = np.asarray(ops.get(leg.id, np.eye(leg.dim)), dtype=complex)
        t = contract(t, DenseTensor.from_array(m, [("out", leg.id), ("in", leg.id)]))
    order = [("out", leg.id) for leg in legs] + [("in", leg.id) for leg in legs]
    return t.transpose(order)


def dense_expectation(bra: DenseTensor, ket: DenseTensor, O: Observable = None) -> complex:
    """``<bra|O|ket>`` by direct contraction."""
    return complex(np.vdot(bra.data, bra._aligned(apply_observable(O, ket))))


@dataclass(frozen=True)
class ExpectationTask:
    """Everything needed to interpolate ``<T|O|T>``.

    ``contractor(bra, ket, O)`` computes the sandwich for one sample; it
    defaults to dense contraction.
    """

    source: DenseTensor
    family: ScaledFamily
    observable: Observable = None
    mode: str = "real"
    radius: Optional[float] = None
    points: Optional[int] = None
    contractor: Callable = field(default=dense_expectation, compare=False)

    @property
    def degree(self) -> int:
        return 2 * self.family.degree


@dataclass(frozen=True)
class ExpectationResult:
    value: complex
    plan: InterpolationPlan
    samples: list
    holdout_error: float

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "points": self.plan.to_dict()["points"],
            "weights": self.plan.to_dict()["weights"],
            "per_point_values": [[complex(v).real, complex(v).imag] for v in self.samples],
            "condition_estimate": self.plan.condition,
            "max_weight": self.plan.max_weight,
            "degree": self.plan.degree,
            "mode": self.plan.mode,
            "holdout_error": self.holdout_error,
        }


def _expectation(task: ExpectationTask, mode: str, plan: Optional[InterpolationPlan],
                 holdout_tol: float) -> ExpectationResult:
    fam, src, O = task.family, task.source, task.observable

    def sample(eps):
        ket = fam.apply(src, eps)
        bra = ket if np.isreal(eps) else fam.apply(src, np.conj(eps))
        return task.contractor(bra, ket, O)

    if plan is None:
        plan = make_plan(task.degree, mode, task.radius, task.points)
    if len(plan.points) < task.degree + 1:
        raise ValueError(f"expectation of degree {task.degree} needs {task.degree + 1} points")
    value, values = interpolate_at_zero(sample, plan)
    err = holdout_error(sample, plan, values)
    if err > holdout_tol:
        raise DegreeError(f"holdout mismatch {err:.2e}: the declared degree {plan.degree} is too low")
    return ExpectationResult(complex(value), plan, values, err)


def expectation_real(task: ExpectationTask, plan: Optional[InterpolationPlan] = None,
                     holdout_tol: float = HOLDOUT_TOL) -> ExpectationResult:
    """Interpolate ``<T(eps)|O|T(eps)>`` over real points (degree ``2 e F``)."""
    if plan is not None and np.any(np.asarray(plan.points).imag != 0):
        raise ValueError("real-mode expectation needs real points")
    return _expectation(task, "real", plan, holdout_tol)


def expectation_complex(task: ExpectationTask, plan: Optional[InterpolationPlan] = None,
                        holdout_tol: float = HOLDOUT_TOL) -> ExpectationResult:
    """Interpolate the analytic ``<T(conj eps)|O T(eps)>`` (default: roots of unity)."""
    return _expectation(task, "complex", plan, holdout_tol)
