"""Admissible pairs, space-time norm quadrature, and a-priori bound checks.

Time quadrature is left-endpoint Riemann throughout: it keeps accumulated
values nondecreasing under append and makes the greedy interval splitting
consistent with the accumulated norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dynamics import TimeSeries, free_propagate
from .errors import (
    DegenerateInputError,
    IndivisibleSampleError,
    RevivalContaminationError,
)
from .grid import Field, boundary_mass_fraction, lebesgue_norm, sobolev_norm, to_physical


def _as_exponent(value) -> Fraction | float:
    """Exact rational exponent; floats are snapped to small nearby rationals."""
    if isinstance(value, Fraction):
        return value
    if value == math.inf:
        return math.inf
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    raise TypeError(f"cannot interpret exponent {value!r}")


def _inv(e) -> Fraction:
    return Fraction(0) if e == math.inf else 1 / e


@dataclass(frozen=True)
class AdmissiblePair:
    """Exponent pair (q, r) satisfying the dispersive scaling relation.

    In 2D that relation is ``1/q + 1/r = 1/2`` with the endpoint
    ``(2, inf)`` excluded; in 1D it is ``2/q + 1/r = 1/2`` (no excluded
    endpoint: the relation itself forces q >= 4).
    """

    q: Fraction | float
    r: Fraction | float
    d: int = 2

    def __post_init__(self) -> None:
        q = _as_exponent(self.q)
        r = _as_exponent(self.r)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        if not is_admissible(q, r, self.d):
            raise ValueError(f"({self.q}, {self.r}) is not admissible in d={self.d}")

    @property
    def qf(self) -> float:
        return float(self.q) if self.q != math.inf else math.inf

    @property
    def rf(self) -> float:
        return float(self.r) if self.r != math.inf else math.inf


def is_admissible(q, r, d: int = 2) -> bool:
    """Exact decision of the scaling relation (rational arithmetic)."""
    if d not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {d}")
    q = _as_exponent(q)
    r = _as_exponent(r)
    for e in (q, r):
        if e != math.inf and e < 2:
            raise ValueError(f"exponents must be >= 2, got {e}")
    if d == 2:
        if q == 2 and r == math.inf:
            return False
        return _inv(q) + _inv(r) == Fraction(1, 2)
    return 2 * _inv(q) + _inv(r) == Fraction(1, 2)


@dataclass
class SpaceTimeAccumulator:
    """Running left-endpoint quadrature of an ``L^q_t L^r_x`` norm.

    For finite q the state is ``sum_j ||u(t_j)||_r^q dt_j`` and
    :meth:`finalize` returns its q-th root; for ``q = inf`` it is a running
    max.  The finalized value is nondecreasing under :meth:`add`.
    """

    pair: AdmissiblePair
    _state: float = 0.0
    _samples: int = 0

    def add(self, f: Field, dt: float) -> "SpaceTimeAccumulator":
        if dt < 0:
            raise ValueError(f"dt must be nonnegative, got {dt}")
        space = lebesgue_norm(to_physical(f), self.pair.rf)
        if math.isinf(self.pair.qf):
            self._state = max(self._state, space)
        else:
            self._state += space**self.pair.qf * dt
        self._samples += 1
        return self

    def finalize(self) -> float:
        if math.isinf(self.pair.qf):
            return self._state
        return self._state ** (1.0 / self.pair.qf)


def accumulate(acc: SpaceTimeAccumulator, f: Field, dt: float) -> SpaceTimeAccumulator:
    """Functional alias for :meth:`SpaceTimeAccumulator.add`."""
    return acc.add(f, dt)


# ---------------------------------------------------------------------------
# A-priori interaction bounds, one variant per (dimension, estimate)
# ---------------------------------------------------------------------------

# variant -> (dimension, time exponent q, space exponent r, rhs builder)
# rhs arguments: S = running max of the homogeneous H^{1/2} norm,
#                M = initial mass, T = interval length.
_MORAWETZ_VARIANTS = {
    "classical_L4L8": (2, 4.0, 8.0, lambda S, M, T: S**2 * M),
    "classical_L5": (2, 5.0, 5.0, lambda S, M, T: S**2 * M**1.5),
    "improved_L4": (2, 4.0, 4.0, lambda S, M, T: T ** (1.0 / 3.0) * (S**2 * M + M**2)),
    "d1_L8": (1, 8.0, 8.0, lambda S, M, T: S**2 * M**3),
    "d1_improved_L6": (1, 6.0, 6.0, lambda S, M, T: T ** (1.0 / 3.0) * (M**2 * S**2 + M**3)),
}


class MorawetzTracker:
    """Streaming evaluation of one interaction-bound ratio over a run.

    Feed snapshots in time order via :meth:`observe`; :meth:`ratio` returns
    LHS/RHS where the LHS is the accumulated space-time power
    ``sum ||u||_r^q dt`` and the RHS carries the variant's mass and
    H^{1/2} factors.  The bound asserts the ratio stays below an absolute
    constant.
    """

    def __init__(self, variant: str):
        if variant not in _MORAWETZ_VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; choose from {sorted(_MORAWETZ_VARIANTS)}")
        self.variant = variant
        self.d, self.q, self.r, self._rhs = _MORAWETZ_VARIANTS[variant]
        self._lhs = 0.0
        self._sup_hhalf = 0.0
        self._mass0: float | None = None
        self._t0: float | None = None
        self._t_last: float | None = None

    def observe(self, t: float, f: Field) -> None:
        if f.grid.d != self.d:
            raise ValueError(
                f"variant {self.variant} is a d={self.d} estimate, got a d={f.grid.d} field"
            )
        if self._t0 is None:
            self._t0 = t
            self._mass0 = lebesgue_norm(to_physical(f), 2.0) ** 2
        if self._t_last is not None:
            dt = t - self._t_last
            if dt < 0:
                raise ValueError("snapshots must arrive in time order")
            self._lhs += self._pending**self.q * dt
        self._pending = lebesgue_norm(to_physical(f), self.r)
        self._sup_hhalf = max(self._sup_hhalf, sobolev_norm(f, 0.5, "homogeneous"))
        self._t_last = t

    def ratio(self) -> float:
        if self._t0 is None or self._t_last is None or self._t_last == self._t0:
            raise DegenerateInputError("need at least two snapshots")
        T = self._t_last - self._t0
        rhs = self._rhs(self._sup_hhalf, self._mass0, T)
        if rhs == 0.0:
            raise DegenerateInputError("bound ratio undefined for a zero-field series")
        return self._lhs / rhs


def morawetz_ratio(series: TimeSeries, variant: str) -> float:
    """LHS/RHS of the selected interaction bound over a stored series."""
    tracker = MorawetzTracker(variant)
    for t, f in zip(series.times, series.fields):
        tracker.observe(t, f)
    return tracker.ratio()


def dispersive_ratio(f: Field, t: float) -> float:
    """``||exp(it Lap) f||_inf * t^{d/2} / ||f||_1``; bounded by a constant.

    Raises :class:`RevivalContaminationError` once the evolved field carries
    more than 1e-6 of its mass in the boundary region, i.e. when wrap-around
    invalidates the whole-space decay picture.
    """
    if not t > 0:
        raise ValueError(f"time must be positive, got {t}")
    phys = to_physical(f)
    evolved = to_physical(free_propagate(phys, t))
    if boundary_mass_fraction(evolved) > 1e-6:
        raise RevivalContaminationError(
            f"boundary mass fraction exceeds 1e-6 at t={t}"
        )
    l1 = lebesgue_norm(phys, 1.0)
    if l1 == 0.0:
        raise DegenerateInputError("dispersive ratio undefined for the zero field")
    return lebesgue_norm(evolved, math.inf) * t ** (f.grid.d / 2.0) / l1


def split_by_smallness(series: TimeSeries, norm_variant: str, eta: float) -> list[tuple[float, float]]:
    """Greedy partition of the series into intervals of space-time norm <= eta.

    ``norm_variant`` selects the space-time exponents (same table as the
    bound variants, e.g. ``classical_L5`` for the L^5 norm).  Walks samples
    left to right, closing an interval just before the sample whose
    contribution would push the accumulated norm above eta; the last
    interval may be slack.  The returned intervals tile ``[t0, t1]`` exactly.
    """
    if not eta > 0:
        raise ValueError(f"threshold must be positive, got {eta}")
    if len(series) < 2:
        raise DegenerateInputError("need at least two samples to split")
    if norm_variant not in _MORAWETZ_VARIANTS:
        raise ValueError(f"unknown norm variant {norm_variant!r}")
    _, q, r, _ = _MORAWETZ_VARIANTS[norm_variant]
    budget = eta**q
    times = series.times
    intervals: list[tuple[float, float]] = []
    start = times[0]
    acc = 0.0
    for j in range(len(times) - 1):
        dt = times[j + 1] - times[j]
        contrib = lebesgue_norm(to_physical(series.fields[j]), r) ** q * dt
        if contrib > budget * (1 + 1e-12):
            raise IndivisibleSampleError(
                f"sample at t={times[j]} alone exceeds the threshold"
            )
        if acc + contrib > budget * (1 + 1e-12):
            intervals.append((start, times[j]))
            start = times[j]
            acc = 0.0
        acc += contrib
    intervals.append((start, times[-1]))
    return intervals
