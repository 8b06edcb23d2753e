"""Critical indices and regularity thresholds for the scattering theorems.

Every threshold below is either a closed-form expression or the positive
root of an explicit quadratic; roots are produced by the quadratic formula
and carry their residuals so callers can verify them independently.

Conventions: the critical index is ``s_c = 1 - 2/p`` in dimension two and
``s_c = 1/2 - 2/p`` in dimension one.  For two-term nonlinearities
``|u|^{p1} u + |u|^{p2} u`` the per-term indices are written ``s_c1 <= s_c2``
(p1 < p2); the algebraic two-term mode treats ``|u|^p u + |u|^{2k} u`` with
integer k and exposes the coupling exponent
``alpha = 4 s_c2 - 9(2 - p/k) / (2(p+2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class QuadraticRoot:
    """Positive root of ``a s^2 + b s + c = 0`` with its residual."""

    value: float
    a: float
    b: float
    c: float

    @property
    def residual(self) -> float:
        return abs(self.a * self.value**2 + self.b * self.value + self.c)


def positive_root(a: float, b: float, c: float) -> QuadraticRoot:
    """The larger real root via the numerically stable quadratic formula."""
    if a <= 0:
        raise ValueError("leading coefficient must be positive")
    disc = b * b - 4.0 * a * c
    if disc < 0:
        raise ValueError(f"quadratic {a} s^2 + {b} s + {c} has no real root")
    sq = math.sqrt(disc)
    if b <= 0:
        root = (-b + sq) / (2.0 * a)
    else:
        # avoid cancellation: larger root via c / (a * smaller)
        smaller = (-b - sq) / (2.0 * a)
        root = c / (a * smaller) if smaller != 0 else 0.0
    return QuadraticRoot(value=root, a=a, b=b, c=c)


def critical_index(p: float, d: int) -> float:
    """Scaling-invariant Sobolev index for ``f(u) = |u|^p u``."""
    if d == 2:
        return 1.0 - 2.0 / p
    if d == 1:
        return 0.5 - 2.0 / p
    raise ValueError(f"dimension must be 1 or 2, got {d}")


@dataclass(frozen=True)
class ThresholdReport:
    """Thresholds, applicability flags, and warnings for one exponent set."""

    d: int
    mode: str
    inputs: dict
    s_c: float | None = None
    s_c1: float | None = None
    s_c2: float | None = None
    alpha: float | None = None
    roots: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    applicability: dict = field(default_factory=dict)
    warnings: tuple = ()
    growth_exponent_expr: str | None = None

    def items(self) -> list[tuple[str, float]]:
        """Flat (name, value) rows, stable ordering, for report output."""
        out: list[tuple[str, float]] = []
        for name in ("s_c", "s_c1", "s_c2", "alpha"):
            v = getattr(self, name)
            if v is not None:
                out.append((name, v))
        for name in sorted(self.roots):
            out.append((name, self.roots[name].value))
        for name in sorted(self.thresholds):
            out.append((name, self.thresholds[name]))
        return out


def _warn_if(flag: bool, message: str, warnings: list[str]) -> bool:
    if not flag:
        warnings.append(message)
    return flag


def _single_2d(p: float) -> ThresholdReport:
    s_c = critical_index(p, 2)
    warnings: list[str] = []
    applicable_scatter = _warn_if(
        p >= 11.0 / 4.0, f"scattering threshold needs p >= 11/4, got p={p}", warnings
    )
    applicable_growth = _warn_if(p > 2, f"growth threshold needs p > 2, got p={p}", warnings)

    s1 = positive_root(1.0, 2.0 * s_c, s_c**2 - 4.0 * s_c)
    s0 = max((1.0 + s_c) / 2.0, p / (p + 1.0), s1.value)
    # growth quadratic: 3(s-s_c)^2 - 2(1+6 s_c)(1-s) = 0 expanded in s
    s1t = positive_root(3.0, 2.0 + 6.0 * s_c, 3.0 * s_c**2 - 12.0 * s_c - 2.0)
    s0t = max((1.0 + s_c) / 2.0, p / (p + 1.0), s1t.value)
    return ThresholdReport(
        d=2,
        mode="single",
        inputs={"p": p},
        s_c=s_c,
        roots={"s1": s1, "s1_tilde": s1t},
        thresholds={"s0": s0, "s0_tilde": s0t},
        applicability={"scattering_p_geq_11_4": applicable_scatter, "growth_p_gt_2": applicable_growth},
        warnings=tuple(warnings),
        growth_exponent_expr=(
            f"(1-s)/(3*(s-{s_c!r})^2 - 2*(1+6*{s_c!r})*(1-s)) + eps, any eps > 0"
        ),
    )


def _single_1d(p: float) -> ThresholdReport:
    s_c = critical_index(p, 1)
    warnings: list[str] = []
    applicable_scatter = _warn_if(
        p >= 17.0 / 3.0, f"1D scattering threshold needs p >= 17/3, got p={p}", warnings
    )
    applicable_growth = _warn_if(p >= 4, f"1D growth threshold needs p >= 4, got p={p}", warnings)

    s1 = positive_root(1.0, 5.0 * s_c, s_c**2 - 7.0 * s_c)
    s0 = max((1.0 + s_c) / 2.0, p / (2.0 * (p + 1.0)), s1.value)
    # growth quadratic: 3(s-s_c)^2 - 2(1+9 s_c)(1-s) = 0 expanded in s
    s1t = positive_root(3.0, 2.0 + 12.0 * s_c, 3.0 * s_c**2 - 18.0 * s_c - 2.0)
    s0t = max((1.0 + s_c) / 2.0, p / (2.0 * (p + 1.0)), s1t.value)
    return ThresholdReport(
        d=1,
        mode="single",
        inputs={"p": p},
        s_c=s_c,
        roots={"s1": s1, "s1_tilde": s1t},
        thresholds={"s0": s0, "s0_tilde": s0t},
        applicability={"scattering_p_geq_17_3": applicable_scatter, "growth_p_geq_4": applicable_growth},
        warnings=tuple(warnings),
        growth_exponent_expr=(
            f"(1-s)/(3*(s-{s_c!r})^2 - 2*(1+9*{s_c!r})*(1-s)) + eps, any eps > 0"
        ),
    )


def _algebraic_pair_2d(p: float, k: int) -> ThresholdReport:
    if not (isinstance(k, int) and k > 1):
        raise ValueError(f"k must be an integer > 1, got {k}")
    s_c1 = 1.0 - 2.0 / p
    s_c2 = 1.0 - 1.0 / k
    warnings: list[str] = []
    flag_2k = _warn_if(2 * k > p, f"needs 2k > p, got p={p}, k={k}", warnings)
    flag_p = _warn_if(p >= 11.0 / 4.0, f"needs p >= 11/4, got p={p}", warnings)

    alpha = 4.0 * s_c2 - 9.0 * (2.0 - p / k) / (2.0 * (p + 2.0))
    s3 = positive_root(1.0, -(s_c1 + s_c2 - alpha), -alpha)
    fifth_term = 5.0 * s_c2 / (4.0 * s_c2 + 1.0)
    common = max((1.0 + s_c1) / 2.0, 2.0 * k / (2.0 * k + 1.0), s3.value)
    s3t_full = max(common, fifth_term)
    s3t_reduced = common
    if s3t_full != s3t_reduced:
        warnings.append(
            "threshold variants differ: the max with and without "
            "5*s_c2/(4*s_c2+1) disagree; both reported"
        )
    return ThresholdReport(
        d=2,
        mode="algebraic_pair",
        inputs={"p": p, "k": k},
        s_c1=s_c1,
        s_c2=s_c2,
        alpha=alpha,
        roots={"s3": s3},
        thresholds={
            "s3_tilde": s3t_full,
            "s3_tilde_reduced": s3t_reduced,
            "fifth_term": fifth_term,
        },
        applicability={"pair_2k_gt_p": flag_2k, "pair_p_geq_11_4": flag_p},
        warnings=tuple(warnings),
    )


def _general_pair(p1: float, p2: float, d: int) -> ThresholdReport:
    if not p2 > p1:
        raise ValueError(f"need p2 > p1, got p1={p1}, p2={p2}")
    s_c1 = critical_index(p1, d)
    s_c2 = critical_index(p2, d)
    warnings: list[str] = []
    if d == 2:
        flag = _warn_if(p1 >= 11.0 / 4.0, f"needs p1 >= 11/4, got p1={p1}", warnings)
        s2 = positive_root(1.0, 2.0 * s_c2, s_c2**2 - 4.0 * s_c2)
        threshold = max((1.0 + s_c2) / 2.0, p2 / (p2 + 1.0), s2.value)
        flags = {"pair_p1_geq_11_4": flag}
    else:
        flag = _warn_if(p1 >= 17.0 / 3.0, f"needs p1 >= 17/3, got p1={p1}", warnings)
        s2 = positive_root(1.0, 5.0 * s_c2, s_c2**2 - 7.0 * s_c2)
        threshold = max((1.0 + s_c2) / 2.0, p2 / (2.0 * (p2 + 1.0)), s2.value)
        flags = {"pair_p1_geq_17_3": flag}
    return ThresholdReport(
        d=d,
        mode="general_pair",
        inputs={"p1": p1, "p2": p2},
        s_c1=s_c1,
        s_c2=s_c2,
        roots={"s2": s2},
        thresholds={"s_pair": threshold},
        applicability=flags,
        warnings=tuple(warnings),
    )


def thresholds(
    d: int = 2,
    p: float | None = None,
    k: int | None = None,
    p1: float | None = None,
    p2: float | None = None,
) -> ThresholdReport:
    """Compute every threshold for the given exponents.

    Modes: ``p`` alone -> single power; ``p`` with ``k`` -> algebraic pair
    ``|u|^p u + |u|^{2k} u`` (2D only); ``p1, p2`` -> general two-power
    nonlinearity.  Inapplicable parameter regimes are flagged and warned
    about, with roots still reported.
    """
    if d not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {d}")
    for name, value in (("p", p), ("p1", p1), ("p2", p2)):
        if value is not None and not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")
    if p is not None and k is not None:
        if d != 2:
            raise ValueError("the algebraic-pair thresholds are stated in 2D only")
        return _algebraic_pair_2d(p, k)
    if p1 is not None and p2 is not None:
        return _general_pair(p1, p2, d)
    if p is not None:
        return _single_2d(p) if d == 2 else _single_1d(p)
    raise ValueError("supply p, (p, k), or (p1, p2)")


def growth_exponent(s: float, p: float, d: int = 2) -> float:
    """Polynomial-growth exponent of the H^s norm, without the arbitrarily
    small additive epsilon; positive exactly above the growth threshold."""
    s_c = critical_index(p, d)
    weight = 6.0 if d == 2 else 9.0
    denom = 3.0 * (s - s_c) ** 2 - 2.0 * (1.0 + weight * s_c) * (1.0 - s)
    if denom <= 0:
        raise ValueError(f"s={s} is at or below the growth threshold (denominator {denom})")
    return (1.0 - s) / denom
