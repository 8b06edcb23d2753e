"""The frequency-cutoff smoothing operator and everything built on it.

The multiplier is radial, smooth, and nonincreasing:

    m(xi) = 1                     for |xi| <= N,
    m(xi) = (|xi|/N)^(s-1)        for |xi| >= 2N,

bridged on ``N < |xi| < 2N`` by ``m = rho^((s-1)*chi(rho))`` with
``rho = |xi|/N`` and ``chi`` the smooth step ``1 - exp(1 - 1/(1-(rho-1)^2))``
(the same mollifier family as the band-decomposition bump).  The operator
``I`` multiplies spectra by m: it is the exact identity below N and damps a
mode at ``|xi|`` by ``(|xi|/N)^(s-1)`` far above it.

Nonlinear fields ``|u|^p u`` needed as grid functions are evaluated on a
3/2-oversampled grid and truncated back to the original band.  The exponent
is not an even integer in general, so exact dealiasing is impossible; the
oversampling keeps the aliasing residue below diagnostic tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import (
    NlsModel,
    TimeSeries,
    energy,
    kinetic_energy,
    nonlinearity_values,
    potential_energy,
)
from .errors import DegenerateInputError
from .grid import (
    PHYSICAL,
    SPECTRAL,
    Field,
    GridSpec,
    band_multiplier,
    dyadic_ladder,
    freq_magnitude,
    gradient,
    lebesgue_norm,
    sobolev_norm,
    to_physical,
    to_spectral,
)
from .spacetime import AdmissiblePair, SpaceTimeAccumulator


@dataclass(frozen=True)
class IMultiplierSpec:
    """Cutoff frequency N, target regularity s, and bridge choice."""

    N: float
    s: float
    interpolant: str = "smooth_step"

    def __post_init__(self) -> None:
        if not self.N > 1:
            raise ValueError(f"cutoff must exceed 1, got {self.N}")
        if not 0 < self.s < 1:
            raise ValueError(f"target regularity must lie in (0,1), got {self.s}")
        if self.interpolant != "smooth_step":
            raise ValueError(f"unknown interpolant {self.interpolant!r}")


def i_multiplier(xi_mag: np.ndarray | float, spec: IMultiplierSpec) -> np.ndarray | float:
    """Multiplier value m(|xi|); vectorised over the input."""
    scalar = np.isscalar(xi_mag)
    rho = np.asarray(xi_mag, dtype=np.float64) / spec.N
    out = np.ones_like(rho)
    high = rho >= 2.0
    out[high] = rho[high] ** (spec.s - 1.0)
    mid = (rho > 1.0) & (rho < 2.0)
    if np.any(mid):
        t = rho[mid] - 1.0
        with np.errstate(divide="ignore", over="ignore"):
            chi = 1.0 - np.exp(1.0 - 1.0 / (1.0 - t * t))
        out[mid] = np.exp(chi * (spec.s - 1.0) * np.log(rho[mid]))
    return float(out) if scalar else out


def apply_I(f: Field, spec: IMultiplierSpec) -> Field:
    """Spectral multiplication by m; exact identity on modes with ``|xi| <= N``."""
    mult = i_multiplier(freq_magnitude(f.grid), spec)
    g = to_spectral(f)
    out = Field._wrap(f.grid, g.values * mult, SPECTRAL)
    return out if f.is_spectral() else to_physical(out)


def sandwich_ratios(f: Field, spec: IMultiplierSpec) -> tuple[float, float]:
    """Measured constants in ``||f||_{H^s} <~ ||If||_{H^1} <~ N^{1-s} ||f||_{H^s}``.

    Returns ``(r_low, r_high)`` with ``r_low = ||f||_{H^s} / ||If||_{H^1}``
    and ``r_high = ||If||_{H^1} / (N^{1-s} ||f||_{H^s})``; both are bounded
    by absolute constants uniformly in N.
    """
    hs = sobolev_norm(f, spec.s, "inhomogeneous")
    if hs == 0.0:
        raise DegenerateInputError("sandwich ratios are undefined for the zero field")
    h1 = sobolev_norm(apply_I(f, spec), 1.0, "inhomogeneous")
    return hs / h1, h1 / (spec.N ** (1.0 - spec.s) * hs)


def modified_energy(f: Field, model: NlsModel, spec: IMultiplierSpec) -> float:
    """``E(Iu)``: the Hamiltonian evaluated on the smoothed field."""
    return energy(apply_I(f, spec), model)


def modified_energy_parts(f: Field, model: NlsModel, spec: IMultiplierSpec) -> tuple[float, float]:
    """Kinetic and potential parts of ``E(Iu)`` separately.

    Only the kinetic part is manifestly monotone in N; callers that compare
    cutoffs should look at the parts, not just the sum.
    """
    g = apply_I(f, spec)
    return kinetic_energy(g), potential_energy(g, model)


# ---------------------------------------------------------------------------
# Anti-aliased nonlinear fields
# ---------------------------------------------------------------------------


def _oversampled_grid(grid: GridSpec) -> tuple[int, ...]:
    m = (3 * grid.n) // 2
    return (m,) * grid.d


def _pad_indices(n: int, m: int) -> np.ndarray:
    """Positions of the n-grid FFT modes inside the m-grid FFT layout."""
    k = np.fft.fftfreq(n, d=1.0 / n).astype(int)  # 0, 1, ..., -1 in FFT order
    return np.where(k >= 0, k, m + k)


def nonlinear_field(f: Field, model: NlsModel, oversample: bool = True) -> Field:
    """``f(u)`` as a band-limited grid function (spectral side).

    With ``oversample`` the pointwise nonlinearity is evaluated on the
    3/2-dense grid and the spectrum truncated back, i.e. the result is the
    projection of the oversampled product onto the original band.
    """
    grid = f.grid
    phys = to_physical(f)
    if not oversample:
        vals = nonlinearity_values(model, phys.values)
        return to_spectral(Field._wrap(grid, vals, PHYSICAL))
    m = (3 * grid.n) // 2
    idx = _pad_indices(grid.n, m)
    coeffs = to_spectral(f).values
    shape = (m,) * grid.d
    big = np.zeros(shape, dtype=np.complex128)
    if grid.d == 1:
        big[idx] = coeffs
    else:
        big[np.ix_(idx, idx)] = coeffs
    # ortho normalization: rescale so the dense samples take the same values
    ratio = (m / grid.n) ** (grid.d / 2.0)
    dense = np.fft.ifftn(big * ratio, norm="ortho")
    dense = nonlinearity_values(model, dense)
    big = np.fft.fftn(dense, norm="ortho") / ratio
    if grid.d == 1:
        coeffs_out = big[idx]
    else:
        coeffs_out = big[np.ix_(idx, idx)]
    return Field._wrap(grid, np.ascontiguousarray(coeffs_out), SPECTRAL)


def commutator_field(u: Field, model: NlsModel, spec: IMultiplierSpec) -> Field:
    """``I(f(u)) - f(Iu)`` as a physical-side field (anti-aliased)."""
    i_fu = apply_I(nonlinear_field(u, model), spec)
    f_iu = nonlinear_field(apply_I(u, spec), model)
    return Field._wrap(u.grid, to_physical(i_fu).values - to_physical(f_iu).values, PHYSICAL)


def commutator_norm(u: Field, model: NlsModel, spec: IMultiplierSpec, r: float = 2.0) -> float:
    """``||I(f(u)) - f(Iu)||_{L^r}``; decays like a negative power of N on fixed data."""
    return lebesgue_norm(commutator_field(u, model, spec), r)


# ---------------------------------------------------------------------------
# Energy increment, two algebraically equivalent forms
# ---------------------------------------------------------------------------


def energy_increment_direct(u: Field, model: NlsModel, spec: IMultiplierSpec) -> float:
    """Instantaneous d/dt of the modified energy, direct pairing form.

    Computes ``dIu/dt = i (Lap Iu - I f(u))`` from the equation and returns
    ``Re  integral  conj(dIu/dt) [ f(Iu) - I f(u) ] dx``.
    """
    grid = u.grid
    iu = apply_I(to_spectral(u), spec)
    i_fu = apply_I(nonlinear_field(u, model), spec)
    lap_iu = Field._wrap(grid, -(freq_magnitude(grid) ** 2) * iu.values, SPECTRAL)
    dt_iu = to_physical(Field._wrap(grid, 1j * (lap_iu.values - i_fu.values), SPECTRAL))
    bracket = to_physical(nonlinear_field(apply_I(u, spec), model)).values - to_physical(i_fu).values
    integrand = np.real(np.conj(dt_iu.values) * bracket)
    return float(integrand.sum() * grid.cell_volume)


def energy_increment_ibp(u: Field, model: NlsModel, spec: IMultiplierSpec) -> float:
    """Same quantity after integrating the Laplacian term by parts:

    ``- Im int conj(grad Iu) . grad[f(Iu) - I f(u)]
      - Im int conj(I f(u)) [f(Iu) - I f(u)]``.
    """
    grid = u.grid
    iu = apply_I(to_spectral(u), spec)
    i_fu = apply_I(nonlinear_field(u, model), spec)
    f_iu = nonlinear_field(apply_I(u, spec), model)
    bracket = Field._wrap(grid, f_iu.values - i_fu.values, SPECTRAL)

    grad_iu = gradient(iu)
    grad_bracket = gradient(bracket)
    term1 = 0.0
    for giu, gb in zip(grad_iu, grad_bracket):
        term1 += float(np.imag(np.conj(to_physical(giu).values) * to_physical(gb).values).sum())
    term2 = float(
        np.imag(np.conj(to_physical(i_fu).values) * to_physical(bracket).values).sum()
    )
    return -(term1 + term2) * grid.cell_volume


# ---------------------------------------------------------------------------
# The space-time norm built on smoothed band projections
# ---------------------------------------------------------------------------

_DEFAULT_PAIRS = ((math.inf, 2), (8, Fraction(8, 3)), (4, 4), (3, 6))


@dataclass(frozen=True)
class ZiNormSpec:
    """Admissible pairs for the supremum plus the dyadic band ceiling."""

    pairs: tuple = _DEFAULT_PAIRS
    ceiling: float | None = None

    def __post_init__(self) -> None:
        parsed = tuple(
            p if isinstance(p, AdmissiblePair) else AdmissiblePair(p[0], p[1], d=2)
            for p in self.pairs
        )
        if not parsed:
            raise ValueError("pair set must be nonempty")
        if not any(math.isinf(float(p.q)) and p.r == 2 for p in parsed):
            raise ValueError("pair set must include (inf, 2)")
        object.__setattr__(self, "pairs", parsed)


def zi_norm(series: TimeSeries, spec: IMultiplierSpec, zspec: ZiNormSpec | None = None) -> float:
    """Sup over pairs of the square sum over dyadic bands of space-time norms.

    For each admissible pair (q, r) and each band, accumulates
    ``||grad P_band I u(t)||_{L^r_x}`` in time by left-endpoint quadrature
    (running max for q = inf), then takes the l^2 norm over bands and the
    sup over the pair set.  Nondecreasing as the interval grows.
    """
    if zspec is None:
        zspec = ZiNormSpec()
    if len(series) == 0:
        raise DegenerateInputError("empty series")
    grid = series.fields[0].grid
    bands = dyadic_ladder(grid, zspec.ceiling)

    accs = {
        (i, j): SpaceTimeAccumulator(pair)
        for i, pair in enumerate(zspec.pairs)
        for j in range(len(bands))
    }
    band_mults = [band_multiplier(grid, band) for band in bands]
    times = series.times
    for k, (t, f) in enumerate(zip(times, series.fields)):
        dt = (times[k + 1] - t) if k + 1 < len(times) else 0.0
        iu = apply_I(to_spectral(f), spec)
        grad_iu = gradient(iu)
        for j, mult in enumerate(band_mults):
            comps = [
                to_physical(Field._wrap(grid, g.values * mult, SPECTRAL)).values
                for g in grad_iu
            ]
            mag = np.sqrt(sum(np.abs(c) ** 2 for c in comps))
            piece = Field._wrap(grid, mag, PHYSICAL)
            for i in range(len(zspec.pairs)):
                accs[(i, j)].add(piece, dt)

    best = 0.0
    for i in range(len(zspec.pairs)):
        total = 0.0
        for j in range(len(bands)):
            total += accs[(i, j)].finalize() ** 2
        best = max(best, math.sqrt(total))
    return best
