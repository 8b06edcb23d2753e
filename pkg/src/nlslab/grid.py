"""Periodic grids, complex fields, and frequency-side operators.

Conventions (fixed here, used everywhere else in the package)
-------------------------------------------------------------
* The box is ``[-L/2, L/2)^d`` sampled at ``n`` points per axis,
  ``x_j = -L/2 + j*h`` with spacing ``h = L/n``.
* The frequency lattice is ``xi_k = 2*pi*k/L`` for ``k in [-n/2, n/2)``,
  stored in FFT order.  It is symmetric about 0 except for the Nyquist
  mode ``k = -n/2``.
* Transforms are unitary on the sample vectors (``norm="ortho"``), so the
  plain sum of squares is preserved exactly.
* Physical integrals are Riemann sums with weight ``h^d``; consequently
  ``||f||_{L^2}^2 = h^d * sum |f_j|^2 = h^d * sum |fhat_k|^2`` and the same
  ``h^{d/2}`` weight converts spectral sums of squares into L^2 quantities.
* Fractional-derivative multipliers with nonzero order zero out the Nyquist
  modes to keep conjugate symmetry of real-valued diagnostics; order 0 is
  the exact identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateInputError, SideMismatchError

PHYSICAL = "physical"
SPECTRAL = "spectral"


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Periodic grid on ``[-L/2, L/2)^d`` with ``n`` points per axis."""

    d: int
    n: int
    L: float

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.d}")
        if not isinstance(self.n, int) or self.n < 8 or not _is_power_of_two(self.n):
            raise ValueError(f"points-per-axis must be a power of two >= 8, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"box side must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def cell_volume(self) -> float:
        return self.h**self.d


def make_grid(d: int, n: int, L: float) -> GridSpec:
    """Validated constructor for :class:`GridSpec`."""
    return GridSpec(d=int(d), n=int(n), L=float(L))


@lru_cache(maxsize=64)
def axis_coords(grid: GridSpec) -> np.ndarray:
    """1D physical coordinates ``x_j = -L/2 + j*h`` (shared across axes)."""
    x = -grid.L / 2 + grid.h * np.arange(grid.n)
    x.setflags(write=False)
    return x


@lru_cache(maxsize=64)
def axis_freqs(grid: GridSpec) -> np.ndarray:
    """1D frequency lattice ``2*pi*k/L`` in FFT order."""
    xi = 2 * np.pi * np.fft.fftfreq(grid.n, d=grid.h)
    xi.setflags(write=False)
    return xi


def _mesh(grid: GridSpec, axis_values: np.ndarray) -> list[np.ndarray]:
    if grid.d == 1:
        return [axis_values]
    return list(np.meshgrid(axis_values, axis_values, indexing="ij"))


@lru_cache(maxsize=64)
def coord_mesh(grid: GridSpec) -> tuple[np.ndarray, ...]:
    mesh = tuple(_mesh(grid, axis_coords(grid)))
    for m in mesh:
        m.setflags(write=False)
    return mesh


@lru_cache(maxsize=64)
def freq_mesh(grid: GridSpec) -> tuple[np.ndarray, ...]:
    mesh = tuple(_mesh(grid, axis_freqs(grid)))
    for m in mesh:
        m.setflags(write=False)
    return mesh


@lru_cache(maxsize=64)
def freq_magnitude(grid: GridSpec) -> np.ndarray:
    """Lattice of ``|xi|`` values, FFT order."""
    mesh = freq_mesh(grid)
    mag = np.sqrt(sum(m**2 for m in mesh))
    mag.setflags(write=False)
    return mag


@lru_cache(maxsize=64)
def nyquist_mask(grid: GridSpec) -> np.ndarray:
    """Boolean lattice marking modes with any axis index at the Nyquist row."""
    axis = np.zeros(grid.n, dtype=bool)
    axis[grid.n // 2] = True
    mask = _mesh(grid, axis)
    out = mask[0]
    for m in mask[1:]:
        out = out | m
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def max_frequency(grid: GridSpec) -> float:
    """Largest ``|xi|`` present on the lattice (attained at the Nyquist corner)."""
    return float(freq_magnitude(grid).max())


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples of u on a grid, tagged physical or spectral."""

    grid: GridSpec
    values: np.ndarray
    side: str

    def __post_init__(self) -> None:
        if self.side not in (PHYSICAL, SPECTRAL):
            raise ValueError(f"side must be {PHYSICAL!r} or {SPECTRAL!r}, got {self.side!r}")
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def _wrap(cls, grid: GridSpec, values: np.ndarray, side: str) -> "Field":
        """Construct from a freshly computed array without re-copying."""
        self = object.__new__(cls)
        object.__setattr__(self, "grid", grid)
        values = np.ascontiguousarray(values, dtype=np.complex128)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "side", side)
        return self

    def is_physical(self) -> bool:
        return self.side == PHYSICAL

    def is_spectral(self) -> bool:
        return self.side == SPECTRAL


def zero_field(grid: GridSpec, side: str = PHYSICAL) -> Field:
    return Field._wrap(grid, np.zeros(grid.shape, dtype=np.complex128), side)


def transform(f: Field, direction: str) -> Field:
    """Unitary DFT between the two sides.

    ``direction="forward"`` maps physical to spectral and requires a physical
    input; ``"inverse"`` is the opposite.  A mismatched side raises
    :class:`SideMismatchError`.
    """
    if direction == "forward":
        if not f.is_physical():
            raise SideMismatchError("forward transform expects a physical-side field")
        out = np.fft.fftn(f.values, norm="ortho")
        return Field._wrap(f.grid, out, SPECTRAL)
    if direction == "inverse":
        if not f.is_spectral():
            raise SideMismatchError("inverse transform expects a spectral-side field")
        out = np.fft.ifftn(f.values, norm="ortho")
        return Field._wrap(f.grid, out, PHYSICAL)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def to_spectral(f: Field) -> Field:
    """Idempotent conversion to the spectral side."""
    return f if f.is_spectral() else transform(f, "forward")


def to_physical(f: Field) -> Field:
    """Idempotent conversion to the physical side."""
    return f if f.is_physical() else transform(f, "inverse")


def spectral_multiply(f: Field, multiplier: np.ndarray) -> Field:
    """Apply a frequency-side multiplier, returning a field on the input side."""
    g = to_spectral(f)
    out = Field._wrap(g.grid, g.values * multiplier, SPECTRAL)
    return out if f.is_spectral() else to_physical(out)


def frac_deriv(f: Field, sigma: float, kind: str = "homogeneous") -> Field:
    """Fractional derivative: multiplier ``|xi|^sigma`` or ``(1+|xi|)^sigma``.

    Order 0 is the exact identity for both kinds.  For nonzero order the
    Nyquist modes are zeroed (see module docstring).  Homogeneous negative
    orders require a vanishing zero mode.
    """
    if kind not in ("homogeneous", "inhomogeneous"):
        raise ValueError(f"kind must be 'homogeneous' or 'inhomogeneous', got {kind!r}")
    if sigma < -1:
        raise ValueError(f"order must be >= -1, got {sigma}")
    if sigma == 0:
        return f
    grid = f.grid
    mag = freq_magnitude(grid)
    g = to_spectral(f)
    if kind == "homogeneous":
        if sigma < 0:
            zero_mode = g.values[(0,) * grid.d]
            total = np.sqrt(np.sum(np.abs(g.values) ** 2))
            if abs(zero_mode) > 1e-13 * max(total, 1e-300):
                raise DegenerateInputError(
                    "negative homogeneous order needs a zero-mean field"
                )
        with np.errstate(divide="ignore"):
            mult = np.where(mag > 0, mag, 1.0) ** sigma
        mult = np.where(mag > 0, mult, 0.0)
    else:
        mult = (1.0 + mag) ** sigma
    mult = np.where(nyquist_mask(grid), 0.0, mult)
    out = Field._wrap(grid, g.values * mult, SPECTRAL)
    return out if f.is_spectral() else to_physical(out)


def gradient(f: Field) -> list[Field]:
    """Spectral gradient components ``i*xi_a*fhat``, one field per axis.

    Uses the full lattice (no Nyquist zeroing) so that the discrete
    integration-by-parts identity against the spectral Laplacian is exact.
    """
    g = to_spectral(f)
    mesh = freq_mesh(f.grid)
    comps = []
    for xi in mesh:
        comp = Field._wrap(f.grid, 1j * xi * g.values, SPECTRAL)
        comps.append(comp if f.is_spectral() else to_physical(comp))
    return comps


def laplacian(f: Field) -> Field:
    """Spectral Laplacian, multiplier ``-|xi|^2``."""
    return spectral_multiply(f, -(freq_magnitude(f.grid) ** 2))


# ---------------------------------------------------------------------------
# Littlewood-Paley decomposition
# ---------------------------------------------------------------------------


def lp_bump(r: np.ndarray | float) -> np.ndarray:
    """The smooth bump: 1 on ``r<=1``, 0 on ``r>=2``, mollifier bridge between.

    Bridge value is ``exp(1 - 1/(1-(r-1)^2))`` on ``1 < r < 2``.
    """
    r = np.asarray(r, dtype=np.float64)
    out = np.ones_like(r)
    out[r >= 2.0] = 0.0
    mid = (r > 1.0) & (r < 2.0)
    if np.any(mid):
        t = r[mid] - 1.0
        with np.errstate(divide="ignore", over="ignore"):
            out[mid] = np.exp(1.0 - 1.0 / (1.0 - t * t))
    return out


def _is_dyadic(N: float) -> bool:
    if not N > 0 or not math.isfinite(N):
        return False
    e = math.log2(N)
    return abs(e - round(e)) < 1e-12


@dataclass(frozen=True)
class LpBand:
    """Dyadic frequency band selector: ``leq(N)``, ``eq(N)`` or ``gt(N)``."""

    selector: str
    N: float

    def __post_init__(self) -> None:
        if self.selector not in ("leq", "eq", "gt"):
            raise ValueError(f"selector must be leq/eq/gt, got {self.selector!r}")
        if not _is_dyadic(self.N):
            raise ValueError(f"band frequency must be a positive dyadic real, got {self.N}")


def band_multiplier(grid: GridSpec, band: LpBand) -> np.ndarray:
    mag = freq_magnitude(grid)
    if band.selector == "leq":
        return lp_bump(mag / band.N)
    if band.selector == "gt":
        return 1.0 - lp_bump(mag / band.N)
    return lp_bump(mag / band.N) - lp_bump(2.0 * mag / band.N)


def lp_project(f: Field, band: LpBand) -> Field:
    """Littlewood-Paley projection onto the requested band."""
    return spectral_multiply(f, band_multiplier(f.grid, band))


def dyadic_ladder(grid: GridSpec, ceiling: float | None = None) -> list[LpBand]:
    """Bands ``leq(1), eq(2), eq(4), ...`` up to a ceiling covering the lattice.

    The returned bands tile frequency space on this grid: their multipliers
    telescope to ``lp_bump(mag/ceiling)`` which is identically 1 once
    ``ceiling >= max |xi|``.
    """
    if ceiling is None:
        ceiling = 2.0 ** math.ceil(math.log2(max_frequency(grid)))
    if not _is_dyadic(ceiling):
        raise ValueError(f"ceiling must be dyadic, got {ceiling}")
    bands = [LpBand("leq", 1.0)]
    N = 2.0
    while N <= ceiling:
        bands.append(LpBand("eq", N))
        N *= 2.0
    return bands


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def lebesgue_norm(f: Field, r: float) -> float:
    """``(sum |f|^r h^d)^{1/r}`` on the physical side; ``r=inf`` gives max."""
    if not f.is_physical():
        raise SideMismatchError("Lebesgue norms are defined on the physical side")
    if r < 1:
        raise ValueError(f"Lebesgue exponent must be >= 1, got {r}")
    mags = np.abs(f.values)
    if math.isinf(r):
        return float(mags.max())
    return float((np.sum(mags**r) * f.grid.cell_volume) ** (1.0 / r))


def l2_norm(f: Field) -> float:
    """L^2 norm, valid on either side (the transform is unitary)."""
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.cell_volume))


def sobolev_norm(f: Field, sigma: float, kind: str = "inhomogeneous") -> float:
    """L^2 norm of ``frac_deriv(f, sigma, kind)``."""
    return l2_norm(frac_deriv(to_spectral(f), sigma, kind))


def bernstein_ratio(f: Field, N: float, p: float, q: float) -> float:
    """Measured constant in the band-limited norm comparison.

    Returns ``||P_{<=N} f||_q / (N^{d/p - d/q} ||P_{<=N} f||_p)``; the
    comparison asserts this is bounded uniformly in N and f.
    """
    if p > q:
        raise ValueError(f"need p <= q, got p={p}, q={q}")
    low = to_physical(lp_project(f, LpBand("leq", N)))
    denom_norm = lebesgue_norm(low, p)
    if denom_norm == 0.0:
        raise DegenerateInputError("field vanishes after projection")
    d = f.grid.d
    qinv = 0.0 if math.isinf(q) else 1.0 / q
    pinv = 0.0 if math.isinf(p) else 1.0 / p
    scale = N ** (d * pinv - d * qinv)
    return lebesgue_norm(low, q) / (scale * denom_norm)


def boundary_mass_fraction(f: Field) -> float:
    """Fraction of total mass in the boundary region ``|x|_inf > L/4``."""
    phys = to_physical(f)
    grid = f.grid
    mesh = coord_mesh(grid)
    outer = np.zeros(grid.shape, dtype=bool)
    for x in mesh:
        outer = outer | (np.abs(x) > grid.L / 4)
    dens = np.abs(phys.values) ** 2
    total = float(dens.sum())
    if total == 0.0:
        return 0.0
    return float(dens[outer].sum()) / total
