"""Exact single-excitation propagation of the linear Heisenberg equations.

For a time-independent real symmetric coupling matrix ``M`` the annihilation
operators evolve as ``a(t) = U(t) a(0)`` with ``U(t) = exp(-i M t)``. ``U`` is
obtained from one Hermitian eigendecomposition ``M = V diag(w) V^T``, which
is then reused for every time point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .network import CouplingMatrix, Mode, mode_ordinal

__all__ = [
    "Spectrum",
    "Propagator",
    "TransferCoefficients",
    "TimeSeries",
    "spectrum",
    "propagator",
    "transfer_row",
    "unitarity_defect",
    "evolve_series",
    "iter_rows",
    "default_grid",
]

UNITARITY_TOL = 1e-10


def _as_array(m):
    """``(array, n_receivers, offset)``, with ``array + offset * I`` the full matrix."""
    if isinstance(m, CouplingMatrix):
        if m.relative is not None:
            return m.relative, m.n_receivers, float(m.frame_offset)
        return m.matrix, m.n_receivers, 0.0
    arr = np.asarray(m, dtype=float)
    dim = arr.shape[0] if arr.ndim else 0
    n = dim // 3 - 1 if dim % 3 == 0 and dim >= 6 else None
    return arr, n, 0.0


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition of a coupling matrix, shared by all time evaluations.

    ``relative_eigvals`` belong to the matrix without its frame offset; the
    offset only contributes the global phase ``exp(-i offset t)``.
    """

    relative_eigvals: np.ndarray
    eigvecs: np.ndarray
    n_receivers: int | None = None
    offset: float = 0.0

    @property
    def eigvals(self):
        return self.relative_eigvals + self.offset

    @property
    def dim(self):
        return self.relative_eigvals.shape[0]

    def matrix_at(self, t):
        if t == 0:
            return np.eye(self.dim, dtype=complex)
        v = self.eigvecs
        u = (v * np.exp(-1j * self.relative_eigvals * t)) @ v.T
        return u * np.exp(-1j * self.offset * t) if self.offset else u

    def rows_at(self, times, source):
        """Row ``source`` of ``U(t)`` for every t in ``times``; shape (len(times), dim)."""
        times = np.asarray(times, dtype=float)
        v = self.eigvecs
        phases = np.exp(-1j * np.multiply.outer(times, self.relative_eigvals))
        rows = (phases * v[source]) @ v.T
        if self.offset:
            rows *= np.exp(-1j * self.offset * times)[:, None]
        # U(0) = I exactly rather than V V^T
        rows[times == 0] = np.eye(self.dim)[source]
        return rows


def spectrum(m):
    """Diagonalise ``m`` (a CouplingMatrix or a real symmetric array)."""
    arr, n, offset = _as_array(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise np.linalg.LinAlgError(f"coupling matrix must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise np.linalg.LinAlgError("coupling matrix has non-finite entries")
    if not np.array_equal(arr, arr.T):
        raise np.linalg.LinAlgError("coupling matrix is not symmetric")
    w, v = np.linalg.eigh(arr)
    return Spectrum(w, v, n, offset)


@lru_cache(maxsize=64)
def _cached_spectrum(key, shape, n, offset):
    arr = np.frombuffer(key, dtype=float).reshape(shape)
    s = spectrum(arr)
    return Spectrum(s.relative_eigvals, s.eigvecs, n, offset)


def _spectrum_of(m):
    if isinstance(m, Spectrum):
        return m
    arr, n, offset = _as_array(m)
    arr = np.ascontiguousarray(arr, dtype=float)
    return _cached_spectrum(arr.tobytes(), arr.shape, n, offset)


def _ordinal(spec, source):
    if isinstance(source, Mode):
        if spec.n_receivers is None:
            raise ValueError("mode labels need a network-shaped matrix; pass an integer ordinal")
        return mode_ordinal(spec.n_receivers, source)
    source = int(source)
    if not 0 <= source < spec.dim:
        raise IndexError(f"mode ordinal {source} out of range 0..{spec.dim - 1}")
    return source


@dataclass(frozen=True, eq=False)
class Propagator:
    time: float
    matrix: np.ndarray
    n_receivers: int | None = None

    def defect(self):
        """``max |U^dagger U - I|``."""
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def propagator(m, t):
    """``U(t) = exp(-i M t)`` from the eigendecomposition of ``M``."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    spec = _spectrum_of(m)
    return Propagator(float(t), spec.matrix_at(t), spec.n_receivers)


@dataclass(frozen=True, eq=False)
class TransferCoefficients:
    """Amplitudes ``u_x(t)`` expressing the evolved source operator over all initial modes."""

    time: float
    amplitudes: np.ndarray
    n_receivers: int | None = None

    @property
    def populations(self):
        return np.abs(self.amplitudes) ** 2

    def __getitem__(self, label):
        if isinstance(label, Mode):
            label = mode_ordinal(self.n_receivers, label)
        return self.amplitudes[label]


def transfer_row(p, source):
    """Row of ``p.matrix`` belonging to ``source`` (a Mode or an ordinal)."""
    if isinstance(source, Mode):
        source = mode_ordinal(p.n_receivers, source)
    return TransferCoefficients(p.time, p.matrix[source].copy(), p.n_receivers)


def unitarity_defect(c):
    """``|1 - sum_x |u_x|^2|`` for one row of coefficients."""
    amps = c.amplitudes if isinstance(c, TransferCoefficients) else np.asarray(c)
    return float(abs(1.0 - np.sum(np.abs(amps) ** 2)))


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Transfer coefficients on a time grid.

    ``amplitudes[k]`` is the row at ``grid[k]``. The spectrum and source
    ordinal are kept so callers can evaluate off-grid times exactly.
    """

    grid: np.ndarray
    amplitudes: np.ndarray
    spectrum: Spectrum
    source: int

    @property
    def n_receivers(self):
        return self.spectrum.n_receivers

    @property
    def populations(self):
        return np.abs(self.amplitudes) ** 2

    def __len__(self):
        return len(self.grid)

    def row(self, k):
        return TransferCoefficients(float(self.grid[k]), self.amplitudes[k], self.n_receivers)

    def population(self, label):
        if isinstance(label, Mode):
            label = mode_ordinal(self.n_receivers, label)
        return np.abs(self.amplitudes[:, label]) ** 2

    def at(self, t):
        """Exact coefficients at an arbitrary time ``t``."""
        amps = self.spectrum.rows_at([t], self.source)[0]
        return TransferCoefficients(float(t), amps, self.n_receivers)

    def defects(self):
        return np.abs(1.0 - np.sum(self.populations, axis=1))


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("time grid must be a non-empty 1-d array")
    if grid[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return grid


def evolve_series(m, grid, source, chunk=50_000):
    """Transfer coefficients of ``source`` at every time in ``grid``."""
    grid = _check_grid(grid)
    spec = _spectrum_of(m)
    src = _ordinal(spec, source)
    amps = np.empty((grid.size, spec.dim), dtype=complex)
    for start in range(0, grid.size, chunk):
        amps[start:start + chunk] = spec.rows_at(grid[start:start + chunk], src)
    return TimeSeries(grid, amps, spec, src)


def iter_rows(m, source, t_end, dt, chunk=100_000):
    """Yield ``(times, amplitudes)`` blocks on ``0, dt, 2dt, ...`` up to ``t_end`` inclusive.

    Streams a fine grid without holding it in memory.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    spec = _spectrum_of(m)
    src = _ordinal(spec, source)
    count = int(np.floor(t_end / dt)) + 1
    for start in range(0, count, chunk):
        times = dt * np.arange(start, min(start + chunk, count))
        if start + chunk >= count and times[-1] < t_end:
            times = np.append(times, t_end)
        yield times, spec.rows_at(times, src)


def default_grid(horizon, points=4001):
    return np.linspace(0.0, float(horizon), int(points))
