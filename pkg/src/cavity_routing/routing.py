"""Transfer-time detection, selectivity figures of merit and parameter sweeps."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from .cscq import CSCQ, transfer_fidelity
from .dynamics import default_grid, evolve_series, iter_rows, spectrum
from .errors import CavityRoutingError, NoTransferPeak
from .network import (
    SENDER_EXCITON,
    Mode,
    TernarySetParams,
    build_coupling_matrix,
    channel_exciton,
    field_ordinals,
    mode_ordinal,
    receiver_exciton,
)

__all__ = [
    "TransferReport",
    "SweepAxis",
    "SweepCell",
    "SweepGrid",
    "estimate_transfer_time",
    "default_horizon",
    "ripple_step",
    "find_transfer_time",
    "selectivity_report",
    "sweep",
]

SUCCESS_THRESHOLD = 0.95
PEAK_FLOOR = 0.5
HORIZON_FACTOR = 1.25
DEFAULT_POINTS = 4001
DEFAULT_QUBIT = CSCQ.even_cat(0.5)


@dataclass(frozen=True)
class TransferReport:
    """Figures of merit for routing to receiver ``target``.

    ``crosstalk``, ``confinement_defect``, ``max_field_population`` and
    ``ternary_leakage`` are maxima over ``[0, t_star]``.
    """

    target: int
    t_star: float
    peak_population: float
    crosstalk: float
    confinement_defect: float
    max_field_population: float
    fidelity_at_t_star: float
    fidelity_strict: float
    ternary_leakage: float
    horizon: float
    points: int
    threshold: float = SUCCESS_THRESHOLD

    @property
    def transferred(self):
        return self.peak_population >= self.threshold

    def to_dict(self):
        d = asdict(self)
        d["transferred"] = self.transferred
        return d


def estimate_transfer_time(config, m=None):
    """Half period of the slow sender/receiver exchange, ``pi / |w_a - w_b|``.

    ``a`` and ``b`` are the two eigenmodes with the largest joint weight on
    the sender exciton and the target receiver exciton. Returns ``inf`` when
    no eigenmode connects the two.
    """
    m = build_coupling_matrix(config) if m is None else m
    spec = spectrum(m)
    s = mode_ordinal(config, SENDER_EXCITON)
    r = mode_ordinal(config, receiver_exciton(config.active_sender))
    weight = np.abs(spec.eigvecs[s] * spec.eigvecs[r])
    a, b = np.argsort(weight)[::-1][:2]
    gap = abs(spec.eigvals[a] - spec.eigvals[b])
    if weight[b] < 1e-12 or gap == 0:
        return np.inf
    return float(np.pi / gap)


def default_horizon(config, m=None):
    """Scan horizon: ``HORIZON_FACTOR`` times the estimated transfer time."""
    t = estimate_transfer_time(config, m)
    if not np.isfinite(t):
        active = config.active
        if active.g > 0:
            return 4 * 2 * np.pi * max(abs(active.delta), 1.0) / active.g ** 2
        return 8 * np.pi / config.hop
    return HORIZON_FACTOR * t


def ripple_step(m, samples_per_period=4):
    """Time step resolving the fastest oscillation of ``m``'s dynamics."""
    spec = spectrum(m)
    width = float(spec.eigvals[-1] - spec.eigvals[0])
    if width == 0:
        return np.inf
    return 2 * np.pi / (samples_per_period * width)


def _target_ordinal(series, target):
    if isinstance(target, Mode):
        return mode_ordinal(series.n_receivers, target)
    if series.n_receivers is None:
        return int(target)
    if not 1 <= target <= series.n_receivers:
        raise ValueError(f"target receiver {target} out of range 1..{series.n_receivers}")
    return mode_ordinal(series.n_receivers, receiver_exciton(target))


def _crest_near(series, k_mode, t_guess, lo, hi):
    """Highest local maximum of the exact target population in ``[lo, hi]``.

    Ties are broken towards ``t_guess``.

    The population ``|sum_n c_n exp(-i w_n t)|^2`` has a closed-form
    derivative, so crests of the fast dispersive ripple are located by root
    finding on it rather than by the grid. Returns ``None`` if none is found.
    """
    spec = series.spectrum
    c = spec.eigvecs[k_mode] * spec.eigvecs[series.source]
    # only eigenvalue differences matter for populations
    w = spec.eigvals - 0.5 * (spec.eigvals[0] + spec.eigvals[-1])

    def amp(t):
        return np.exp(-1j * w * t) * c

    def slope(t):
        a = amp(t)
        return 2.0 * float(np.real(np.conj(a.sum()) * (-1j * w * a).sum()))

    width = float(w[-1] - w[0])
    if width == 0 or hi <= lo:
        return None
    n = int(min(4096, max(16, np.ceil(8 * (hi - lo) * width / (2 * np.pi)))))
    ts = np.linspace(lo, hi, n + 1)
    ds = np.array([slope(t) for t in ts])
    best = None
    for j in np.flatnonzero((ds[:-1] > 0) & (ds[1:] <= 0)):
        t = brentq(slope, ts[j], ts[j + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps)
        p = float(abs(amp(t).sum()) ** 2)
        if best is None or p > best[1] or (p == best[1] and abs(t - t_guess) < abs(best[0] - t_guess)):
            best = (t, p)
    return best


def _parabola_vertex(grid, pop, k):
    """Vertex of the parabola through the discrete maximum and its neighbours."""
    if not 0 < k < len(pop) - 1:
        return float(grid[k])
    t0, t1, t2 = grid[k - 1:k + 2]
    p0, p1, p2 = pop[k - 1:k + 2]
    denom = (t0 - t1) * (t0 - t2) * (t1 - t2)
    a = (t2 * (p1 - p0) + t1 * (p0 - p2) + t0 * (p2 - p1)) / denom
    b = (t2 ** 2 * (p0 - p1) + t1 ** 2 * (p2 - p0) + t0 ** 2 * (p1 - p2)) / denom
    if a >= 0:
        return float(t1)
    return float(np.clip(-b / (2 * a), t0, t2))


def find_transfer_time(series, target, floor=PEAK_FLOOR):
    """First time of the global maximum of the target population.

    The discrete maximum is refined to the highest crest of the exact
    population between its grid neighbours (ties go to the crest nearest
    the parabolic vertex through the three grid points). The refined time
    is kept only if the population there is higher.

    Parameters
    ----------
    series : TimeSeries
    target : int or Mode
        Receiver index (1-based) for network series, a Mode, or a plain
        ordinal for matrices without network structure.
    floor : float
        Minimum peak population accepted as a transfer.

    Returns
    -------
    t_star, peak_population : float
    """
    k_mode = _target_ordinal(series, target)
    pop = series.population(k_mode)
    k = int(np.argmax(pop))
    if pop[k] < floor:
        raise NoTransferPeak(
            f"target population peaks at {pop[k]:.4f} (< {floor}) over [0, {series.grid[-1]:.6g}]"
        )
    t_star, peak = float(series.grid[k]), float(pop[k])
    lo = float(series.grid[max(k - 1, 0)])
    hi = float(series.grid[min(k + 1, len(pop) - 1)])
    crest = _crest_near(series, k_mode, _parabola_vertex(series.grid, pop, k), lo, hi)
    if crest is not None:
        pv = float(np.abs(series.at(crest[0]).amplitudes[k_mode]) ** 2)
        if pv > peak:
            t_star, peak = float(crest[0]), pv
    return t_star, peak


@dataclass
class _WindowMax:
    crosstalk: float = 0.0
    confinement: float = 0.0
    field: float = 0.0
    leakage: float = 0.0

    def update(self, pops, s, r, c, others, fields):
        if others:
            self.crosstalk = max(self.crosstalk, float(pops[:, others].max()))
        self.confinement = max(self.confinement, float(np.abs(1 - pops[:, s] - pops[:, r]).max()))
        self.field = max(self.field, float(pops[:, fields].sum(axis=1).max()))
        self.leakage = max(self.leakage, float(np.abs(1 - pops[:, s] - pops[:, r] - pops[:, c]).max()))


def selectivity_report(config, horizon=None, points=DEFAULT_POINTS, qubit=None,
                       threshold=SUCCESS_THRESHOLD, floor=PEAK_FLOOR, resolve_ripple=False):
    """Route from the active sender dot and summarise how selective it was.

    Window maxima are taken over the grid points in ``[0, t_star]`` plus
    ``t_star`` itself. With ``resolve_ripple`` they are instead taken over a
    streamed grid fine enough to resolve the fast dispersive oscillation.
    """
    m = build_coupling_matrix(config)
    horizon = default_horizon(config, m) if horizon is None else float(horizon)
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    qubit = DEFAULT_QUBIT if qubit is None else qubit
    i = config.active_sender
    series = evolve_series(m, default_grid(horizon, points), SENDER_EXCITON)
    t_star, peak = find_transfer_time(series, i, floor=floor)

    s = mode_ordinal(config, SENDER_EXCITON)
    r = mode_ordinal(config, receiver_exciton(i))
    c = mode_ordinal(config, channel_exciton(i))
    others = [mode_ordinal(config, receiver_exciton(j)) for j in range(1, config.n_receivers + 1) if j != i]
    fields = field_ordinals(config)

    at_star = series.at(t_star)
    acc = _WindowMax()
    acc.update(at_star.populations[None, :], s, r, c, others, fields)
    if resolve_ripple:
        for _, amps in iter_rows(series.spectrum, s, t_star, ripple_step(m)):
            acc.update(np.abs(amps) ** 2, s, r, c, others, fields)
    else:
        inside = series.grid <= t_star
        acc.update(series.populations[inside], s, r, c, others, fields)

    return TransferReport(
        target=i,
        t_star=t_star,
        peak_population=peak,
        crosstalk=acc.crosstalk,
        confinement_defect=acc.confinement,
        max_field_population=acc.field,
        fidelity_at_t_star=transfer_fidelity(at_star, qubit, r),
        fidelity_strict=transfer_fidelity(at_star, qubit, r, strict=True),
        ternary_leakage=acc.leakage,
        horizon=horizon,
        points=int(points),
        threshold=threshold,
    )


SWEEP_PARAMETERS = ("g", "delta", "horizon")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    min: float
    max: float
    count: int = 1

    def __post_init__(self):
        if self.name not in SWEEP_PARAMETERS:
            raise ValueError(f"sweep axis must be one of {SWEEP_PARAMETERS}, got {self.name!r}")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"axis count must be a positive integer, got {self.count!r}")

    @property
    def values(self):
        if self.count == 1:
            return np.array([float(self.min)])
        return np.linspace(self.min, self.max, int(self.count))


@dataclass
class SweepCell:
    params: dict
    report: TransferReport | None = None
    error: str | None = None

    @property
    def ok(self):
        return self.report is not None


@dataclass
class SweepGrid:
    axes: tuple
    cells: list = field(default_factory=list)

    @property
    def shape(self):
        return tuple(a.count for a in self.axes)


def _cell(base, params, points, qubit):
    try:
        config = base
        if "g" in params or "delta" in params:
            a = base.active
            new = TernarySetParams(params.get("g", a.g), params.get("delta", a.delta))
            sets = list(base.sets)
            sets[base.active_sender - 1] = new
            config = base.replace(sets=tuple(sets))
        report = selectivity_report(config, horizon=params.get("horizon"), points=points, qubit=qubit)
        return SweepCell(params, report=report)
    except CavityRoutingError as exc:
        return SweepCell(params, error=f"{type(exc).__name__}: {exc}")


def sweep(base, axes, points=DEFAULT_POINTS, qubit=None, max_workers=None):
    """Evaluate ``selectivity_report`` on the Cartesian product of ``axes``.

    The ``g`` and ``delta`` axes modify the active ternary set; ``horizon``
    overrides the scan horizon. Failures are stored in the cell.
    """
    axes = tuple(axes)
    if not axes:
        raise ValueError("at least one sweep axis is required")
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate sweep axes: {names}")
    combos = [dict(zip(names, map(float, vals))) for vals in itertools.product(*(a.values for a in axes))]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            cells = list(pool.map(lambda p: _cell(base, p, points, qubit), combos))
    else:
        cells = [_cell(base, p, points, qubit) for p in combos]
    return SweepGrid(axes, cells)
