"""Brute-force reference simulator on a truncated multimode Fock space.

Every mode (field or exciton) is a boson truncated at ``cutoff`` quanta. The
Hamiltonian is assembled term by term from the network parameters, without
going through the coupling matrix, and states are propagated exactly inside
each total-excitation sector (the rotating-wave Hamiltonian never mixes
sectors, and the truncated ladder operators keep that property).

Basis states are ordered lexicographically over the occupation tuple, in
mode-ordinal order, with mode 0 most significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .cscq import normalization
from .errors import DimensionGuard, ExcessiveTruncation, IntegrationError
from .network import (
    CHANNEL_FIELD,
    SENDER_EXCITON,
    SENDER_FIELD,
    Mode,
    channel_exciton,
    field_ordinals,
    mode_ordinal,
    n_modes,
    receiver_exciton,
    receiver_field,
)

__all__ = [
    "FockSpace",
    "FockState",
    "FockHamiltonian",
    "cutoff_for",
    "poisson_tail",
    "build_fock_hamiltonian",
    "evolve_state",
    "prepare_cscq_state",
    "single_excitation_state",
    "state_fidelity",
    "mean_photons",
    "mode_occupations",
    "total_excitation",
    "oracle_phase",
]

MAX_DIM = 10 ** 6
TRUNCATION_LIMIT = 1e-3
NORM_TOL = 1e-8
DENSE_SECTOR_LIMIT = 4000


def poisson_tail(alpha, cutoff):
    """Weight of ``|alpha>`` above ``cutoff`` quanta."""
    lam = abs(alpha) ** 2
    kept = sum(math.exp(-lam) * lam ** n / math.factorial(n) for n in range(cutoff + 1))
    return max(0.0, 1.0 - kept)


def cutoff_for(alpha, tail=1e-5):
    """Smallest cutoff whose Poisson tail is below ``tail``."""
    n = 1
    while poisson_tail(alpha, n) >= tail:
        n += 1
    return n


class FockSpace:
    """Product space of ``n_modes`` bosons, each truncated at ``cutoff``."""

    def __init__(self, n_modes, cutoff, max_dim=MAX_DIM):
        if cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {cutoff}")
        dim = (cutoff + 1) ** n_modes
        if dim > max_dim:
            raise DimensionGuard(
                f"Fock dimension (cutoff+1)^modes = {cutoff + 1}^{n_modes} = {dim} exceeds limit {max_dim}"
            )
        self.n_modes = n_modes
        self.cutoff = cutoff
        self.dim = dim
        self.strides = (cutoff + 1) ** np.arange(n_modes - 1, -1, -1)
        idx = np.arange(dim)
        self.occupations = (idx[:, None] // self.strides) % (cutoff + 1)
        self.total = self.occupations.sum(axis=1)

    def index(self, occupation):
        occupation = np.asarray(occupation)
        if occupation.shape != (self.n_modes,) or occupation.min() < 0 or occupation.max() > self.cutoff:
            raise ValueError(f"invalid occupation tuple {tuple(occupation)}")
        return int(occupation @ self.strides)

    def sector(self, k):
        return np.flatnonzero(self.total == k)


@dataclass(eq=False)
class FockState:
    space: FockSpace
    amplitudes: np.ndarray
    n_receivers: int
    truncation_weight: float = 0.0

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(eq=False)
class FockHamiltonian:
    space: FockSpace
    operator: sp.csr_matrix
    n_receivers: int
    _sectors: dict = field(default_factory=dict, repr=False)

    def sector(self, k):
        """``(indices, eigvals, eigvecs)`` of excitation sector ``k``; eigen data is None for large sectors."""
        if k not in self._sectors:
            idx = self.space.sector(k)
            if len(idx) <= DENSE_SECTOR_LIMIT:
                block = self.operator[idx][:, idx].toarray()
                w, v = np.linalg.eigh(block)
                self._sectors[k] = (idx, w, v)
            else:
                self._sectors[k] = (idx, None, None)
        return self._sectors[k]

    def single_excitation_block(self):
        """Sector-1 block, rows/columns in mode-ordinal order."""
        s = self.space
        idx = np.array([s.index(np.eye(s.n_modes, dtype=int)[k]) for k in range(s.n_modes)])
        return self.operator[idx][:, idx].toarray()


def _terms(config):
    """Mode frequencies and pairwise couplings read off the network parameters."""
    n = config.n_receivers
    w0 = config.frame_offset
    active = config.active
    freqs = {SENDER_FIELD: w0, CHANNEL_FIELD: w0, SENDER_EXCITON: w0 + active.delta}
    pairs = [(SENDER_FIELD, SENDER_EXCITON, active.g), (CHANNEL_FIELD, SENDER_FIELD, config.hop)]
    for j, s in enumerate(config.sets, start=1):
        freqs[receiver_field(j)] = w0
        freqs[channel_exciton(j)] = w0 + s.delta
        freqs[receiver_exciton(j)] = w0 + s.delta
        pairs += [
            (CHANNEL_FIELD, channel_exciton(j), s.g),
            (receiver_field(j), receiver_exciton(j), s.g),
            (CHANNEL_FIELD, receiver_field(j), config.hop),
        ]
    ordinal = lambda mode: mode_ordinal(n, mode)  # noqa: E731
    return {ordinal(m): w for m, w in freqs.items()}, [(ordinal(a), ordinal(b), c) for a, b, c in pairs]


def build_fock_hamiltonian(config, cutoff, max_dim=MAX_DIM):
    """Sparse Hamiltonian of the whole network on the truncated Fock space."""
    space = FockSpace(n_modes(config.n_receivers), cutoff, max_dim=max_dim)
    occ = space.occupations
    freqs, pairs = _terms(config)
    diag = np.zeros(space.dim)
    for k, w in freqs.items():
        diag += w * occ[:, k]
    rows, cols, vals = [np.arange(space.dim)], [np.arange(space.dim)], [diag]
    for a, b, c in pairs:
        if c == 0:
            continue
        # c a_a^dagger a_b : move one quantum from b to a
        src = np.flatnonzero((occ[:, b] > 0) & (occ[:, a] < cutoff))
        dst = src + space.strides[a] - space.strides[b]
        amp = c * np.sqrt((occ[src, a] + 1.0) * occ[src, b])
        rows += [dst, src]
        cols += [src, dst]
        vals += [amp, amp]
    op = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(space.dim, space.dim)
    )
    op.sum_duplicates()
    op.eliminate_zeros()
    return FockHamiltonian(space, op, config.n_receivers)


def evolve_state(h, psi0, t):
    """``exp(-i H t) psi0``, sector by sector."""
    if psi0.space is not h.space and psi0.space.dim != h.space.dim:
        raise ValueError("state and Hamiltonian live on different Fock spaces")
    x = np.asarray(psi0.amplitudes, dtype=complex)
    out = np.zeros_like(x)
    if t == 0:
        out[:] = x
    else:
        for k in np.unique(h.space.total[np.abs(x) > 0]):
            idx, w, v = h.sector(int(k))
            block = x[idx]
            if w is not None:
                out[idx] = v @ (np.exp(-1j * w * t) * (v.conj().T @ block))
            else:
                sub = h.operator[idx][:, idx]
                out[idx] = expm_multiply(-1j * t * sub, block)
    defect = abs(np.linalg.norm(out) - np.linalg.norm(x))
    if defect > NORM_TOL:
        raise IntegrationError(f"norm drifted by {defect:.3e} during evolution to t={t}")
    return FockState(psi0.space, out, psi0.n_receivers, psi0.truncation_weight)


def _mode(n, target):
    return mode_ordinal(n, target) if isinstance(target, Mode) else int(target)


def _cscq_state(q, space, n, target, phase):
    normalization(q)
    tail = poisson_tail(q.alpha, space.cutoff)
    if tail > TRUNCATION_LIMIT:
        raise ExcessiveTruncation(
            f"coherent weight {tail:.3e} above cutoff {space.cutoff} exceeds {TRUNCATION_LIMIT:.0e}"
        )
    beta = complex(q.alpha) * np.exp(1j * phase)
    ns = np.arange(space.cutoff + 1)
    fact = np.array([math.sqrt(math.factorial(int(k))) for k in ns])
    coeffs = (complex(q.mu) * beta ** ns + complex(q.nu) * (-beta) ** ns) * np.exp(-0.5 * abs(beta) ** 2) / fact
    amps = np.zeros(space.dim, dtype=complex)
    amps[ns * space.strides[_mode(n, target)]] = coeffs / np.linalg.norm(coeffs)
    return FockState(space, amps, n, tail)


def prepare_cscq_state(q, config, cutoff, target=SENDER_EXCITON, phase=0.0,
                       max_dim=MAX_DIM, space=None):
    """Qubit ``mu|alpha e^{i phase}> + nu|-alpha e^{i phase}>`` on ``target``, vacuum elsewhere.

    The single-mode vector is cut at ``cutoff`` and renormalised; the
    discarded Poisson weight of one coherent branch is stored on the state.
    """
    n = config.n_receivers
    space = space or FockSpace(n_modes(n), cutoff, max_dim=max_dim)
    return _cscq_state(q, space, n, target, phase)


def single_excitation_state(config, cutoff, mode, max_dim=MAX_DIM, space=None):
    n = config.n_receivers
    space = space or FockSpace(n_modes(n), cutoff, max_dim=max_dim)
    amps = np.zeros(space.dim, dtype=complex)
    amps[space.strides[_mode(n, mode)]] = 1.0
    return FockState(space, amps, n)


def state_fidelity(psi, q, target, phase=0.0):
    """``|<target|psi>|^2`` with the qubit rebuilt on ``target`` at the given phase.

    ``phase=0`` is the strict comparison; pass ``oracle_phase(...)`` to
    allow for the local phase accumulated on the target mode.
    """
    ref = _cscq_state(q, psi.space, psi.n_receivers, target, phase)
    return float(abs(np.vdot(ref.amplitudes, psi.amplitudes)) ** 2)


def mode_occupations(psi):
    """``<n_k>`` for every mode."""
    p = np.abs(psi.amplitudes) ** 2
    return p @ psi.space.occupations


def mean_photons(psi, config=None):
    """Expected number of photons summed over the N+2 field modes."""
    n = psi.n_receivers if config is None else config.n_receivers
    return float(mode_occupations(psi)[field_ordinals(n)].sum())


def total_excitation(psi):
    return float(np.abs(psi.amplitudes) ** 2 @ psi.space.total)


def oracle_phase(h, source, target, t):
    """Phase of ``<1_target| exp(-iHt) |1_source>`` from the sector-1 eigenbasis."""
    n = h.n_receivers
    s = h.space
    src = s.strides[_mode(n, source)]
    dst = s.strides[_mode(n, target)]
    idx, w, v = h.sector(1)
    i_src = int(np.searchsorted(idx, src))
    i_dst = int(np.searchsorted(idx, dst))
    amp = v[i_dst] @ (np.exp(-1j * w * t) * v[i_src].conj())
    return float(np.angle(amp))
