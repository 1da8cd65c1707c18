"""Coherent-state qubits and the observables built on transfer coefficients.

A qubit ``(mu |alpha> + nu |-alpha>) / sqrt(N_alpha)`` prepared on the sender
exciton stays a superposition of two multimode coherent states under the
linear dynamics: the branch ``|+-alpha>`` becomes ``prod_x |+-alpha u_x(t)>``.
Fidelities and photon numbers therefore reduce to products of single-mode
coherent overlaps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateQubit
from .network import Mode, field_ordinals, mode_ordinal

__all__ = [
    "CSCQ",
    "normalization",
    "coherent_overlap",
    "transfer_fidelity",
    "field_population",
    "mean_photon_number",
]

DEGENERACY_EPS = 1e-12


@dataclass(frozen=True)
class CSCQ:
    """Unnormalised amplitudes ``mu``, ``nu`` and the coherent amplitude ``alpha``."""

    mu: complex = 1.0
    nu: complex = 0.0
    alpha: complex = 0.0

    @classmethod
    def even_cat(cls, alpha):
        """Equal superposition with ``mu = nu = 1/sqrt(N_alpha)``."""
        q = cls(1.0, 1.0, alpha)
        s = 1.0 / np.sqrt(normalization(q))
        return cls(s, s, alpha)


def _overlap_factor(alpha):
    return np.exp(-2.0 * abs(alpha) ** 2)


def normalization(q, eps=DEGENERACY_EPS):
    """``N_alpha = |mu|^2 + |nu|^2 + e^{-2|alpha|^2} (mu nu* + mu* nu)``.

    Raises DegenerateQubit when ``N_alpha <= eps``.
    """
    mu, nu = complex(q.mu), complex(q.nu)
    cross = (mu * nu.conjugate() + mu.conjugate() * nu).real
    value = abs(mu) ** 2 + abs(nu) ** 2 + _overlap_factor(q.alpha) * cross
    if value <= eps:
        raise DegenerateQubit(f"qubit norm N_alpha = {value:.3e} is below {eps:.0e}")
    return float(value)


def coherent_overlap(beta, gamma):
    """``<beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + beta* gamma)``.

    Evaluated as ``exp(-|beta - gamma|^2/2 + i Im(beta* gamma))`` so the
    modulus never exceeds one in floating point.
    """
    beta, gamma = complex(beta), complex(gamma)
    return complex(np.exp(-0.5 * abs(beta - gamma) ** 2 + 1j * (beta.conjugate() * gamma).imag))


def _target_ordinal(c, target):
    if isinstance(target, Mode):
        return mode_ordinal(c.n_receivers, target)
    return int(target)


def transfer_fidelity(c, q, target, strict=False):
    """Overlap squared between the evolved state and the qubit relocated to ``target``.

    By default the target qubit carries amplitude ``alpha e^{i phi}`` with
    ``phi = arg u_target(t)``: the local phase imprinted on the target mode
    is treated as a known correctable rotation. ``strict=True`` compares
    against the unrotated qubit instead.

    Parameters
    ----------
    c : TransferCoefficients
        Coefficients of the sender exciton at the evaluation time.
    q : CSCQ
        Qubit that was prepared on the sender exciton.
    target : Mode or int
        Mode the qubit should have moved to.
    strict : bool
        Disable the phase rotation.

    Returns
    -------
    float
        Fidelity in ``[0, 1]``.
    """
    norm = normalization(q)
    amps = np.asarray(c.amplitudes, dtype=complex)
    k = _target_ordinal(c, target)
    alpha = complex(q.alpha)
    u_t = amps[k]
    phase = 1.0 if strict or u_t == 0 else u_t / abs(u_t)

    # vacuum overlap of every non-target mode, identical for both branches
    rest = np.exp(-0.5 * abs(alpha) ** 2 * (np.sum(np.abs(amps) ** 2) - abs(u_t) ** 2))
    weights = {1: complex(q.mu), -1: complex(q.nu)}
    total = 0j
    for a, wa in weights.items():
        for b, wb in weights.items():
            total += wa.conjugate() * wb * coherent_overlap(a * alpha * phase, b * alpha * u_t)
    value = abs(total * rest) ** 2 / norm ** 2
    return float(min(max(value, 0.0), 1.0))


def field_population(c):
    """Total population ``F(t)`` of the N+2 field modes."""
    amps = np.asarray(c.amplitudes)
    return float(np.sum(np.abs(amps[field_ordinals(c.n_receivers)]) ** 2))


def mean_photon_number(c, q):
    """Mean photon number across all cavities, proportional to ``F(t)``."""
    norm = normalization(q)
    mu, nu = complex(q.mu), complex(q.nu)
    cross = (mu * nu.conjugate() + mu.conjugate() * nu).real
    odd = abs(mu) ** 2 + abs(nu) ** 2 - _overlap_factor(q.alpha) * cross
    return float(abs(q.alpha) ** 2 * odd * field_population(c) / norm)
