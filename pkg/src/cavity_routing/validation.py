"""Side-by-side comparison of the coupled-mode machinery with the Fock oracle."""

from __future__ import annotations

import numpy as np

from .cscq import mean_photon_number, transfer_fidelity
from .dynamics import evolve_series
from .errors import NoTransferPeak
from .fock_oracle import (
    MAX_DIM,
    build_fock_hamiltonian,
    evolve_state,
    mean_photons,
    mode_occupations,
    oracle_phase,
    prepare_cscq_state,
    single_excitation_state,
    state_fidelity,
)
from .network import SENDER_EXCITON, build_coupling_matrix, receiver_exciton
from .routing import default_horizon, selectivity_report

__all__ = ["SINGLE_TOL", "FIDELITY_TOL", "PHOTON_TOL", "sample_times", "compare_single_excitation",
           "compare_coherent", "oracle_check"]

SINGLE_TOL = 1e-8
FIDELITY_TOL = 1e-4
PHOTON_TOL = 1e-3


def sample_times(config, count, include_peak=True):
    """``count`` times spread over the default horizon; the last one is ``t*`` when it exists."""
    horizon = default_horizon(config)
    if not include_peak:
        return np.linspace(0.0, horizon, count)
    try:
        t_star = selectivity_report(config).t_star
    except NoTransferPeak:
        return np.linspace(0.0, horizon, count)
    return np.append(np.linspace(0.0, horizon, count - 1), t_star)


def compare_single_excitation(config, times, cutoff=1, max_dim=MAX_DIM, h=None):
    """Largest gap between oracle mode occupations and ``|u_x(t)|^2``."""
    h = h or build_fock_hamiltonian(config, cutoff, max_dim=max_dim)
    psi0 = single_excitation_state(config, cutoff, SENDER_EXCITON, space=h.space)
    times = np.asarray(times, dtype=float)
    series = evolve_series(build_coupling_matrix(config), np.unique(np.append(0.0, times)), SENDER_EXCITON)
    worst = 0.0
    for k, t in enumerate(series.grid):
        occ = mode_occupations(evolve_state(h, psi0, t))
        worst = max(worst, float(np.max(np.abs(occ - series.populations[k]))))
    return worst


def compare_coherent(config, qubit, times, cutoff, strict_phase=False, max_dim=MAX_DIM, h=None):
    """Largest fidelity and mean-photon gaps between the closed forms and the oracle."""
    target = receiver_exciton(config.active_sender)
    h = h or build_fock_hamiltonian(config, cutoff, max_dim=max_dim)
    psi0 = prepare_cscq_state(qubit, config, cutoff, space=h.space)
    series = evolve_series(build_coupling_matrix(config), [0.0], SENDER_EXCITON)
    fid_dev = photon_dev = 0.0
    for t in np.asarray(times, dtype=float):
        row = series.at(t)
        psi = evolve_state(h, psi0, t)
        phase = 0.0 if strict_phase else oracle_phase(h, SENDER_EXCITON, target, t)
        fid_dev = max(fid_dev, abs(state_fidelity(psi, qubit, target, phase)
                                   - transfer_fidelity(row, qubit, target, strict=strict_phase)))
        photon_dev = max(photon_dev, abs(mean_photons(psi) - mean_photon_number(row, qubit)))
    return fid_dev, photon_dev, psi0.truncation_weight


def oracle_check(config, qubit, cutoff, samples=20, strict_phase=False, max_dim=MAX_DIM):
    """Run both comparisons and grade them against the oracle tolerances."""
    times = sample_times(config, samples)
    h = build_fock_hamiltonian(config, cutoff, max_dim=max_dim)
    single = compare_single_excitation(config, times, cutoff, h=h)
    fid, photons, tail = compare_coherent(config, qubit, times, cutoff, strict_phase, h=h)
    return {
        "n_receivers": config.n_receivers,
        "active_sender": config.active_sender,
        "cutoff": cutoff,
        "fock_dim": h.space.dim,
        "samples": len(times),
        "truncation_weight": tail,
        "fidelity_convention": "strict" if strict_phase else "phase-corrected",
        "single_excitation_max_dev": single,
        "single_excitation_pass": single <= SINGLE_TOL,
        "fidelity_max_dev": fid,
        "fidelity_pass": fid <= FIDELITY_TOL,
        "mean_photon_max_dev": photons,
        "mean_photon_pass": photons <= PHOTON_TOL,
        "pass": single <= SINGLE_TOL and fid <= FIDELITY_TOL and photons <= PHOTON_TOL,
    }
