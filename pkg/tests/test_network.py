import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_routing.errors import ConfigError
from cavity_routing.network import (
    CHANNEL_FIELD,
    SENDER_EXCITON,
    SENDER_FIELD,
    Mode,
    ModeKind,
    NetworkConfig,
    TernarySetParams,
    build_coupling_matrix,
    channel_exciton,
    field_ordinals,
    mode_from_ordinal,
    mode_ordinal,
    n_modes,
    receiver_exciton,
    receiver_field,
)


def all_modes(n):
    modes = [SENDER_FIELD, SENDER_EXCITON, CHANNEL_FIELD]
    modes += [channel_exciton(j) for j in range(1, n + 1)]
    modes += [receiver_field(j) for j in range(1, n + 1)]
    modes += [receiver_exciton(j) for j in range(1, n + 1)]
    return modes


def test_mode_ordinal_examples():
    assert mode_ordinal(2, SENDER_FIELD) == 0
    assert mode_ordinal(2, receiver_exciton(2)) == 8
    with pytest.raises(ValueError):
        mode_ordinal(2, channel_exciton(3))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
def test_mode_ordinal_is_bijective(n):
    ordinals = [mode_ordinal(n, m) for m in all_modes(n)]
    assert ordinals == list(range(n_modes(n)))
    assert [mode_from_ordinal(n, k) for k in ordinals] == all_modes(n)


def test_mode_label_validation():
    with pytest.raises(ValueError):
        Mode(ModeKind.RECEIVER_FIELD)
    with pytest.raises(ValueError):
        Mode(ModeKind.SENDER_FIELD, 1)
    with pytest.raises(ValueError):
        receiver_exciton(0)


def test_config_validation():
    with pytest.raises(ConfigError):
        NetworkConfig(2, [(60, 500)])
    with pytest.raises(ConfigError):
        NetworkConfig(2, [(60, 500), (61, 600)], active_sender=3)
    with pytest.raises(ConfigError):
        NetworkConfig(2, [(60, 500), (61, 600)], hop=0.0)
    with pytest.raises(ConfigError):
        NetworkConfig(2, [(60, 500), (-1, 600)])
    with pytest.raises(ConfigError, match="identical"):
        NetworkConfig(2, [(60, 500), (60, 500)])
    cfg = NetworkConfig(2, [(60, 500), (60, 500)], allow_identical_sets=True)
    assert cfg.sets[0] == cfg.sets[1] == TernarySetParams(60.0, 500.0)


def test_coupling_matrix_examples(fig3, n2_set2):
    m = build_coupling_matrix(fig3).matrix
    assert m.shape == (9, 9)
    assert m[mode_ordinal(2, SENDER_FIELD), mode_ordinal(2, SENDER_EXCITON)] == 60
    assert m[mode_ordinal(2, CHANNEL_FIELD), mode_ordinal(2, receiver_field(1))] == 1
    m2 = build_coupling_matrix(n2_set2).matrix
    re2 = mode_ordinal(2, receiver_exciton(2))
    assert m2[re2, re2] == 600
    # sender exciton follows the active set
    assert m2[1, 1] == 600 and m2[0, 1] == 61


def expected_pattern(n):
    pairs = {(SENDER_FIELD, SENDER_EXCITON), (CHANNEL_FIELD, SENDER_FIELD)}
    for j in range(1, n + 1):
        pairs |= {(CHANNEL_FIELD, channel_exciton(j)), (receiver_field(j), receiver_exciton(j)),
                  (CHANNEL_FIELD, receiver_field(j))}
    mask = np.zeros((n_modes(n), n_modes(n)), dtype=bool)
    for a, b in pairs:
        mask[mode_ordinal(n, a), mode_ordinal(n, b)] = mask[mode_ordinal(n, b), mode_ordinal(n, a)] = True
    return mask


@st.composite
def configs(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    gs = draw(st.lists(st.floats(0.5, 200), min_size=n, max_size=n, unique=True))
    ds = draw(st.lists(st.floats(-1000, 1000), min_size=n, max_size=n))
    return NetworkConfig(
        n,
        list(zip(gs, ds)),
        active_sender=draw(st.integers(1, n)),
        hop=draw(st.floats(0.1, 10)),
        frame_offset=draw(st.floats(-100, 100)),
    )


@settings(max_examples=60, deadline=None)
@given(configs())
def test_coupling_matrix_symmetry_and_sparsity(config):
    m = build_coupling_matrix(config).matrix
    assert np.array_equal(m, m.T)
    off = ~np.eye(m.shape[0], dtype=bool)
    mask = expected_pattern(config.n_receivers)
    assert np.all(m[off & ~mask] == 0)
    assert np.all(m[mask] != 0)
    assert np.all(m[field_ordinals(config), field_ordinals(config)] == config.frame_offset)


@settings(max_examples=40, deadline=None)
@given(configs(), st.floats(-500, 500))
def test_frame_offset_adds_identity(config, c):
    base = build_coupling_matrix(config.replace(frame_offset=0.0)).matrix
    shifted = build_coupling_matrix(config.replace(frame_offset=c)).matrix
    np.testing.assert_allclose(shifted, base + c * np.eye(base.shape[0]), rtol=0, atol=1e-12)


@pytest.mark.parametrize("perm", list(itertools.permutations(range(3))))
def test_receiver_permutation_conjugates_matrix(perm):
    sets = [(60, 500), (61, 600), (62, 700)]
    n = 3
    base = NetworkConfig(n, sets, active_sender=2)
    # receiver k of the permuted network carries the set of receiver perm[k]
    permuted = NetworkConfig(n, [sets[p] for p in perm], active_sender=perm.index(1) + 1)
    p = np.zeros((n_modes(n), n_modes(n)))
    for mode in all_modes(n):
        new = mode
        if mode.j is not None:
            new = Mode(mode.kind, perm.index(mode.j - 1) + 1)
        p[mode_ordinal(n, new), mode_ordinal(n, mode)] = 1
    m0 = build_coupling_matrix(base).matrix
    m1 = build_coupling_matrix(permuted).matrix
    assert np.array_equal(m1, p @ m0 @ p.T)
