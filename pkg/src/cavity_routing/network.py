"""Network topology, parameters and the single-excitation coupling matrix.

The network is a star: one channel cavity coupled with hopping rate ``hop``
to a sender cavity and to ``N`` receiver cavities. Ternary set ``k`` places
three identical quantum dots (coupling ``g_k``, detuning ``delta_k``) in the
sender, the channel and receiver ``k``. Only the sender dot selected by
``active_sender`` couples to the sender field; the other sender dots are
left out of the model entirely.

Mode ordinals follow a fixed layout, for ``j = 1..N``::

    0            sender field
    1            sender exciton (active set)
    2            channel field
    2 + j        channel exciton j
    2 + N + j    receiver field j
    2 + 2N + j   receiver exciton j
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

__all__ = [
    "ModeKind",
    "Mode",
    "SENDER_FIELD",
    "SENDER_EXCITON",
    "CHANNEL_FIELD",
    "channel_exciton",
    "receiver_field",
    "receiver_exciton",
    "TernarySetParams",
    "NetworkConfig",
    "CouplingMatrix",
    "n_modes",
    "mode_ordinal",
    "mode_from_ordinal",
    "field_ordinals",
    "build_coupling_matrix",
    "reference_sets",
]


class ModeKind(enum.Enum):
    SENDER_FIELD = "sender_field"
    SENDER_EXCITON = "sender_exciton"
    CHANNEL_FIELD = "channel_field"
    CHANNEL_EXCITON = "channel_exciton"
    RECEIVER_FIELD = "receiver_field"
    RECEIVER_EXCITON = "receiver_exciton"


_INDEXED = {ModeKind.CHANNEL_EXCITON, ModeKind.RECEIVER_FIELD, ModeKind.RECEIVER_EXCITON}


@dataclass(frozen=True)
class Mode:
    """Label of one bosonic mode; ``j`` is the 1-based receiver/set index."""

    kind: ModeKind
    j: int | None = None

    def __post_init__(self):
        if self.kind in _INDEXED:
            if self.j is None or int(self.j) != self.j or self.j < 1:
                raise ValueError(f"{self.kind.value} needs a receiver index j >= 1, got {self.j!r}")
        elif self.j is not None:
            raise ValueError(f"{self.kind.value} takes no receiver index")

    @property
    def is_field(self):
        return self.kind in (ModeKind.SENDER_FIELD, ModeKind.CHANNEL_FIELD, ModeKind.RECEIVER_FIELD)

    def __str__(self):
        return self.kind.value if self.j is None else f"{self.kind.value}({self.j})"


SENDER_FIELD = Mode(ModeKind.SENDER_FIELD)
SENDER_EXCITON = Mode(ModeKind.SENDER_EXCITON)
CHANNEL_FIELD = Mode(ModeKind.CHANNEL_FIELD)


def channel_exciton(j):
    return Mode(ModeKind.CHANNEL_EXCITON, j)


def receiver_field(j):
    return Mode(ModeKind.RECEIVER_FIELD, j)


def receiver_exciton(j):
    return Mode(ModeKind.RECEIVER_EXCITON, j)


@dataclass(frozen=True)
class TernarySetParams:
    """Coupling ``g`` and detuning ``delta`` shared by the three dots of one set."""

    g: float
    delta: float

    def __post_init__(self):
        if not np.isfinite(self.g) or not np.isfinite(self.delta):
            raise ConfigError(f"non-finite ternary-set parameters g={self.g}, delta={self.delta}")
        if self.g < 0:
            raise ConfigError(f"coupling g must be >= 0, got {self.g}")


@dataclass(frozen=True)
class NetworkConfig:
    """Complete description of an N+2 cavity network.

    Parameters
    ----------
    n_receivers : int
        Number of receiver cavities ``N``.
    sets : sequence of TernarySetParams
        One entry per ternary set, in receiver order.
    active_sender : int
        1-based index of the sender dot coupled to the sender field.
    hop : float
        Inter-cavity hopping rate ``J``; sets the unit of frequency.
    frame_offset : float
        Field frequency in the rotating frame.
    allow_identical_sets : bool
        Skip the pairwise-distinct check on ``(g, delta)``. Only useful for
        negative controls where routing is expected to fail.
    """

    n_receivers: int
    sets: tuple = field(default=())
    active_sender: int = 1
    hop: float = 1.0
    frame_offset: float = 0.0
    allow_identical_sets: bool = False

    def __post_init__(self):
        sets = tuple(s if isinstance(s, TernarySetParams) else TernarySetParams(*s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if int(self.n_receivers) != self.n_receivers or self.n_receivers < 1:
            raise ConfigError(f"n_receivers must be a positive integer, got {self.n_receivers!r}")
        if len(sets) != self.n_receivers:
            raise ConfigError(f"expected {self.n_receivers} ternary sets, got {len(sets)}")
        if int(self.active_sender) != self.active_sender or not 1 <= self.active_sender <= self.n_receivers:
            raise ConfigError(f"active_sender must lie in 1..{self.n_receivers}, got {self.active_sender!r}")
        if not (np.isfinite(self.hop) and self.hop > 0):
            raise ConfigError(f"hop must be > 0, got {self.hop}")
        if not np.isfinite(self.frame_offset):
            raise ConfigError("frame_offset must be finite")
        if not self.allow_identical_sets:
            seen = {}
            for k, s in enumerate(sets, start=1):
                key = (float(s.g), float(s.delta))
                if key in seen:
                    raise ConfigError(
                        f"ternary sets {seen[key]} and {k} are identical (g={s.g}, delta={s.delta}); "
                        "routing requires distinct sets"
                    )
                seen[key] = k

    @property
    def active(self):
        return self.sets[self.active_sender - 1]

    def replace(self, **changes):
        kwargs = {
            "n_receivers": self.n_receivers,
            "sets": self.sets,
            "active_sender": self.active_sender,
            "hop": self.hop,
            "frame_offset": self.frame_offset,
            "allow_identical_sets": self.allow_identical_sets,
        }
        kwargs.update(changes)
        return NetworkConfig(**kwargs)


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Real symmetric matrix ``M`` with ``da/dt = -i M a`` in the single-excitation picture.

    ``relative`` is ``M`` built with ``frame_offset = 0``, so that
    ``matrix == relative + frame_offset * I`` entry by entry. Propagation
    diagonalises ``relative`` and applies the offset as a global phase,
    which keeps populations exactly independent of the frame.
    """

    matrix: np.ndarray
    n_receivers: int
    frame_offset: float = 0.0
    relative: np.ndarray | None = None

    @property
    def dim(self):
        return self.matrix.shape[0]


def n_modes(n_receivers):
    return 3 * n_receivers + 3


def _n(config_or_n):
    return config_or_n.n_receivers if hasattr(config_or_n, "n_receivers") else int(config_or_n)


def mode_ordinal(config, label):
    """Ordinal of ``label`` in a network with ``config.n_receivers`` receivers.

    ``config`` may also be a bare receiver count.

    >>> mode_ordinal(2, SENDER_FIELD)
    0
    >>> mode_ordinal(2, receiver_exciton(2))
    8
    """
    n = _n(config)
    if label.j is not None and label.j > n:
        raise ValueError(f"receiver index {label.j} out of range 1..{n}")
    kind = label.kind
    if kind is ModeKind.SENDER_FIELD:
        return 0
    if kind is ModeKind.SENDER_EXCITON:
        return 1
    if kind is ModeKind.CHANNEL_FIELD:
        return 2
    if kind is ModeKind.CHANNEL_EXCITON:
        return 2 + label.j
    if kind is ModeKind.RECEIVER_FIELD:
        return 2 + n + label.j
    return 2 + 2 * n + label.j


def mode_from_ordinal(config, ordinal):
    n = _n(config)
    if not 0 <= ordinal < n_modes(n):
        raise ValueError(f"ordinal {ordinal} out of range for N={n}")
    if ordinal < 3:
        return (SENDER_FIELD, SENDER_EXCITON, CHANNEL_FIELD)[ordinal]
    block, j = divmod(ordinal - 3, n)
    kind = (ModeKind.CHANNEL_EXCITON, ModeKind.RECEIVER_FIELD, ModeKind.RECEIVER_EXCITON)[block]
    return Mode(kind, j + 1)


def field_ordinals(config):
    n = _n(config)
    return [0, 2] + [2 + n + j for j in range(1, n + 1)]


def build_coupling_matrix(config):
    """Assemble the (3N+3)-dimensional coupling matrix of ``config``.

    Field modes sit at ``frame_offset`` on the diagonal, the excitons of set
    ``k`` at ``frame_offset + delta_k``. Off-diagonals are ``hop`` between the
    channel field and every other field, and ``g_k`` between each field and
    its co-located dot of set ``k``.
    """
    n = config.n_receivers
    m = np.zeros((n_modes(n), n_modes(n)))
    w0 = float(config.frame_offset)
    hop = float(config.hop)

    def couple(a, b, value):
        m[a, b] = m[b, a] = value

    sf, se, cf = 0, 1, 2
    active = config.active
    m[se, se] = active.delta
    couple(sf, se, active.g)
    couple(cf, sf, hop)
    for j, s in enumerate(config.sets, start=1):
        ce, rf, re = 2 + j, 2 + n + j, 2 + 2 * n + j
        m[ce, ce] = m[re, re] = s.delta
        couple(cf, ce, s.g)
        couple(rf, re, s.g)
        couple(cf, rf, hop)
    full = m.copy()
    full[np.diag_indices_from(full)] += w0
    return CouplingMatrix(full, n, w0, m)


# coupling / detuning of the four reference ternary sets (units of hop)
_REFERENCE_SETS = (
    TernarySetParams(60.0, 500.0),
    TernarySetParams(61.0, 600.0),
    TernarySetParams(62.0, 700.0),
    TernarySetParams(63.0, 800.0),
)


def reference_sets(n_receivers):
    """First ``n_receivers`` ternary sets used throughout the reference scenarios."""
    if not 1 <= n_receivers <= len(_REFERENCE_SETS):
        raise ValueError(f"reference parameters exist for N in 1..{len(_REFERENCE_SETS)}")
    return _REFERENCE_SETS[:n_receivers]
