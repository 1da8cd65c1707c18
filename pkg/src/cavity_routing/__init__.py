"""Selective routing of coherent-state qubits through a star of coupled QED cavities."""

__version__ = "0.1.0"

from .cscq import (
    CSCQ,
    coherent_overlap,
    field_population,
    mean_photon_number,
    normalization,
    transfer_fidelity,
)
from .dynamics import (
    Propagator,
    TimeSeries,
    TransferCoefficients,
    evolve_series,
    propagator,
    transfer_row,
    unitarity_defect,
)
from .errors import (
    CavityRoutingError,
    ConfigError,
    DegenerateQubit,
    DimensionGuard,
    ExcessiveTruncation,
    IntegrationError,
    NoTransferPeak,
)
from .network import (
    CHANNEL_FIELD,
    SENDER_EXCITON,
    SENDER_FIELD,
    CouplingMatrix,
    Mode,
    NetworkConfig,
    TernarySetParams,
    build_coupling_matrix,
    channel_exciton,
    mode_ordinal,
    reference_sets,
    receiver_exciton,
    receiver_field,
)
from .routing import SweepAxis, TransferReport, find_transfer_time, selectivity_report, sweep
