"""Exact coevent engine for a particle hopping on a cyclic lattice.

Enumerates trajectories and their root-of-unity amplitudes exactly,
decides which events are precluded (amplitude sums that vanish),
enumerates the primitive supports of the multiplicative coevent scheme,
and answers state-discrimination questions by bit-exact combinatorics.
"""
from __future__ import annotations

from .analysis import (
    DiscriminationReport,
    SymmetryReport,
    average_net_circulation,
    classify_restlessness,
    discrimination_report,
    ensemble_symmetry_report,
    event_by_name,
    event_verdicts,
    net_circulation,
    rest_profile,
    rotate_coevent,
)
from .coevents import (
    MultiplicativeCoevent,
    common_supports,
    count_primitive,
    enumerate_primitive,
    enumerate_primitive_bruteforce,
    is_preclusive,
    is_primitive,
    minimal_preclusive_vectors,
    overlap,
)
from .cyclotomic import CycInt, cyclotomic_polynomial, root
from .errors import (
    EmbeddingError,
    HopperError,
    InfeasibleSizeError,
    InvalidOrderError,
    InvalidSiteError,
    OrderMismatchError,
    SpaceMismatchError,
    UnknownStateError,
    WrongSpaceError,
)
from .histories import (
    AmplitudeClass,
    AmplitudeClasses,
    Event,
    HistorySpace,
    amplitude_classes,
    circulation,
    enumerate_histories,
    half_hop_count,
    history_amplitude,
    history_index,
    rest_count,
    visited,
)
from .measure import (
    count_precluded,
    count_precluded_bruteforce,
    event_sum,
    is_precluded,
    maximal_zero_count_vectors,
    preclusive_coevent_count_exponent,
    quantal_measure_is_zero,
    sector_sums,
    sector_tables,
)
from .model import (
    InitialState,
    LatticeSpec,
    check_unitarity,
    hop_amplitude,
    initial_state,
    is_transfer_eigenvector,
    transfer_matrix,
)

__version__ = "0.1.0"
