"""Hadamard quantum broadcast channels and their capacity regions."""

from .channel import (
    ChoiMatrix,
    HadamardChannelSpec,
    apply_broadcast,
    apply_isometry,
    apply_measure,
    apply_prepare,
    choi_of,
    isometry,
    isometry_residual,
    reduce_to_bob,
    reduce_to_charlie,
    validate_spec,
    verify_degradability,
)
from .entropic import (
    EnsembleEntry,
    InputEnsemble,
    RateTriple,
    cc_rates,
    cq_rates,
    eac_rates,
    holevo_information,
    rates,
    von_neumann_entropy,
)
from .oracle import classical_oracle_frontier, is_classical_embedded
from .region import Frontier, OptimizationConfig, RatePoint, optimize_frontier, scalarized_objective

__version__ = "0.1.0"
