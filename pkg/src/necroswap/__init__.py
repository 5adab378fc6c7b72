"""Dense state-vector tools for swapping versus distinguishing orthogonal states."""

from . import kernels
from .complexity import (
    GateSet,
    SearchConfig,
    SearchResult,
    inequality_audit,
    prep_complexity,
    relative_complexity,
    swap_complexity,
    triangle_audit,
)
from .duality import (
    DistinguisherSpec,
    ancilla_return_check,
    build_distinguisher,
    build_swapper,
    distinguish_bias,
    optimal_theta,
    swap_overlaps,
)
from .statevec import (
    Circuit,
    CircuitError,
    Gate,
    QuantumState,
    adjoint,
    apply_circuit,
    controlled,
    haar_sample,
    inner_product,
    product_state,
    superpose,
)
from .tightness import (
    EtaFamily,
    TightnessParams,
    build_instance,
    haar_overlap_cdf,
    optimize_restricted_bias,
    verify_instance,
)

__version__ = "0.1.0"
BACKEND = kernels.BACKEND

__all__ = [
    "BACKEND", "Circuit", "CircuitError", "DistinguisherSpec", "EtaFamily", "Gate",
    "GateSet", "QuantumState", "SearchConfig", "SearchResult", "TightnessParams",
    "adjoint", "ancilla_return_check", "apply_circuit", "build_distinguisher",
    "build_instance", "build_swapper", "controlled", "distinguish_bias", "haar_overlap_cdf",
    "haar_sample", "inequality_audit", "inner_product", "optimal_theta",
    "optimize_restricted_bias", "prep_complexity", "product_state", "relative_complexity",
    "superpose", "swap_complexity", "swap_overlaps", "triangle_audit", "verify_instance",
]
