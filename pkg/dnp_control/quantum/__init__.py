from .frame import Frame, Transition, eigenframe
from .hamiltonians import (
    DnpMechanism,
    ReferenceFrame,
    control_hamiltonian,
    drift_hamiltonian,
    propagator,
)
from .operators import (
    PAULI,
    PAULI_LABELS,
    Subsystem,
    partial_trace,
    partial_trace_matrix,
    pauli_decompose,
    pauli_product,
    pauli_reconstruct,
    polarization,
    spin_operators,
)
from .params import DEFAULT_SPIN_SYSTEM, SpinSystemParams
from .states import (
    DensityMatrix,
    equilibrium_state,
    maximally_mixed,
    thermal_state,
    zeeman_populations,
)
