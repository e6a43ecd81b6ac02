from .dump import dump_map, format_matrix, load_map, parse_matrix
from .fidelity import gate_fidelity, map_fidelity, pauli_transfer_matrix, polarizing_strength
from .kraus import KrausSet, apply, compose
from .reduction import fixed_point, reduce_to_nuclear, reduced_nuclear_kraus
from .representations import (
    ChoiMatrix,
    SuperMatrix,
    as_super,
    choi_to_kraus,
    choi_to_super,
    kraus_to_choi,
    kraus_to_super,
    minimal_kraus,
    reshuffle,
    super_to_choi,
    unvec,
    vec,
)
from .validation import CptpReport, validate_cptp
