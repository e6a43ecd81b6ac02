"""Dynamic nuclear polarization as an open quantum system.

Subpackages, lowest first: `quantum` (operators, Hamiltonians, states),
`channels` (Kraus, super and Choi forms), `dnp` (relaxation and ideal DNP
maps), `pulse` (on/off pulses and their optimization), `harness`
(buildup curves, angle maps, sweeps) and `cli`.
"""

__version__ = "0.1.0"
