"""Casimir forces, energies and free energies between partially
transmitting mirrors, computed from frequency-dependent scattering
amplitudes.

Natural units: hbar = c = k_B = 1 throughout.
"""

__version__ = "0.1.0"
