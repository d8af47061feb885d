"""Coupled Josephson-junction / acoustic-resonator simulator bindings."""

from ._core import (
    GHz,
    JunctionParams,
    ResonatorParams,
    SimulatorError,
    barrier_height,
    canonical_config,
    coupling_strength,
    diagonalize,
    meV,
    neV,
    plasma_frequency,
    protocol_config,
    pulse_phase,
    rabi_frequency,
    resonance_info,
    resonant_bias,
    resonator_derive,
    rwa_amplitudes,
    simulate_config,
    thermal_excited_probability,
    ueV,
)

__all__ = [
    "GHz",
    "JunctionParams",
    "ResonatorParams",
    "SimulatorError",
    "barrier_height",
    "canonical_config",
    "coupling_strength",
    "diagonalize",
    "meV",
    "neV",
    "plasma_frequency",
    "protocol_config",
    "pulse_phase",
    "rabi_frequency",
    "resonance_info",
    "resonant_bias",
    "resonator_derive",
    "rwa_amplitudes",
    "simulate_config",
    "thermal_excited_probability",
    "ueV",
]

__version__ = "1.0.0"
