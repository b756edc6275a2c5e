"""Simulation of soft quantum neural networks: mixed-state qubit neurons
coupled by controlled Kraus operations, with discord and DQC1 tooling."""

__version__ = "0.1.0"

from .channels import (
    KrausChannel,
    amplitude_damping,
    apply,
    choi,
    commutativity_gap,
    compose,
    custom_channel,
    depolarizing,
    lift,
    phase_damping,
)
from .discord import classify_classical_quantum, is_classically_correlated, mutual_information
from .dqc1 import dqc1_estimate
from .errors import ConfigError, NumericalInvariantError, ValidationError
from .linalg import eig_hermitian, partial_trace, tensor, trace_distance, von_neumann_entropy
from .network import (
    ControlledKrausEdge,
    LocalNoise,
    Neuron,
    SoftQuantumNetwork,
    controlled_kraus_apply,
    evolve,
    feedforward,
    product_formula_output,
    reduced_output,
    three_neuron_experiment,
    two_neuron_experiment,
)

__all__ = [
    "ConfigError",
    "ControlledKrausEdge",
    "KrausChannel",
    "LocalNoise",
    "Neuron",
    "NumericalInvariantError",
    "SoftQuantumNetwork",
    "ValidationError",
    "amplitude_damping",
    "apply",
    "choi",
    "classify_classical_quantum",
    "commutativity_gap",
    "compose",
    "controlled_kraus_apply",
    "custom_channel",
    "depolarizing",
    "dqc1_estimate",
    "eig_hermitian",
    "evolve",
    "feedforward",
    "is_classically_correlated",
    "lift",
    "mutual_information",
    "partial_trace",
    "phase_damping",
    "product_formula_output",
    "reduced_output",
    "tensor",
    "three_neuron_experiment",
    "trace_distance",
    "two_neuron_experiment",
    "von_neumann_entropy",
]
