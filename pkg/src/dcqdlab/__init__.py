"""dcqdlab: simulation laboratory for direct characterization of quantum dynamics.

Simulates open-system dynamics on small qubit registers and reconstructs
the process matrix chi either with the entanglement-assisted DCQD protocol
(Bell-type error-detecting measurements, 4**n configurations) or with the
standard process-tomography baseline (16**n configurations), with exact or
finite-shot statistics, a partial Bell-analyzer measurement model, and
joint T1/T2 estimation from a single Bell-state measurement.
"""

from .channels import (
    ChannelSpec,
    amplitude_damping,
    apply_channel,
    bit_flip,
    chi_from_kraus,
    compose,
    depolarizing,
    identity_channel,
    kraus_from_chi,
    kraus_from_spec,
    phase_damping,
    phase_flip,
    random_channel,
    rotation,
    validate_chi,
)
from .dcqd import (
    Configuration,
    OutcomeDistribution,
    ReconstructionResult,
    all_configurations,
    build_input_state,
    characterize,
    design_matrix,
    measurement_projectors,
    outcome_probabilities,
    reconstruct_coherence,
    reconstruct_population,
)
from .relax import RelaxEstimate, estimate_T1, estimate_T2, forward_model, joint_estimate
from .resources import resource_counts, resource_table
from .sampling import (
    CountsTable,
    OpticsModel,
    apply_optics_model,
    characterize_sampled,
    sample_counts,
)
from .sqpt import SqptResult, sqpt_characterize

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "Configuration",
    "CountsTable",
    "OpticsModel",
    "OutcomeDistribution",
    "ReconstructionResult",
    "RelaxEstimate",
    "SqptResult",
    "all_configurations",
    "amplitude_damping",
    "apply_channel",
    "apply_optics_model",
    "bit_flip",
    "build_input_state",
    "characterize",
    "characterize_sampled",
    "chi_from_kraus",
    "compose",
    "depolarizing",
    "design_matrix",
    "estimate_T1",
    "estimate_T2",
    "forward_model",
    "identity_channel",
    "joint_estimate",
    "kraus_from_chi",
    "kraus_from_spec",
    "measurement_projectors",
    "outcome_probabilities",
    "phase_damping",
    "phase_flip",
    "random_channel",
    "reconstruct_coherence",
    "reconstruct_population",
    "resource_counts",
    "resource_table",
    "rotation",
    "sample_counts",
    "sqpt_characterize",
    "validate_chi",
]
