"""Teleportation between single-rail and coherent-state optical qubits over
a lossy hybrid-entangled channel: closed forms, truncated-Fock simulation,
and a cross-verification suite."""

from .averaging import (CLASSICAL_LIMIT_FIDELITY, AverageResult, QuadratureSpec,
                        average_fidelity, average_fidelity_closed, bloch_average)
from .bell import (BsmOutcome, CoherentBellState, bsm_coherent, bsm_single_rail,
                   coherent_bell_states, parity_click_weights, single_rail_bell_state)
from .errors import (BackendOverflow, BasisMismatch, CutoffMismatch, DegenerateBasis,
                     HybridTeleError, ModeNotSingleRail, NonConvergent, ShapeMismatch,
                     TailTooLarge, TruncationLeakage, UnsupportedDirection)
from .fock import (DensityMatrix, FockState, beam_splitter, coherent_state, cutoff_for,
                   fidelity, number_state, partial_trace, project, tensor, trace_distance)
from .loss import LossParams, decohere_hybrid, kraus_loss, kraus_operators
from .states import (ChannelState, CoherentBasisOp, QubitCoeffs, coherent_qubit_norm,
                     coherent_qubit_vector, materialize, overlap, target_coherent_qubit)
from .sweep import PRESETS, SweepConfig, SweepRecord, preset_config, records_to_csv, run_sweep, write_csv
from .teleport import (Direction, OutcomeDetail, TeleportResult, dual_rail_oracle_c2p,
                       fidelity_closed_form, per_input_fidelity, success_prob,
                       teleport_c2s, teleport_s2c)
from .verify import CheckResult, run_verification

__version__ = "0.1.0"
