//! Concatenated-code Hamiltonians, Kato perturbation series and pulse compilation.

pub mod analysis;
pub mod barrier;
pub mod codes;
pub mod error;
pub mod hamiltonian;
pub mod kato;
pub mod linalg;
pub mod pauli;
pub mod pulse;

pub use num_complex;

pub use analysis::{
    classical_failure_recursion, codeword, count_identity_processes, count_leakage_channel,
    count_report, order_parameter, suppression_curve, threshold, threshold_from_coefficients,
    threshold_root, vl_bound, CountReport, LeakageRule, OrderParameter, ThresholdReport,
};
pub use barrier::{energy_barrier, BarrierOptions, BarrierResult};
pub use codes::{
    five_qubit_code, nine_qubit_subsystem_code, preset, CodeParameters, Distance, GroupSpan,
    LookupDecoder, StabilizerCode, Syndrome, ValidationReport, Violation,
};
pub use error::{Error, Result};
pub use hamiltonian::{CodeHamiltonian, SpectrumLevel, SpectrumSummary, Structure, Term};
pub use kato::{
    EffectiveHamiltonianReport, KatoConfig, KatoEngine, LevelDecomposition, PerturbationSpec,
    PerturbationTerm,
};
pub use linalg::{CMat, LinearAction, PauliSum};
pub use pauli::{PauliAxis, PauliOperator};
pub use pulse::{
    circuit_unitary, compile_evolution, compile_hamiltonian_step, compile_logical_pauli,
    compile_pauli_exponential, Gate, LogicalPauli, PulseCircuit,
};
