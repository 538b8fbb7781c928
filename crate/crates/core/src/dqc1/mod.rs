//! One-clean-qubit simulation: plain trace estimation of a unitary, and the
//! phase-estimation circuit whose compressed trace is `2 sum_j f(lambda_j)`.

mod baseline;
mod budget;
mod circuit;
mod estimate;

pub use baseline::{dqc1_trace_estimate, Readout, TraceEstimate};
pub use budget::{ancilla_count, audit_budget, AncillaAudit, PhaseEstimationBudget};
pub use circuit::{
    build_trace_f_circuit, build_trace_f_circuit_with, pe_amplitudes, phase_map, DQC1Program, Simulation,
};
pub use estimate::{
    estimate_schatten_trace, plan_schatten, readout_shots, run_trace_f, PowerKind, PreparedSchatten, PreparedTraceF,
    SchattenPlan, TraceFMode, TraceFOptions,
};

/// Ancilla audit for a built program.
pub fn audit_clean_qubits(program: &DQC1Program, config: &crate::config::Config) -> AncillaAudit {
    audit_budget(&program.budget, program.n_sys, config)
}
