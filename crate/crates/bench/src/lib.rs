//! Fixtures shared by the benchmarks.

use tanglechain::{canonical_state, PureState, StateKind};

/// Seeded random states, `count` of them, on `n_qubits` qubits.
pub fn random_states(n_qubits: usize, count: usize) -> Vec<PureState> {
    (0..count as u64)
        .map(|seed| canonical_state(&StateKind::Random(1000 + seed), n_qubits).expect("valid size"))
        .collect()
}
