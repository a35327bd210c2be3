//! Polynomial local-unitary invariants of qubit pure states, built level by
//! level from two-qubit negativity fonts.
//!
//! * [`poly`]: exact sparse polynomials in state coefficients.
//! * [`fonts`]: font determinants, the degree-two building blocks.
//! * [`chain`]: invariant families, the combined invariants `I_{N,2k}`, norm
//!   quantities and the tangles `τ_3`, `τ_4`, `τ_5`.
//! * [`transvection`]: the same invariants as transvectants of binary forms.
//! * [`concurrence`], [`state`], [`io`], [`report`], [`verify`].
//!
//! ```
//! use tanglechain::{canonical_state, tangle, StateKind};
//! let ghz = canonical_state(&StateKind::Ghz, 4).unwrap();
//! assert!((tangle(&ghz).unwrap() - 1.0).abs() < 1e-10);
//! ```

pub mod chain;
pub mod concurrence;
pub mod error;
pub mod fonts;
pub mod io;
pub mod poly;
pub mod report;
pub mod state;
pub mod transvection;
pub mod verify;

pub use chain::{
    aggregate_norm, monogamy_residual, reduced_tangle, tangle, ChainConfig, EvalMode, InvariantChain,
    InvariantFamily, LevelAnalysis, NumericFamily, ReducedInvariant, ReducedTangle,
};
pub use concurrence::wootters_concurrence;
pub use error::{Error, Result};
pub use fonts::{font_determinant, FontSpec};
pub use io::{parse_state, read_state_file, write_state, write_state_file};
pub use poly::{CoeffPoly, Monomial, RationalComplex, VarId};
pub use report::{build_report, TangleReport};
pub use state::{
    apply_local_unitary, canonical_state, global_negativity, partial_trace, DensityMatrix, LocalUnitary,
    PureState, StateKind,
};
pub use transvection::{transvectant, BinaryForm};
pub use verify::{run_suite, Suite, SuiteResult, VerifyOptions};
