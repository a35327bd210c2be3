//! Serializable summaries of the chain quantities of one state.

use serde::{Deserialize, Serialize};

use crate::chain::{
    reduced_exponent, tangle_exponent, EvalMode, InvariantChain, ReducedInvariant, ReducedTangle,
    REDUCED_CLAMP,
};
use crate::concurrence::{concurrence_match_report, PairComparison};
use crate::error::Result;
use crate::state::{global_negativity, PureState};

pub const REPORT_FORMAT_VERSION: u32 = 1;

const EXPONENT_NOTE: &str = "reduced tangles enter as squares at levels 3 and 4 and as fourth powers at level 5; kept as defined, not harmonized";

/// Invariance tolerance: 1e-9 through four qubits, 1e-6 at five.
pub fn default_tolerance(level: usize) -> f64 {
    if level <= 4 {
        1e-9
    } else {
        1e-6
    }
}

/// Bound on the monogamy residual at each level.
pub fn monogamy_tolerance(level: usize) -> f64 {
    match level {
        0..=3 => 1e-10,
        4 => 1e-9,
        _ => 1e-7,
    }
}

fn pair(z: num_complex::Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub dropped_qubit: usize,
    pub members: Vec<[f64; 2]>,
    pub norm_quantity: f64,
    pub invariant: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub invariance: f64,
    pub monogamy: f64,
    pub reduced_clamp: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    /// Degree `2k` of `I_{N,2k}`.
    pub degree: usize,
    pub invariant: [f64; 2],
    pub invariant_abs: f64,
    pub tangle: f64,
    pub tangle_exponent: u32,
    pub aggregate_norm: f64,
    /// `global_negativity` of the anchor qubit.
    pub anchor_negativity: f64,
    pub families: Vec<FamilyReport>,
    /// Largest minus smallest `|I|` over the dropped-qubit choices.
    pub choice_spread: f64,
    pub reduced_tangles: Vec<ReducedTangle>,
    pub reduced_exponent: u32,
    pub exponent_note: String,
    pub monogamy_residual: f64,
    pub monogamy_ok: bool,
    pub consistent: bool,
    pub interpolation_condition: Option<f64>,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationEcho {
    pub level: usize,
    pub used: f64,
    /// `1 / Σ 𝒩` on the GHZ state of this level.
    pub ghz_check: f64,
    pub fixed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    /// Seed scalings at levels 3, 4, 5 as exact rationals.
    pub scalings: Vec<String>,
    pub normalization: Vec<NormalizationEcho>,
    pub modes: Vec<EvalMode>,
    pub anchor: usize,
    pub term_cap: usize,
    pub reduced_invariant: ReducedInvariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangleReport {
    pub format_version: u32,
    pub n_qubits: usize,
    pub state: Option<String>,
    pub levels: Vec<LevelReport>,
    pub config: ConfigEcho,
    /// Concurrence checks, three-qubit states only.
    pub concurrence: Option<Vec<PairComparison>>,
}

impl TangleReport {
    pub fn is_consistent(&self) -> bool {
        self.levels.iter().all(|l| l.consistent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn config_echo(chain: &InvariantChain) -> ConfigEcho {
    let cfg = chain.config();
    ConfigEcho {
        scalings: cfg.scalings.iter().map(|s| s.to_string()).collect(),
        normalization: (3..=5)
            .map(|level| NormalizationEcho {
                level,
                used: chain.normalization(level).expect("supported level"),
                ghz_check: chain.ghz_normalization(level).expect("supported level"),
                fixed: cfg.normalization[level - 3].is_some(),
            })
            .collect(),
        modes: cfg.modes.to_vec(),
        anchor: cfg.anchor,
        term_cap: cfg.term_cap,
        reduced_invariant: cfg.reduced_invariant,
    }
}

pub fn level_report(chain: &InvariantChain, state: &PureState) -> Result<LevelReport> {
    let a = chain.analyze(state)?;
    let n = a.level;
    let monogamy = monogamy_tolerance(n);
    Ok(LevelReport {
        level: n,
        degree: 2 * a.seed_degree,
        invariant: pair(a.invariant),
        invariant_abs: a.invariant.norm(),
        tangle: a.tangle,
        tangle_exponent: tangle_exponent(n)?,
        aggregate_norm: a.aggregate_norm,
        anchor_negativity: global_negativity(state, chain.config().anchor)?,
        families: a
            .families
            .iter()
            .zip(&a.invariant_by_choice)
            .map(|(f, i)| FamilyReport {
                dropped_qubit: f.qubit(),
                members: f.members().iter().copied().map(pair).collect(),
                norm_quantity: f.norm_quantity(),
                invariant: pair(*i),
            })
            .collect(),
        choice_spread: a.choice_spread(),
        reduced_tangles: a.reduced.clone(),
        reduced_exponent: reduced_exponent(n)?,
        exponent_note: EXPONENT_NOTE.to_string(),
        monogamy_residual: a.monogamy_residual,
        monogamy_ok: a.monogamy_residual < monogamy,
        consistent: a.check_consistency().is_ok(),
        interpolation_condition: a.interpolation_condition,
        tolerances: Tolerances {
            invariance: default_tolerance(n),
            monogamy,
            reduced_clamp: REDUCED_CLAMP,
        },
    })
}

/// Full report for a state of 3 to 5 qubits.
pub fn build_report(chain: &InvariantChain, state: &PureState, label: Option<String>) -> Result<TangleReport> {
    let level = level_report(chain, state)?;
    let concurrence = if state.n_qubits() == 3 && level.consistent {
        Some(concurrence_match_report(chain, state)?)
    } else {
        None
    };
    Ok(TangleReport {
        format_version: REPORT_FORMAT_VERSION,
        n_qubits: state.n_qubits(),
        state: label,
        levels: vec![level],
        config: config_echo(chain),
        concurrence,
    })
}
