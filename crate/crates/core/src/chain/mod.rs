//! The sequential invariant chain.
//!
//! Starting from `I_{2,2} = D^{00}`, each level `N` extends the degree-`k`
//! invariant of `N - 1` qubits to a family of `k + 1` invariants indexed by
//! the new qubit, and combines the family into
//!
//! * `I_{N,2k} = ½ Σ_m (-1)^m C(k,m) member_m member_{k-m}`, and
//! * `𝒩 = Σ_m C(k,m) |member_m|²`.
//!
//! With the anchor qubit fixed (qubit 1 by default) every other qubit can play
//! the role of the new one. The N-way tangle comes from `|I_{N,2k}|`, the
//! aggregate from the `𝒩` values, and the reduced tangles from their
//! differences.

mod family;
mod interpolate;
mod zeroing;

pub use family::{
    combine_exact, combine_members, extend_family, norm_quantity, seed_i22, InvariantFamily,
    NumericFamily,
};
pub use interpolate::{chebyshev_nodes, condition_number, family_by_interpolation, Interpolation, MAX_CONDITION};
pub use zeroing::{eval_poly, polynomial_roots, zeroing_unitary, Zeroing};

use std::borrow::Cow;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{CoeffPoly, DEFAULT_TERM_CAP};
use crate::state::{canonical_state, swap_qubits, PureState, StateKind};

/// Lowest and highest chain level.
pub const MIN_LEVEL: usize = 3;
pub const MAX_LEVEL: usize = 5;

/// Reduced-tangle powers within `REDUCED_CLAMP` of zero are set to zero;
/// more negative ones are flagged.
pub const REDUCED_CLAMP: f64 = 1e-10;

/// How member values are obtained at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Evaluate the expanded member polynomials.
    Symbolic,
    /// Recover members from seed values on rotated slices.
    Interpolated,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Self::Symbolic),
            "interpolated" => Ok(Self::Interpolated),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

fn slot(level: usize) -> Result<usize> {
    if (MIN_LEVEL..=MAX_LEVEL).contains(&level) {
        Ok(level - MIN_LEVEL)
    } else {
        Err(Error::UnsupportedLevel(level))
    }
}

/// Degree `k` of the seed used at `level`.
pub fn seed_degree(level: usize) -> usize {
    1 << (level - 2)
}

/// Power of the tangle fixed by `|I_{N,2k}|`: `τ3`, `τ4²`, `τ5⁴`.
pub fn tangle_exponent(level: usize) -> Result<u32> {
    Ok([1, 2, 4][slot(level)?])
}

/// Power of the reduced tangle fixed by `𝒩 - 2|I|`: `τ_{2,2}²`, `τ_{3,4}²`, `τ_{4,4}⁴`.
pub fn reduced_exponent(level: usize) -> Result<u32> {
    Ok([2, 2, 4][slot(level)?])
}

/// Which `|I_{N,2k}|` enters the reduced tangle after dropping qubit `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReducedInvariant {
    /// The invariant built over the last qubit, as in the monogamy equalities.
    Canonical,
    /// The invariant built from the same family as `𝒩_q`; never exceeds `𝒩_q / 2`.
    SameChoice,
}

impl std::str::FromStr for ReducedInvariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Self::Canonical),
            "same-choice" => Ok(Self::SameChoice),
            other => Err(Error::Parse(format!("unknown reduced invariant `{other}`"))),
        }
    }
}

/// Settings of the chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    /// Factor multiplying the seed at levels 3, 4 and 5.
    pub scalings: [BigRational; 3],
    /// Evaluation mode at levels 3, 4 and 5.
    pub modes: [EvalMode; 3],
    /// `C_N` at levels 3, 4 and 5; `None` means "derive from the GHZ state".
    pub normalization: [Option<f64>; 3],
    /// Qubit whose partial transpose defines the fonts.
    pub anchor: usize,
    /// Monomial cap for symbolic products.
    pub term_cap: usize,
    pub reduced_invariant: ReducedInvariant,
}

impl Default for ChainConfig {
    fn default() -> Self {
        let int = |n: i64| BigRational::from_integer(n.into());
        Self {
            scalings: [int(1), int(4), int(1)],
            modes: [EvalMode::Symbolic, EvalMode::Symbolic, EvalMode::Interpolated],
            normalization: [Some(4.0), Some(32.0), None],
            anchor: 1,
            term_cap: DEFAULT_TERM_CAP,
            reduced_invariant: ReducedInvariant::Canonical,
        }
    }
}

impl ChainConfig {
    pub fn scaling(&self, level: usize) -> Result<&BigRational> {
        Ok(&self.scalings[slot(level)?])
    }

    pub fn mode(&self, level: usize) -> Result<EvalMode> {
        Ok(self.modes[slot(level)?])
    }

    pub fn with_mode(mut self, level: usize, mode: EvalMode) -> Result<Self> {
        self.modes[slot(level)?] = mode;
        Ok(self)
    }

    pub fn with_all_modes(mut self, mode: EvalMode) -> Self {
        self.modes = [mode; 3];
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scalings.iter().any(|s| *s == BigRational::from_integer(0.into())) {
            return Err(Error::InvalidState("seed scalings must be nonzero".into()));
        }
        if self.anchor == 0 || self.anchor > MAX_LEVEL {
            return Err(Error::QubitOutOfRange {
                qubit: self.anchor,
                n_qubits: MAX_LEVEL,
            });
        }
        if let Some(c) = self.normalization.iter().flatten().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::InvalidState(format!("normalization {c} must be positive")));
        }
        Ok(())
    }
}

/// One reduced tangle, obtained by dropping a qubit other than the anchor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedTangle {
    pub dropped_qubit: usize,
    /// The `N - 1` qubits of the reduced state.
    pub subsystem: Vec<usize>,
    pub exponent: u32,
    /// `C_N (𝒩_q - 2|I|)` before clamping.
    pub raw_power: f64,
    /// `value^exponent`, the raw power with the clamp band mapped to zero.
    pub power: f64,
    pub value: f64,
    /// Raw power below `-REDUCED_CLAMP`.
    pub violation: bool,
}

/// Everything the chain yields for one state at its own level.
#[derive(Clone, Debug)]
pub struct LevelAnalysis {
    pub level: usize,
    pub seed_degree: usize,
    pub families: Vec<NumericFamily>,
    /// `I_{N,2k}` from the family over the last non-anchor qubit.
    pub invariant: Complex64,
    /// `I_{N,2k}` from each family, in the order of `families`.
    pub invariant_by_choice: Vec<Complex64>,
    pub norms: Vec<f64>,
    pub aggregate_norm: f64,
    pub tangle: f64,
    pub reduced: Vec<ReducedTangle>,
    pub monogamy_residual: f64,
    /// Largest node-system condition number, when interpolation was used.
    pub interpolation_condition: Option<f64>,
}

impl LevelAnalysis {
    pub fn violations(&self) -> impl Iterator<Item = &ReducedTangle> {
        self.reduced.iter().filter(|r| r.violation)
    }

    /// Error describing the first reduced-tangle violation, if any.
    pub fn check_consistency(&self) -> Result<()> {
        match self.violations().next() {
            Some(r) => Err(Error::Consistency(format!(
                "reduced tangle power {:e} negative for dropped qubit {}",
                r.raw_power, r.dropped_qubit
            ))),
            None => Ok(()),
        }
    }

    /// Spread of `|I|` over the choices of dropped qubit.
    pub fn choice_spread(&self) -> f64 {
        let mods = self.invariant_by_choice.iter().map(|c| c.norm());
        let (lo, hi) = mods.fold((f64::INFINITY, 0.0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
        hi - lo
    }
}

/// Symbolic data of the chain plus the numeric machinery built on it.
#[derive(Debug)]
pub struct InvariantChain {
    config: ChainConfig,
    i22: CoeffPoly,
    i34: CoeffPoly,
    i48: CoeffPoly,
    families3: Vec<InvariantFamily>,
    families4: Vec<InvariantFamily>,
    families5: OnceLock<Vec<InvariantFamily>>,
    i516: OnceLock<CoeffPoly>,
    normalization: [f64; 3],
    ghz_normalization: [f64; 3],
}

fn families_for(seed: &CoeffPoly, level: usize, scaling: &BigRational) -> Result<Vec<InvariantFamily>> {
    (2..=level).map(|q| extend_family(seed, q, scaling)).collect()
}

impl InvariantChain {
    pub fn new(config: ChainConfig) -> Result<Self> {
        config.validate()?;
        let i22 = seed_i22();
        let families3 = families_for(&i22, 3, &config.scalings[0])?;
        let i34 = families3[1].combine_capped(config.term_cap)?;
        let families4 = families_for(&i34, 4, &config.scalings[1])?;
        let i48 = families4[2].combine_capped(config.term_cap)?;
        let mut chain = Self {
            config,
            i22,
            i34,
            i48,
            families3,
            families4,
            families5: OnceLock::new(),
            i516: OnceLock::new(),
            normalization: [0.0; 3],
            ghz_normalization: [0.0; 3],
        };
        for level in MIN_LEVEL..=MAX_LEVEL {
            let ghz = canonical_state(&StateKind::Ghz, level)?;
            let total: f64 = chain
                .families_raw(ghz.amplitudes(), level)?
                .0
                .iter()
                .map(NumericFamily::norm_quantity)
                .sum();
            if total <= 0.0 {
                return Err(Error::Consistency(format!("GHZ sum vanishes at level {level}")));
            }
            let i = level - MIN_LEVEL;
            chain.ghz_normalization[i] = 1.0 / total;
            chain.normalization[i] = chain.config.normalization[i].unwrap_or(1.0 / total);
        }
        Ok(chain)
    }

    /// A process-wide chain with the default configuration.
    pub fn shared() -> &'static InvariantChain {
        static CHAIN: OnceLock<InvariantChain> = OnceLock::new();
        CHAIN.get_or_init(|| InvariantChain::new(ChainConfig::default()).expect("default chain builds"))
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    /// `C_N` in use.
    pub fn normalization(&self, level: usize) -> Result<f64> {
        Ok(self.normalization[slot(level)?])
    }

    /// `1 / Σ_q 𝒩_q` on the `level`-qubit GHZ state.
    pub fn ghz_normalization(&self, level: usize) -> Result<f64> {
        Ok(self.ghz_normalization[slot(level)?])
    }

    /// `I_{N-1}` before scaling, the seed of `level`.
    pub fn seed_polynomial(&self, level: usize) -> Result<&CoeffPoly> {
        Ok(match slot(level)? {
            0 => &self.i22,
            1 => &self.i34,
            _ => &self.i48,
        })
    }

    /// Symbolic families of `level`, over qubits `2..=level` in order.
    pub fn symbolic_families(&self, level: usize) -> Result<&[InvariantFamily]> {
        Ok(match slot(level)? {
            0 => &self.families3,
            1 => &self.families4,
            _ => {
                if self.families5.get().is_none() {
                    let fams = families_for(&self.i48, 5, &self.config.scalings[2])?;
                    let _ = self.families5.set(fams);
                }
                self.families5.get().expect("just set")
            }
        })
    }

    pub fn symbolic_family(&self, level: usize, q: usize) -> Result<&InvariantFamily> {
        let fams = self.symbolic_families(level)?;
        q.checked_sub(2)
            .and_then(|i| fams.get(i))
            .ok_or(Error::QubitOutOfRange { qubit: q, n_qubits: level })
    }

    /// `I_{N,2k}` as a polynomial. Level 5 is expanded on demand and may hit
    /// the term cap.
    pub fn invariant_polynomial(&self, level: usize) -> Result<&CoeffPoly> {
        match level {
            2 => Ok(&self.i22),
            3 => Ok(&self.i34),
            4 => Ok(&self.i48),
            5 => {
                if let Some(p) = self.i516.get() {
                    return Ok(p);
                }
                let p = self.symbolic_family(5, 5)?.combine_capped(self.config.term_cap)?;
                let _ = self.i516.set(p);
                Ok(self.i516.get().expect("just set"))
            }
            other => Err(Error::UnsupportedLevel(other)),
        }
    }

    /// `I_n` on a raw amplitude vector, qubit 1 as anchor.
    fn invariant_raw(&self, amplitudes: &[Complex64], n: usize) -> Result<Complex64> {
        match n {
            2 => Ok(self.i22.evaluate_amplitudes(amplitudes)),
            3 | 4 if self.config.mode(n)? == EvalMode::Symbolic => {
                let poly = if n == 3 { &self.i34 } else { &self.i48 };
                Ok(poly.evaluate_amplitudes(amplitudes))
            }
            _ => Ok(self.family_raw(amplitudes, n, n)?.0.combine()),
        }
    }

    fn family_raw(&self, amplitudes: &[Complex64], n: usize, q: usize) -> Result<(NumericFamily, Option<f64>)> {
        match self.config.mode(n)? {
            EvalMode::Symbolic => Ok((self.symbolic_family(n, q)?.evaluate_amplitudes(amplitudes), None)),
            EvalMode::Interpolated => {
                let k = seed_degree(n);
                let scaling = self
                    .config
                    .scaling(n)?
                    .to_f64()
                    .ok_or_else(|| Error::Numerical("scaling out of f64 range".into()))?;
                let seed = |v: &[Complex64]| Ok(self.invariant_raw(v, n - 1)? * scaling);
                let interp = family_by_interpolation(seed, amplitudes, n, q, k, &chebyshev_nodes(k + 1))?;
                Ok((NumericFamily::new(n, q, k, interp.members)?, Some(interp.condition)))
            }
        }
    }

    fn families_raw(&self, amplitudes: &[Complex64], n: usize) -> Result<(Vec<NumericFamily>, Option<f64>)> {
        let mut out = Vec::with_capacity(n - 1);
        let mut cond: Option<f64> = None;
        for q in 2..=n {
            let (fam, c) = self.family_raw(amplitudes, n, q)?;
            if let Some(c) = c {
                cond = Some(cond.map_or(c, |x| x.max(c)));
            }
            out.push(fam);
        }
        Ok((out, cond))
    }

    /// The state with the anchor moved to qubit 1.
    fn oriented<'a>(&self, state: &'a PureState) -> Result<Cow<'a, PureState>> {
        let n = state.n_qubits();
        slot(n)?;
        if self.config.anchor == 1 {
            Ok(Cow::Borrowed(state))
        } else if self.config.anchor > n {
            Err(Error::QubitOutOfRange {
                qubit: self.config.anchor,
                n_qubits: n,
            })
        } else {
            Ok(Cow::Owned(swap_qubits(state, 1, self.config.anchor)?))
        }
    }

    /// Qubit label after moving the anchor to position 1.
    fn relabel(&self, q: usize) -> usize {
        let a = self.config.anchor;
        if q == 1 {
            a
        } else if q == a {
            1
        } else {
            q
        }
    }

    /// Qubits that can be dropped, i.e. all but the anchor, ascending.
    pub fn dropped_qubits(&self, n_qubits: usize) -> Vec<usize> {
        (1..=n_qubits).filter(|&q| q != self.config.anchor).collect()
    }

    /// The family over qubit `q` (any qubit except the anchor).
    pub fn family(&self, state: &PureState, q: usize) -> Result<NumericFamily> {
        let n = state.n_qubits();
        if q == 0 || q > n || q == self.config.anchor {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits: n });
        }
        let s = self.oriented(state)?;
        let (fam, _) = self.family_raw(s.amplitudes(), n, self.relabel(q))?;
        NumericFamily::new(n, q, fam.degree(), fam.members().to_vec())
    }

    /// `I_{N,2k}` of an `N`-qubit state, `N` in `3..=5`.
    pub fn invariant(&self, state: &PureState) -> Result<Complex64> {
        let s = self.oriented(state)?;
        self.invariant_raw(s.amplitudes(), state.n_qubits())
    }

    pub fn tangle(&self, state: &PureState) -> Result<f64> {
        let n = state.n_qubits();
        let i = self.invariant(state)?.norm();
        self.tangle_from(n, i)
    }

    fn tangle_from(&self, n: usize, invariant_abs: f64) -> Result<f64> {
        let power = self.normalization(n)? * 2.0 * (n as f64 - 1.0) * invariant_abs;
        Ok(power.powf(1.0 / tangle_exponent(n)? as f64))
    }

    fn reduced_from(&self, n: usize, q: usize, norm: f64, invariant_abs: f64) -> Result<ReducedTangle> {
        let exponent = reduced_exponent(n)?;
        let raw_power = self.normalization(n)? * (norm - 2.0 * invariant_abs);
        // Powers within the clamp band of zero are roundoff; fourth roots
        // would blow them up to ~1e-3.
        let power = if raw_power.abs() < REDUCED_CLAMP { 0.0 } else { raw_power.max(0.0) };
        Ok(ReducedTangle {
            dropped_qubit: q,
            subsystem: (1..=n).filter(|&p| p != q).collect(),
            exponent,
            raw_power,
            power,
            value: power.powf(1.0 / exponent as f64),
            violation: raw_power < -REDUCED_CLAMP,
        })
    }

    /// `C_N Σ_q 𝒩_q` over all non-anchor qubits.
    pub fn aggregate_norm(&self, state: &PureState) -> Result<f64> {
        let n = state.n_qubits();
        let s = self.oriented(state)?;
        let (fams, _) = self.families_raw(s.amplitudes(), n)?;
        let total: f64 = fams.iter().map(NumericFamily::norm_quantity).sum();
        Ok(self.normalization(n)? * total)
    }

    /// Tangle of the `N - 1` qubits left after dropping `q`. Fails with
    /// [`Error::Consistency`] when its power is below `-REDUCED_CLAMP`.
    pub fn reduced_tangle(&self, state: &PureState, q: usize) -> Result<f64> {
        let n = state.n_qubits();
        let fam = self.family(state, q)?;
        let i = match self.config.reduced_invariant {
            ReducedInvariant::Canonical => self.invariant(state)?.norm(),
            ReducedInvariant::SameChoice => fam.combine().norm(),
        };
        let r = self.reduced_from(n, q, fam.norm_quantity(), i)?;
        if r.violation {
            return Err(Error::Consistency(format!(
                "reduced tangle power {:e} negative for dropped qubit {q}",
                r.raw_power
            )));
        }
        Ok(r.value)
    }

    /// `|aggregate - τ^p - Σ_q raw reduced power|`.
    pub fn monogamy_residual(&self, state: &PureState) -> Result<f64> {
        Ok(self.analyze(state)?.monogamy_residual)
    }

    /// All level quantities at once.
    pub fn analyze(&self, state: &PureState) -> Result<LevelAnalysis> {
        let n = state.n_qubits();
        let s = self.oriented(state)?;
        let (raw, cond) = self.families_raw(s.amplitudes(), n)?;
        let dropped = self.dropped_qubits(n);
        // Family over internal qubit r belongs to original qubit relabel(r).
        let mut families: Vec<NumericFamily> = raw
            .into_iter()
            .map(|f| NumericFamily::new(n, self.relabel(f.qubit()), f.degree(), f.members().to_vec()))
            .collect::<Result<_>>()?;
        families.sort_by_key(NumericFamily::qubit);
        debug_assert_eq!(families.iter().map(|f| f.qubit()).collect::<Vec<_>>(), dropped);

        let internal_last = families
            .iter()
            .position(|f| self.relabel(f.qubit()) == n)
            .expect("qubit n is never the anchor after orientation");
        let invariant_by_choice: Vec<Complex64> = families.iter().map(NumericFamily::combine).collect();
        let invariant = invariant_by_choice[internal_last];
        let i_abs = invariant.norm();
        let norms: Vec<f64> = families.iter().map(NumericFamily::norm_quantity).collect();
        let c = self.normalization(n)?;
        let aggregate_norm = c * norms.iter().sum::<f64>();
        let tangle = self.tangle_from(n, i_abs)?;
        let reduced = families
            .iter()
            .zip(&norms)
            .zip(&invariant_by_choice)
            .map(|((f, &nq), own)| {
                let i = match self.config.reduced_invariant {
                    ReducedInvariant::Canonical => i_abs,
                    ReducedInvariant::SameChoice => own.norm(),
                };
                self.reduced_from(n, f.qubit(), nq, i)
            })
            .collect::<Result<Vec<_>>>()?;
        let tangle_power = c * 2.0 * (n as f64 - 1.0) * i_abs;
        let reduced_sum: f64 = reduced.iter().map(|r| r.raw_power).sum();
        let monogamy_residual = (aggregate_norm - tangle_power - reduced_sum).abs();
        Ok(LevelAnalysis {
            level: n,
            seed_degree: seed_degree(n),
            families,
            invariant,
            invariant_by_choice,
            norms,
            aggregate_norm,
            tangle,
            reduced,
            monogamy_residual,
            interpolation_condition: cond,
        })
    }

    /// Unitary on `q` that zeroes member 0 of the family over `q`.
    pub fn zeroing_unitary(&self, state: &PureState, q: usize) -> Result<Zeroing> {
        zeroing_unitary(self.family(state, q)?.members(), q)
    }
}

/// Default-chain shorthand for [`InvariantChain::tangle`].
pub fn tangle(state: &PureState) -> Result<f64> {
    InvariantChain::shared().tangle(state)
}

/// Default-chain shorthand for [`InvariantChain::aggregate_norm`].
pub fn aggregate_norm(state: &PureState) -> Result<f64> {
    InvariantChain::shared().aggregate_norm(state)
}

/// Default-chain shorthand for [`InvariantChain::reduced_tangle`].
pub fn reduced_tangle(state: &PureState, q: usize) -> Result<f64> {
    InvariantChain::shared().reduced_tangle(state, q)
}

/// Default-chain shorthand for [`InvariantChain::monogamy_residual`].
pub fn monogamy_residual(state: &PureState) -> Result<f64> {
    InvariantChain::shared().monogamy_residual(state)
}

