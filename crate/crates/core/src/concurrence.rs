//! Wootters concurrence of two-qubit density matrices, and its comparison
//! with the two-way reduced tangle of three-qubit pure states.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::InvariantChain;
use crate::error::{Error, Result};
use crate::state::{partial_trace, DensityMatrix, PureState};

/// Density-matrix eigenvalues below this are corrupt input.
const NEGATIVE_EIGENVALUE: f64 = -1e-8;
/// Density-matrix eigenvalues below this are treated as zero.
const RANK_CUTOFF: f64 = 1e-14;
/// Tolerance of the concurrence/tangle comparison.
pub const MATCH_TOLERANCE: f64 = 1e-8;

fn psd_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = SymmetricEigen::new(m.clone());
    if let Some(l) = eig.eigenvalues.iter().find(|&&l| l < NEGATIVE_EIGENVALUE) {
        return Err(Error::InvalidDensityMatrix(format!("eigenvalue {l:e}")));
    }
    let roots = eig
        .eigenvalues
        .map(|l| if l < RANK_CUTOFF { 0.0 } else { l.sqrt() });
    let v = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&roots.map(|r| Complex64::new(r, 0.0)));
    Ok(v * d * v.adjoint())
}

/// `max(0, s1 - s2 - s3 - s4)` where `s_i` are the square roots of the
/// eigenvalues of `ρ ρ̃`, `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`, in decreasing order. They
/// are computed as singular values of `√ρ √ρ̃`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    if m.nrows() != 4 {
        return Err(Error::InvalidDensityMatrix(format!(
            "need a two-qubit matrix, got dimension {}",
            m.nrows()
        )));
    }
    let sqrt_rho = psd_sqrt(m)?;
    // σy⊗σy is the anti-diagonal (-1, 1, 1, -1) pattern; conjugation by it
    // maps entry (i, j) to sign(i) sign(j) conj(entry (3-i, 3-j)).
    let sign = |i: usize| if i == 0 || i == 3 { -1.0 } else { 1.0 };
    let sqrt_tilde = DMatrix::from_fn(4, 4, |i, j| sqrt_rho[(3 - i, 3 - j)].conj() * (sign(i) * sign(j)));
    let mut s: Vec<f64> = (&sqrt_rho * &sqrt_tilde)
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Concurrence of the pair `(A1, A_j)` against `τ_{2,2}` with `A_k` dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub pair: [usize; 2],
    pub concurrence: f64,
    pub reduced_tangle: f64,
    pub deviation: f64,
    pub pass: bool,
}

/// Both pairs containing qubit 1 of a three-qubit state.
pub fn concurrence_match_report(chain: &InvariantChain, state: &PureState) -> Result<Vec<PairComparison>> {
    if state.n_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: state.amplitudes().len(),
        });
    }
    [[1, 2], [1, 3]]
        .into_iter()
        .map(|pair| {
            let dropped = 6 - pair[0] - pair[1];
            let concurrence = wootters_concurrence(&partial_trace(state, &pair)?)?;
            let reduced_tangle = chain.reduced_tangle(state, dropped)?;
            let deviation = (concurrence - reduced_tangle).abs();
            Ok(PairComparison {
                pair,
                concurrence,
                reduced_tangle,
                deviation,
                pass: deviation < MATCH_TOLERANCE,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{apply_local_unitary, canonical_state, random_su2_with, StateKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn projector(state: &PureState) -> DensityMatrix {
        DensityMatrix::from_pure(state)
    }

    /// Direct evaluation of the textbook formula through a general
    /// eigensolver on the explicit 4×4 product, for comparison.
    fn by_eigenvalues(rho: &DensityMatrix) -> f64 {
        let m = rho.matrix();
        let y = DMatrix::from_fn(4, 4, |i, j| {
            let v = match (i, j) {
                (0, 3) | (3, 0) => -1.0,
                (1, 2) | (2, 1) => 1.0,
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        });
        let tilde = &y * m.map(|z| z.conj()) * &y;
        let prod = m * tilde;
        let eig = prod.schur().eigenvalues().unwrap();
        let mut l: Vec<f64> = eig.iter().map(|z| z.re.max(0.0).sqrt()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn bell_and_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let bell = PureState::new(2, vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]).unwrap();
        assert!((wootters_concurrence(&projector(&bell)).unwrap() - 1.0).abs() < 1e-12);
        let prod = canonical_state(&StateKind::Basis("01".into()), 2).unwrap();
        assert!(wootters_concurrence(&projector(&prod)).unwrap() < 1e-12);
    }

    #[test]
    fn reduced_w_pair() {
        let w = canonical_state(&StateKind::W, 3).unwrap();
        let rho = partial_trace(&w, &[1, 2]).unwrap();
        assert!((wootters_concurrence(&rho).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((by_eigenvalues(&rho) - 2.0 / 3.0).abs() < 1e-6);
        let ghz = canonical_state(&StateKind::Ghz, 3).unwrap();
        assert!(wootters_concurrence(&partial_trace(&ghz, &[1, 3]).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_wrong_size() {
        let s = canonical_state(&StateKind::Ghz, 3).unwrap();
        assert!(wootters_concurrence(&projector(&s)).is_err());
        assert!(wootters_concurrence(&partial_trace(&s, &[1]).unwrap()).is_err());
    }

    #[test]
    fn agrees_with_eigenvalue_route_on_full_rank_states() {
        // Mixtures of random pure-state reductions of four qubits have rank 4.
        for seed in 0..20 {
            let s = canonical_state(&StateKind::Random(seed), 4).unwrap();
            let rho = partial_trace(&s, &[1, 2]).unwrap();
            let a = wootters_concurrence(&rho).unwrap();
            let b = by_eigenvalues(&rho);
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn lu_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..20 {
            let s = canonical_state(&StateKind::Random(seed), 3).unwrap();
            let before = wootters_concurrence(&partial_trace(&s, &[1, 2]).unwrap()).unwrap();
            let mut t = s.clone();
            for q in 1..=3 {
                t = apply_local_unitary(&t, &random_su2_with(&mut rng, q)).unwrap();
            }
            let after = wootters_concurrence(&partial_trace(&t, &[1, 2]).unwrap()).unwrap();
            assert!((before - after).abs() < 1e-10);
        }
    }

    #[test]
    fn matches_reduced_tangle() {
        let chain = InvariantChain::shared();
        for seed in 0..50 {
            let s = canonical_state(&StateKind::Random(seed), 3).unwrap();
            for cmp in concurrence_match_report(chain, &s).unwrap() {
                assert!(cmp.pass, "seed {seed}: {cmp:?}");
            }
        }
        let w = canonical_state(&StateKind::W, 3).unwrap();
        for cmp in concurrence_match_report(chain, &w).unwrap() {
            assert!((cmp.concurrence - 2.0 / 3.0).abs() < 1e-12);
            assert!((cmp.reduced_tangle - 2.0 / 3.0).abs() < 1e-12);
        }
    }
}
