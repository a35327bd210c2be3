use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::binomial_f64;
use crate::state::{apply_matrix, check_qubit, slice, LocalUnitary};

/// Largest condition number accepted for the node system.
pub const MAX_CONDITION: f64 = 1e10;

/// Members recovered from seed values on rotated slices.
#[derive(Clone, Debug)]
pub struct Interpolation {
    pub members: Vec<Complex64>,
    pub condition: f64,
}

/// Chebyshev points of the first kind on `[-1, 1]`.
pub fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * count) as f64).cos())
        .collect()
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Recovers the `k + 1` members of the family over qubit `q` from values of
/// the degree-`k` seed on the `i_q = 0` slice of `U(x) ψ` at real nodes `x`.
///
/// The rotated slice value is `(1 + x²)^{-k/2} Σ_m C(k,m) (-x)^m member_m`, so
/// the rescaled samples solve a Vandermonde system for `C(k,m) (-1)^m member_m`.
pub fn family_by_interpolation<F>(
    seed: F,
    amplitudes: &[Complex64],
    n_qubits: usize,
    q: usize,
    k: usize,
    nodes: &[f64],
) -> Result<Interpolation>
where
    F: Fn(&[Complex64]) -> Result<Complex64>,
{
    check_qubit(q, n_qubits)?;
    if amplitudes.len() != 1 << n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_qubits,
            found: amplitudes.len(),
        });
    }
    if nodes.len() != k + 1 {
        return Err(Error::IncompleteFamily {
            degree: k,
            found: nodes.len(),
        });
    }
    let vandermonde = DMatrix::from_fn(k + 1, k + 1, |j, m| nodes[j].powi(m as i32));
    let condition = condition_number(&vandermonde);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    let mut samples = DVector::<Complex64>::zeros(k + 1);
    let mut rotated = amplitudes.to_vec();
    for (j, &x) in nodes.iter().enumerate() {
        rotated.copy_from_slice(amplitudes);
        let u = LocalUnitary::from_parameter(q, Complex64::new(x, 0.0));
        apply_matrix(&mut rotated, n_qubits, q, u.matrix());
        let value = seed(&slice(&rotated, n_qubits, q, 0))?;
        samples[j] = value * (1.0 + x * x).powf(k as f64 / 2.0);
    }
    let lu = vandermonde.map(|v| Complex64::new(v, 0.0)).lu();
    let solved = lu
        .solve(&samples)
        .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    let members = (0..=k)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            solved[m] / (sign * binomial_f64(k, m))
        })
        .collect();
    Ok(Interpolation { members, condition })
}
