use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::binomial_f64;
use crate::state::LocalUnitary;

/// Coefficients below this fraction of the largest one are treated as zero.
const COLLAPSE_RELATIVE: f64 = 1e-12;

/// Unitary on the extended qubit that makes member 0 vanish.
#[derive(Clone, Debug)]
pub struct Zeroing {
    pub unitary: LocalUnitary,
    /// Root `z = x*` used, `None` for the identity or the flip.
    pub root: Option<Complex64>,
    /// `|P(z)| / (1 + |z|²)^{k/2}`, the size of the new member 0.
    pub residual: f64,
}

/// Horner evaluation of `Σ c_i z^i`.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of `Σ c_i z^i` (ascending coefficients, nonzero leading term) from
/// the companion matrix, each refined by a few Newton steps.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(Error::Numerical("leading coefficient is zero".into()));
    }
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let eigen = companion
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("companion eigenvalues did not converge".into()))?;
    let derivative: Vec<Complex64> = (1..=degree).map(|i| coeffs[i] * i as f64).collect();
    Ok(eigen
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..4 {
                let d = eval_poly(&derivative, z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = eval_poly(coeffs, z) / d;
                if !step.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect())
}

/// Solves `P(z) = Σ_μ C(k,μ) (-z)^μ member_μ = 0` and returns `U(x)` with
/// `x = z*` on `qubit`. The root of smallest modulus is used, ties broken by
/// smallest argument.
pub fn zeroing_unitary(members: &[Complex64], qubit: usize) -> Result<Zeroing> {
    let k = members
        .len()
        .checked_sub(1)
        .ok_or(Error::IncompleteFamily { degree: 0, found: 0 })?;
    let coeffs: Vec<Complex64> = members
        .iter()
        .enumerate()
        .map(|(mu, c)| c * binomial_f64(k, mu) * if mu % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Zeroing {
            unitary: LocalUnitary::identity(qubit),
            root: None,
            residual: 0.0,
        });
    }
    let mut top = k;
    while coeffs[top].norm() <= COLLAPSE_RELATIVE * scale {
        top -= 1;
    }
    if top == 0 {
        // Only member 0 survives: the bit flip moves it onto the vanishing member k.
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let flip = LocalUnitary::new(qubit, Matrix2::new(zero, -one, one, zero))?;
        return Ok(Zeroing {
            unitary: flip,
            root: None,
            residual: members[k].norm(),
        });
    }
    let roots = polynomial_roots(&coeffs[..=top])?;
    let z = roots
        .into_iter()
        .min_by(|a, b| {
            let (ma, mb) = (a.norm(), b.norm());
            if (ma - mb).abs() > 1e-12 * (1.0 + ma) {
                ma.total_cmp(&mb)
            } else {
                a.arg().total_cmp(&b.arg())
            }
        })
        .expect("positive degree has a root");
    let residual = eval_poly(&coeffs, z).norm() / (1.0 + z.norm_sqr()).powf(k as f64 / 2.0);
    Ok(Zeroing {
        unitary: LocalUnitary::from_parameter(qubit, z.conj()),
        root: Some(z),
        residual,
    })
}
