use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{binomial, binomial_f64, CoeffPoly, RationalComplex, DEFAULT_TERM_CAP};
use crate::state::{check_qubit, PureState};

/// `D^{00} = a00 a11 - a10 a01`, the two-qubit invariant that starts the chain.
pub fn seed_i22() -> CoeffPoly {
    let v = |s| CoeffPoly::var_str(s).expect("valid bit string");
    &(&v("00") * &v("11")) - &(&v("10") * &v("01"))
}

/// The `k + 1` invariants of the `N - 1` qubits other than `qubit`, obtained
/// from a degree-`k` seed by fixing the new qubit at 0 and raising.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFamily {
    level: usize,
    qubit: usize,
    degree: usize,
    scaling: BigRational,
    members: Vec<CoeffPoly>,
}

/// Member `m` is `((k-m)!/k!) (T+)^m` applied to the seed (times `scaling`)
/// lifted with qubit `q` fixed at 0. The recursion used is
/// `T+ member_m = (k - m) member_{m+1}`.
pub fn extend_family(seed: &CoeffPoly, q: usize, scaling: &BigRational) -> Result<InvariantFamily> {
    let k = seed.homogeneous_degree().ok_or(Error::NotHomogeneous)? as usize;
    let level = seed.n_qubits() + 1;
    check_qubit(q, level)?;
    let mut members = Vec::with_capacity(k + 1);
    members.push(seed.scale_real(scaling).lift_insert(q, 0)?);
    for m in 0..k {
        let raised = members[m].raise_index(q)?;
        let inv = BigRational::new(1.into(), ((k - m) as i64).into());
        members.push(raised.scale_real(&inv));
    }
    Ok(InvariantFamily {
        level,
        qubit: q,
        degree: k,
        scaling: scaling.clone(),
        members,
    })
}

impl InvariantFamily {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn scaling(&self) -> &BigRational {
        &self.scaling
    }

    pub fn members(&self) -> &[CoeffPoly] {
        &self.members
    }

    /// Checks `T+ member_m = (k - m) member_{m+1}` and `T+ member_k = 0`.
    pub fn satisfies_raising(&self) -> bool {
        let k = self.degree;
        (0..=k).all(|m| {
            let raised = self.members[m].raise_index(self.qubit).expect("qubit in range");
            if m == k {
                raised.is_zero()
            } else {
                let factor = BigRational::from_integer(((k - m) as i64).into());
                raised == self.members[m + 1].scale_real(&factor)
            }
        })
    }

    /// `½ Σ_m (-1)^m C(k,m) member_m member_{k-m}` as a polynomial.
    pub fn combine(&self) -> Result<CoeffPoly> {
        self.combine_capped(DEFAULT_TERM_CAP)
    }

    pub fn combine_capped(&self, cap: usize) -> Result<CoeffPoly> {
        let k = self.degree;
        let mut total = CoeffPoly::zero(self.level);
        // Terms m and k - m are equal products; odd k makes them cancel.
        if k % 2 == 1 {
            return Ok(total);
        }
        for m in 0..=k / 2 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let mut weight = binomial(k, m) * BigRational::from_integer(sign.into());
            if 2 * m == k {
                weight /= BigRational::from_integer(2.into());
            }
            let product = self.members[m].mul_capped(&self.members[k - m], cap)?;
            total = total.add(&product.scale_real(&weight))?;
            if total.len() > cap {
                return Err(Error::TermLimit { cap });
            }
        }
        Ok(total)
    }

    pub fn evaluate(&self, state: &PureState) -> Result<NumericFamily> {
        if state.n_qubits() != self.level {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.level,
                found: state.amplitudes().len(),
            });
        }
        Ok(self.evaluate_amplitudes(state.amplitudes()))
    }

    pub fn evaluate_amplitudes(&self, amplitudes: &[Complex64]) -> NumericFamily {
        NumericFamily {
            level: self.level,
            qubit: self.qubit,
            degree: self.degree,
            members: self.members.iter().map(|p| p.evaluate_amplitudes(amplitudes)).collect(),
        }
    }
}

/// Numeric values of a family on one state.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericFamily {
    level: usize,
    qubit: usize,
    degree: usize,
    members: Vec<Complex64>,
}

impl NumericFamily {
    pub fn new(level: usize, qubit: usize, degree: usize, members: Vec<Complex64>) -> Result<Self> {
        if members.len() != degree + 1 {
            return Err(Error::IncompleteFamily {
                degree,
                found: members.len(),
            });
        }
        Ok(Self {
            level,
            qubit,
            degree,
            members,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn members(&self) -> &[Complex64] {
        &self.members
    }

    pub fn combine(&self) -> Complex64 {
        combine_members(&self.members)
    }

    pub fn norm_quantity(&self) -> f64 {
        norm_quantity(&self.members)
    }
}

/// `½ Σ_m (-1)^m C(k,m) c_m c_{k-m}` with `k = members.len() - 1`.
pub fn combine_members(members: &[Complex64]) -> Complex64 {
    let Some(k) = members.len().checked_sub(1) else {
        return Complex64::zero();
    };
    let half: Complex64 = (0..=k)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            members[m] * members[k - m] * (sign * binomial_f64(k, m))
        })
        .sum();
    half * 0.5
}

/// `Σ_m C(k,m) |c_m|²`.
pub fn norm_quantity(members: &[Complex64]) -> f64 {
    let Some(k) = members.len().checked_sub(1) else {
        return 0.0;
    };
    members
        .iter()
        .enumerate()
        .map(|(m, c)| binomial_f64(k, m) * c.norm_sqr())
        .sum()
}

/// Exact counterpart of [`combine_members`] for exact member values.
pub fn combine_exact(members: &[RationalComplex]) -> RationalComplex {
    let Some(k) = members.len().checked_sub(1) else {
        return RationalComplex::zero();
    };
    let mut total = RationalComplex::zero();
    for m in 0..=k {
        let sign = if m % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let term = (&members[m] * &members[k - m]).scale_real(&(binomial(k, m) * sign));
        total += &term;
    }
    total.scale_real(&BigRational::new(1.into(), 2.into()))
}
