//! Binary forms and transvectants.
//!
//! A family `(member_0, ..., member_k)` defines the form
//! `f(x, y) = Σ_μ C(k,μ) member_μ x^μ y^{k-μ}`. Then `½ (f, f)^k` equals
//! `I_{N,2k}` and `(f, g)^k` with the partner `g(x, y) = f̄(y, -x)` equals
//! `𝒩`. Forms store their plain coefficients (those of `x^μ y^{k-μ}`) and
//! derivatives act on those arrays directly.

use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::chain::{InvariantFamily, NumericFamily};
use crate::error::{Error, Result};
use crate::poly::{binomial, factorial, CoeffPoly};

/// Coefficient ring for forms.
pub trait FormCoeff: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, r: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
}

impl FormCoeff for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::zero()
    }

    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }

    fn scale(&self, r: &BigRational) -> Self {
        self * r.to_f64().unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl FormCoeff for CoeffPoly {
    fn zero_like(&self) -> Self {
        CoeffPoly::zero(self.n_qubits())
    }

    fn add(&self, other: &Self) -> Result<Self> {
        CoeffPoly::add(self, other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        CoeffPoly::mul(self, other)
    }

    fn scale(&self, r: &BigRational) -> Self {
        self.scale_real(r)
    }

    fn is_zero(&self) -> bool {
        CoeffPoly::is_zero(self)
    }
}

/// Layout of a coefficient list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `c_μ` multiplies `C(k,μ) x^μ y^{k-μ}`.
    Binomial,
    /// `c_μ` multiplies `x^μ y^{k-μ}`.
    Plain,
}

/// Homogeneous binary form of degree `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<C> {
    plain: Vec<C>,
}

impl<C: FormCoeff> BinaryForm<C> {
    pub fn new(coeffs: Vec<C>, convention: Convention) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::IncompleteFamily { degree: 0, found: 0 });
        }
        let k = coeffs.len() - 1;
        let plain = match convention {
            Convention::Plain => coeffs,
            Convention::Binomial => coeffs
                .iter()
                .enumerate()
                .map(|(mu, c)| c.scale(&binomial(k, mu)))
                .collect(),
        };
        Ok(Self { plain })
    }

    pub fn degree(&self) -> usize {
        self.plain.len() - 1
    }

    pub fn plain(&self) -> &[C] {
        &self.plain
    }

    /// Coefficients with the binomial weights divided out.
    pub fn binomial_coefficients(&self) -> Vec<C> {
        let k = self.degree();
        self.plain
            .iter()
            .enumerate()
            .map(|(mu, c)| c.scale(&(BigRational::from_integer(1.into()) / binomial(k, mu))))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.plain.iter().all(FormCoeff::is_zero)
    }

    /// The only coefficient of a degree-0 form.
    pub fn constant(&self) -> Option<&C> {
        (self.degree() == 0).then(|| &self.plain[0])
    }

    /// `∂x^a ∂y^b`, of degree `k - a - b`.
    pub fn derivative(&self, a: usize, b: usize) -> Result<Self> {
        let k = self.degree();
        if a + b > k {
            return Err(Error::TransvectantOrder {
                order: a + b,
                left: k,
                right: k,
            });
        }
        let d = k - a - b;
        let plain = (0..=d)
            .map(|nu| {
                // x^{nu+a} y^{k-nu-a} -> falling factorials in each variable
                let mu = nu + a;
                let weight = factorial(mu) / factorial(nu) * factorial(k - mu) / factorial(k - mu - b);
                self.plain[mu].scale(&weight)
            })
            .collect();
        Ok(Self { plain })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (n, k) = (self.degree(), other.degree());
        let zero = self.plain[0].zero_like();
        let mut plain = vec![zero; n + k + 1];
        for (i, a) in self.plain.iter().enumerate() {
            for (j, b) in other.plain.iter().enumerate() {
                plain[i + j] = plain[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Self { plain })
    }

    fn add(&self, other: &Self) -> Result<Self> {
        let plain = self
            .plain
            .iter()
            .zip(&other.plain)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self { plain })
    }

    fn scale(&self, r: &BigRational) -> Self {
        Self {
            plain: self.plain.iter().map(|c| c.scale(r)).collect(),
        }
    }
}

impl BinaryForm<Complex64> {
    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Complex64 {
        let k = self.degree() as u32;
        self.plain
            .iter()
            .enumerate()
            .map(|(mu, c)| c * x.powu(mu as u32) * y.powu(k - mu as u32))
            .sum()
    }
}

/// `(f, g)^r = ((n-r)!(k-r)!/(n!k!)) Σ_s (-1)^s C(r,s) ∂x^{r-s}∂y^s f · ∂x^s∂y^{r-s} g`.
pub fn transvectant<C: FormCoeff>(f: &BinaryForm<C>, g: &BinaryForm<C>, r: usize) -> Result<BinaryForm<C>> {
    let (n, k) = (f.degree(), g.degree());
    if r > n.min(k) {
        return Err(Error::TransvectantOrder {
            order: r,
            left: n,
            right: k,
        });
    }
    let mut total: Option<BinaryForm<C>> = None;
    for s in 0..=r {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let weight = binomial(r, s) * BigRational::from_integer(sign.into());
        let term = f.derivative(r - s, s)?.mul(&g.derivative(s, r - s)?)?.scale(&weight);
        total = Some(match total {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    let prefactor = factorial(n - r) * factorial(k - r) / (factorial(n) * factorial(k));
    let out = total.expect("r + 1 terms").scale(&prefactor);
    debug_assert_eq!(out.degree(), n + k - 2 * r);
    Ok(out)
}

/// The form of a symbolic family.
pub fn form_from_family(family: &InvariantFamily) -> Result<BinaryForm<CoeffPoly>> {
    BinaryForm::new(family.members().to_vec(), Convention::Binomial)
}

/// The form of a numeric family.
pub fn form_from_numeric(family: &NumericFamily) -> Result<BinaryForm<Complex64>> {
    form_from_members(family.members())
}

pub fn form_from_members(members: &[Complex64]) -> Result<BinaryForm<Complex64>> {
    BinaryForm::new(members.to_vec(), Convention::Binomial)
}

/// `g(x, y) = f̄(y, -x)`, i.e. binomial coefficients `(-1)^ν conj(c_{k-ν})`.
pub fn partner_form(f: &BinaryForm<Complex64>) -> BinaryForm<Complex64> {
    let c = f.binomial_coefficients();
    let k = f.degree();
    let d = (0..=k)
        .map(|nu| {
            let v = c[k - nu].conj();
            if nu % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    BinaryForm::new(d, Convention::Binomial).expect("nonempty")
}

/// `½ (f, f)^k`.
pub fn invariant_from_self_transvectant<C: FormCoeff>(f: &BinaryForm<C>) -> Result<C> {
    let t = transvectant(f, f, f.degree())?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(t.constant().expect("degree 0").scale(&half))
}

/// `(f, g)^k` with the partner `g`; real up to rounding.
pub fn norm_from_simultaneous_transvectant(f: &BinaryForm<Complex64>) -> Result<Complex64> {
    let g = partner_form(f);
    let t = transvectant(f, &g, f.degree())?;
    Ok(*t.constant().expect("degree 0"))
}
