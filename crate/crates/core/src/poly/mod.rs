//! Exact sparse polynomials in the state coefficients `a_{i1...iN}`.
//!
//! Variables are identified by their bitstring index (qubit 1 most
//! significant). Monomials keep their variables sorted by that index, and a
//! polynomial stores its terms in a `BTreeMap` so iteration and export order
//! are canonical.
//!
//! Besides ring arithmetic the module provides the two structural maps the
//! invariant chain is built from:
//!
//! * [`CoeffPoly::raise_index`], the derivation that sends `a_{..0..} -> a_{..1..}`
//!   and `a_{..1..} -> 0` on one qubit and extends to products by the Leibniz rule;
//! * [`CoeffPoly::lift_insert`], which embeds a polynomial on `n` qubits into
//!   `n + 1` qubits by inserting a fixed bit for a new qubit in every variable.

mod export;
mod rational;

pub use export::{parse_export, write_export, NamedPoly};
pub use rational::{binomial, binomial_f64, factorial, RationalComplex};
pub(crate) use rational::parse_rational;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::state::{check_qubit, format_bits, insert_bit, parse_bits, PureState};

/// Default cap on the number of monomials a product may produce.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;

/// A state-coefficient variable `a_{bits}` of an `n_qubits`-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub n_qubits: u8,
    pub bits: u32,
}

impl VarId {
    pub fn new(n_qubits: usize, bits: u32) -> Self {
        debug_assert!(n_qubits <= 31 && (bits as u64) < (1u64 << n_qubits));
        Self {
            n_qubits: n_qubits as u8,
            bits,
        }
    }

    pub fn parse(bits: &str) -> Result<Self> {
        Ok(Self::new(bits.len(), parse_bits(bits)? as u32))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", format_bits(self.bits as usize, self.n_qubits as usize))
    }
}

/// Product of variables, stored as `(variable index, multiplicity)` pairs
/// sorted by index with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(u32, u32); 8]>);

impl Monomial {
    pub fn one() -> Self {
        Self(SmallVec::new())
    }

    pub fn var(bits: u32) -> Self {
        let mut v = SmallVec::new();
        v.push((bits, 1));
        Self(v)
    }

    /// Builds a monomial from unsorted factors, merging repeated variables.
    pub fn from_factors<I: IntoIterator<Item = (u32, u32)>>(factors: I) -> Self {
        let mut v: SmallVec<[(u32, u32); 8]> = factors.into_iter().filter(|f| f.1 > 0).collect();
        v.sort_unstable_by_key(|f| f.0);
        let mut merged: SmallVec<[(u32, u32); 8]> = SmallVec::with_capacity(v.len());
        for (var, mult) in v {
            match merged.last_mut() {
                Some(last) if last.0 == var => last.1 += mult,
                _ => merged.push((var, mult)),
            }
        }
        Self(merged)
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.1).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn evaluate(&self, amplitudes: &[Complex64]) -> Complex64 {
        self.0.iter().fold(Complex64::new(1.0, 0.0), |acc, &(var, mult)| {
            let a = amplitudes[var as usize];
            acc * if mult == 1 { a } else { a.powu(mult) }
        })
    }
}

/// Exact polynomial in the coefficients of an `n_qubits`-qubit state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffPoly {
    n_qubits: usize,
    terms: BTreeMap<Monomial, RationalComplex>,
}

impl CoeffPoly {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_qubits: usize, c: RationalComplex) -> Self {
        let mut p = Self::zero(n_qubits);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: VarId) -> Self {
        let mut p = Self::zero(v.n_qubits as usize);
        p.terms.insert(Monomial::var(v.bits), RationalComplex::one());
        p
    }

    /// The variable named by a bitstring, e.g. `CoeffPoly::var_str("011")`.
    pub fn var_str(bits: &str) -> Result<Self> {
        Ok(Self::var(VarId::parse(bits)?))
    }

    /// Sums the given terms, dropping those that cancel.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, RationalComplex)>,
    {
        let mut p = Self::zero(n_qubits);
        for (m, c) in terms {
            if let Some(&(var, _)) = m.factors().last() {
                if (var as u64) >= (1u64 << n_qubits) {
                    return Err(Error::QubitOutOfRange {
                        qubit: n_qubits + 1,
                        n_qubits,
                    });
                }
            }
            p.accumulate(m, c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, m: Monomial, c: RationalComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn from_hash(n_qubits: usize, acc: HashMap<Monomial, RationalComplex>) -> Self {
        Self {
            n_qubits,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RationalComplex)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&RationalComplex> {
        self.terms.get(m)
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common total degree when every monomial shares it. The zero
    /// polynomial reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check_same(&self, other: &CoeffPoly) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::MixedQubitCount {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CoeffPoly) -> Result<CoeffPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CoeffPoly) -> Result<CoeffPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CoeffPoly {
        CoeffPoly {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &RationalComplex) -> CoeffPoly {
        if s.is_zero() {
            return CoeffPoly::zero(self.n_qubits);
        }
        CoeffPoly {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn scale_real(&self, r: &BigRational) -> CoeffPoly {
        self.scale(&RationalComplex::real(r.clone()))
    }

    /// Product, limited to [`DEFAULT_TERM_CAP`] monomials.
    pub fn mul(&self, other: &CoeffPoly) -> Result<CoeffPoly> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    /// Product that fails with [`Error::TermLimit`] once the partial result
    /// holds more than `cap` distinct monomials.
    pub fn mul_capped(&self, other: &CoeffPoly, cap: usize) -> Result<CoeffPoly> {
        self.check_same(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<Monomial, RationalComplex> =
            HashMap::with_capacity((small.len() * large.len()).min(cap.max(16)));
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &c;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                        if acc.len() > cap {
                            return Err(Error::TermLimit { cap });
                        }
                    }
                }
            }
        }
        Ok(Self::from_hash(self.n_qubits, acc))
    }

    pub fn pow(&self, k: u32) -> Result<CoeffPoly> {
        let mut out = CoeffPoly::constant(self.n_qubits, RationalComplex::one());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Substitute amplitudes for the variables.
    pub fn evaluate(&self, state: &PureState) -> Result<Complex64> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_qubits,
                found: state.amplitudes().len(),
            });
        }
        Ok(self.evaluate_amplitudes(state.amplitudes()))
    }

    /// Evaluation on a raw (not necessarily normalized) amplitude vector of
    /// length `2^n_qubits`.
    pub fn evaluate_amplitudes(&self, amplitudes: &[Complex64]) -> Complex64 {
        debug_assert_eq!(amplitudes.len(), 1 << self.n_qubits);
        self.terms
            .iter()
            .map(|(m, c)| c.to_complex64() * m.evaluate(amplitudes))
            .sum()
    }

    /// Index-raising derivation on qubit `q`.
    pub fn raise_index(&self, q: usize) -> Result<CoeffPoly> {
        check_qubit(q, self.n_qubits)?;
        let mask = 1u32 << (self.n_qubits - q);
        let mut acc: HashMap<Monomial, RationalComplex> = HashMap::new();
        for (m, c) in &self.terms {
            for (pos, &(var, mult)) in m.0.iter().enumerate() {
                if var & mask != 0 {
                    continue;
                }
                let mut factors: SmallVec<[(u32, u32); 8]> = m.0.clone();
                if mult == 1 {
                    factors.remove(pos);
                } else {
                    factors[pos].1 -= 1;
                }
                factors.push((var | mask, 1));
                let raised = Monomial::from_factors(factors);
                let coeff = c.scale_real(&BigRational::from_integer(mult.into()));
                *acc.entry(raised).or_insert_with(RationalComplex::zero) += &coeff;
            }
        }
        Ok(Self::from_hash(self.n_qubits, acc))
    }

    /// `raise_index` applied `times` times.
    pub fn raise_index_n(&self, q: usize, times: usize) -> Result<CoeffPoly> {
        let mut p = self.clone();
        for _ in 0..times {
            p = p.raise_index(q)?;
        }
        Ok(p)
    }

    /// Append a new last qubit with fixed index `bit` to every variable.
    pub fn lift_append(&self, bit: u8) -> CoeffPoly {
        self.lift_insert(self.n_qubits + 1, bit)
            .expect("appending a qubit is always in range")
    }

    /// Insert a new qubit at `position` (1-based in the enlarged system) with
    /// fixed index `bit` into every variable.
    pub fn lift_insert(&self, position: usize, bit: u8) -> Result<CoeffPoly> {
        let n = self.n_qubits + 1;
        check_qubit(position, n)?;
        let b = (bit & 1) as usize;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let factors = m
                    .0
                    .iter()
                    .map(|&(var, mult)| (insert_bit(var as usize, n, position, b) as u32, mult));
                (Monomial::from_factors(factors), c.clone())
            })
            .collect();
        Ok(CoeffPoly { n_qubits: n, terms })
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;

    /// Panics on mismatched qubit counts; use [`CoeffPoly::add`] to handle that case.
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::add(self, rhs).expect("qubit counts must match")
    }
}

impl Sub for &CoeffPoly {
    type Output = CoeffPoly;

    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::sub(self, rhs).expect("qubit counts must match")
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;

    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::mul(self, rhs).expect("product within the default term cap")
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;

    fn neg(self) -> CoeffPoly {
        CoeffPoly::neg(self)
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_real() {
                write!(f, "({})", c.re)?;
            } else {
                write!(f, "({} + {}i)", c.re, c.im)?;
            }
            for &(var, mult) in m.factors() {
                write!(f, "*{}", VarId::new(self.n_qubits, var))?;
                if mult > 1 {
                    write!(f, "^{mult}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{canonical_state, StateKind};

    fn v(bits: &str) -> CoeffPoly {
        CoeffPoly::var_str(bits).unwrap()
    }

    fn d00() -> CoeffPoly {
        &(&v("00") * &v("11")) - &(&v("10") * &v("01"))
    }

    #[test]
    fn add_and_cancel() {
        let p = d00();
        let q = p.add(&p.scale(&RationalComplex::from_integer(-1))).unwrap();
        assert!(q.is_zero());
        assert_eq!(p.len(), 2);
        assert_eq!(p.homogeneous_degree(), Some(2));
    }

    #[test]
    fn single_product() {
        let p = v("00").mul(&v("11")).unwrap();
        assert_eq!(p.len(), 1);
        let (m, c) = p.terms().next().unwrap();
        assert_eq!(m.factors(), &[(0b00, 1), (0b11, 1)]);
        assert_eq!(*c, RationalComplex::one());
    }

    #[test]
    fn mixed_qubit_counts_rejected() {
        assert!(matches!(
            v("00").add(&v("000")),
            Err(Error::MixedQubitCount { left: 2, right: 3 })
        ));
        assert!(v("00").mul(&v("000")).is_err());
    }

    #[test]
    fn term_cap_enforced() {
        let sum = (0..8).fold(CoeffPoly::zero(3), |acc, i| {
            &acc + &CoeffPoly::var(VarId::new(3, i))
        });
        let square = sum.mul(&sum).unwrap();
        assert_eq!(square.len(), 36);
        assert!(matches!(sum.mul_capped(&sum, 10), Err(Error::TermLimit { cap: 10 })));
    }

    #[test]
    fn evaluate_d00_on_bell() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x| Complex64::new(x, 0.0);
        let bell = PureState::new(2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        assert!((d00().evaluate(&bell).unwrap() - c(0.5)).norm() < 1e-15);
        let basis = canonical_state(&StateKind::Basis("01".into()), 2).unwrap();
        assert_eq!(d00().evaluate(&basis).unwrap(), c(0.0));
        let three = canonical_state(&StateKind::Ghz, 3).unwrap();
        assert!(d00().evaluate(&three).is_err());
    }

    #[test]
    fn raise_index_examples() {
        assert_eq!(v("00").raise_index(2).unwrap(), v("01"));
        assert!(v("01").raise_index(2).unwrap().is_zero());
        // T(a00 a01) = a01 a01 + a00 * 0
        let p = v("00").mul(&v("01")).unwrap();
        assert_eq!(p.raise_index(2).unwrap(), v("01").pow(2).unwrap());
        assert!(v("00").raise_index(3).is_err());
    }

    #[test]
    fn lift_examples() {
        let lifted0 = d00().lift_append(0);
        let expected0 = &(&v("000") * &v("110")) - &(&v("100") * &v("010"));
        assert_eq!(lifted0, expected0);
        let lifted1 = d00().lift_append(1);
        let expected1 = &(&v("001") * &v("111")) - &(&v("101") * &v("011"));
        assert_eq!(lifted1, expected1);
        assert!(CoeffPoly::zero(2).lift_append(0).is_zero());
        assert_eq!(CoeffPoly::zero(2).lift_append(0).n_qubits(), 3);

        // inserting in the middle: a_{i1 i3} -> a_{i1 b i3}
        let mid = d00().lift_insert(2, 1).unwrap();
        let expected = &(&v("010") * &v("111")) - &(&v("110") * &v("011"));
        assert_eq!(mid, expected);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(d00().to_string(), "(1)*a00*a11 + (-1)*a01*a10");
    }
}
