use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact complex number with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl RationalComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den` as a real rational.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn scale_real(&self, r: &BigRational) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }
}

impl Zero for RationalComplex {
    fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for RationalComplex {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl<'a> Add<&'a RationalComplex> for &'a RationalComplex {
    type Output = RationalComplex;

    fn add(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for RationalComplex {
    type Output = RationalComplex;

    fn add(self, rhs: RationalComplex) -> RationalComplex {
        &self + &rhs
    }
}

impl AddAssign<&RationalComplex> for RationalComplex {
    fn add_assign(&mut self, rhs: &RationalComplex) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl<'a> Sub<&'a RationalComplex> for &'a RationalComplex {
    type Output = RationalComplex;

    fn sub(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a RationalComplex> for &'a RationalComplex {
    type Output = RationalComplex;

    fn mul(self, rhs: &RationalComplex) -> RationalComplex {
        // Coefficients are real along the whole chain; skip the cross terms then.
        if self.im.is_zero() && rhs.im.is_zero() {
            return RationalComplex::real(&self.re * &rhs.re);
        }
        RationalComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for RationalComplex {
    type Output = RationalComplex;

    fn mul(self, rhs: RationalComplex) -> RationalComplex {
        &self * &rhs
    }
}

impl Neg for RationalComplex {
    type Output = RationalComplex;

    fn neg(self) -> RationalComplex {
        RationalComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &RationalComplex {
    type Output = RationalComplex;

    fn neg(self) -> RationalComplex {
        RationalComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl From<BigRational> for RationalComplex {
    fn from(re: BigRational) -> Self {
        Self::real(re)
    }
}

impl From<i64> for RationalComplex {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

/// Renders as `re / im`, each part an integer or `p/q`.
impl fmt::Display for RationalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.re, self.im)
    }
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

/// Binomial coefficient `C(n, k)` as an `f64`; exact for the small arguments used here.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

pub fn binomial(n: usize, k: usize) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub(crate) fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(BigRational::new(num, den))
            }
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = RationalComplex::ratio(1, 2);
        let b = RationalComplex::new(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        let p = &a * &b;
        assert_eq!(p.to_string(), "1/2 / 1");
        assert_eq!(&(&a + &a) - &RationalComplex::one(), RationalComplex::zero());
        assert_eq!(&RationalComplex::i() * &RationalComplex::i(), RationalComplex::from_integer(-1));
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigRational::one());
        assert_eq!(factorial(8), BigRational::from_integer(40320.into()));
        assert_eq!(binomial(8, 4), BigRational::from_integer(70.into()));
        assert_eq!(binomial_f64(8, 3), 56.0);
    }

    #[test]
    fn parse_parts() {
        assert_eq!(parse_rational("-3/4"), Some(BigRational::new((-3).into(), 4.into())));
        assert_eq!(parse_rational(" 5 "), Some(BigRational::from_integer(5.into())));
        assert_eq!(parse_rational("1/0"), None);
    }
}
