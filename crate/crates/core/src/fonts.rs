//! Determinants of negativity fonts.
//!
//! A font of the partial transpose on qubit `p` is fixed by two rows `i` and
//! `j` of the coefficient array that differ exactly on the qubit set `S1`
//! (which contains `p`). Its determinant is
//!
//! `D = a_i a_j - a_{j ⊕ p} a_{i ⊕ p}`
//!
//! where `⊕ p` flips the bit of qubit `p`. Qubits outside `S1` form `S2` and
//! carry the same fixed bit in both rows.

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{CoeffPoly, Monomial, RationalComplex};
use crate::state::{format_bits, mask};

/// One negativity font: transposed qubit, the differing set `S1` with the
/// bits of row `i` on it, and the fixed bits of `S2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FontSpec {
    n_qubits: usize,
    transposed: usize,
    s1: Vec<(usize, u8)>,
    s2: Vec<(usize, u8)>,
}

impl FontSpec {
    /// Qubit/bit pairs in any order; both lists are sorted by qubit.
    pub fn new(
        n_qubits: usize,
        transposed: usize,
        mut s1: Vec<(usize, u8)>,
        mut s2: Vec<(usize, u8)>,
    ) -> Result<Self> {
        s1.sort_unstable();
        s2.sort_unstable();
        let mut seen = vec![false; n_qubits + 1];
        for &(q, b) in s1.iter().chain(&s2) {
            if q == 0 || q > n_qubits {
                return Err(Error::MalformedFont(format!(
                    "qubit {q} outside 1..={n_qubits}"
                )));
            }
            if b > 1 {
                return Err(Error::MalformedFont(format!("bit {b} for qubit {q}")));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::MalformedFont(format!("qubit {q} listed twice")));
            }
        }
        if let Some(q) = (1..=n_qubits).find(|&q| !seen[q]) {
            return Err(Error::MalformedFont(format!("qubit {q} missing")));
        }
        if s1.len() < 2 {
            return Err(Error::MalformedFont("S1 needs at least two qubits".into()));
        }
        if !s1.iter().any(|&(q, _)| q == transposed) {
            return Err(Error::MalformedFont(format!(
                "transposed qubit {transposed} not in S1"
            )));
        }
        Ok(Self {
            n_qubits,
            transposed,
            s1,
            s2,
        })
    }

    /// Font transposed on qubit 1 with `S1` given as a bit string over
    /// `s1_qubits` (ascending) and the remaining qubits fixed by `s2`.
    pub fn anchored(n_qubits: usize, s1_qubits: &[usize], s1_bits: &str, s2: &[(usize, u8)]) -> Result<Self> {
        if s1_qubits.len() != s1_bits.len() {
            return Err(Error::MalformedFont(format!(
                "{} qubits but bit string `{s1_bits}`",
                s1_qubits.len()
            )));
        }
        let s1 = s1_qubits
            .iter()
            .zip(s1_bits.bytes())
            .map(|(&q, ch)| match ch {
                b'0' => Ok((q, 0)),
                b'1' => Ok((q, 1)),
                _ => Err(Error::MalformedFont(format!("bad bit string `{s1_bits}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, 1, s1, s2.to_vec())
    }

    /// The font spanned by rows `i` and `j`.
    pub fn from_rows(n_qubits: usize, transposed: usize, i: usize, j: usize) -> Result<Self> {
        let span = 1usize << n_qubits;
        if i >= span || j >= span {
            return Err(Error::MalformedFont(format!(
                "row index out of range for {n_qubits} qubits"
            )));
        }
        let diff = i ^ j;
        let (mut s1, mut s2) = (Vec::new(), Vec::new());
        for q in 1..=n_qubits {
            let b = ((i & mask(n_qubits, q)) != 0) as u8;
            if diff & mask(n_qubits, q) != 0 {
                s1.push((q, b));
            } else {
                s2.push((q, b));
            }
        }
        Self::new(n_qubits, transposed, s1, s2)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn transposed(&self) -> usize {
        self.transposed
    }

    pub fn s1(&self) -> &[(usize, u8)] {
        &self.s1
    }

    pub fn s2(&self) -> &[(usize, u8)] {
        &self.s2
    }

    /// Rows `(i, j)`.
    pub fn rows(&self) -> (usize, usize) {
        let n = self.n_qubits;
        let mut i = 0;
        let mut diff = 0;
        for &(q, b) in &self.s1 {
            if b == 1 {
                i |= mask(n, q);
            }
            diff |= mask(n, q);
        }
        for &(q, b) in &self.s2 {
            if b == 1 {
                i |= mask(n, q);
            }
        }
        (i, i ^ diff)
    }

    /// The representative of this font's class together with the sign
    /// relating the two determinants. Swapping the rows leaves `D`
    /// unchanged and flipping the transposed bit alone negates it, so the
    /// representative has a 0 at the transposed qubit and at the first other
    /// qubit of `S1`.
    pub fn canonicalize(&self) -> (FontSpec, i8) {
        let mut spec = self.clone();
        let mut sign = 1;
        let lead = spec
            .s1
            .iter()
            .position(|&(q, _)| q != spec.transposed)
            .expect("S1 has two qubits");
        if spec.s1[lead].1 == 1 {
            for entry in &mut spec.s1 {
                entry.1 ^= 1;
            }
        }
        let t = spec.s1.iter().position(|&(q, _)| q == spec.transposed).unwrap();
        if spec.s1[t].1 == 1 {
            spec.s1[t].1 = 0;
            sign = -1;
        }
        (spec, sign)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().0 == *self
    }

    /// Copy with qubit `q` moved from `S2` to `S1` at bit `bit`.
    pub fn widen(&self, q: usize, bit: u8) -> Result<FontSpec> {
        let pos = self
            .s2
            .iter()
            .position(|&(p, _)| p == q)
            .ok_or_else(|| Error::MalformedFont(format!("qubit {q} not in S2")))?;
        let mut s2 = self.s2.clone();
        s2.remove(pos);
        let mut s1 = self.s1.clone();
        s1.push((q, bit));
        FontSpec::new(self.n_qubits, self.transposed, s1, s2)
    }

    /// Copy with the `S2` bit of qubit `q` replaced.
    pub fn with_fixed(&self, q: usize, bit: u8) -> Result<FontSpec> {
        let mut spec = self.clone();
        let entry = spec
            .s2
            .iter_mut()
            .find(|(p, _)| *p == q)
            .ok_or_else(|| Error::MalformedFont(format!("qubit {q} not in S2")))?;
        entry.1 = bit;
        Ok(spec)
    }

    /// Embed into `n + 1` qubits with the new last qubit in `S2` at `bit`.
    pub fn extend_fixed(&self, bit: u8) -> FontSpec {
        let mut s2 = self.s2.clone();
        s2.push((self.n_qubits + 1, bit));
        FontSpec::new(self.n_qubits + 1, self.transposed, self.s1.clone(), s2)
            .expect("extension of a valid font")
    }

    /// Embed into `n + 1` qubits with the new last qubit in `S1`.
    pub fn extend_differing(&self, bit: u8) -> FontSpec {
        let mut s1 = self.s1.clone();
        s1.push((self.n_qubits + 1, bit));
        FontSpec::new(self.n_qubits + 1, self.transposed, s1, self.s2.clone())
            .expect("extension of a valid font")
    }

    /// Label such as `D_(A3)0^{00}`.
    pub fn label(&self) -> String {
        let mut out = String::from("D");
        for &(q, b) in &self.s2 {
            out.push_str(&format!("_(A{q}){b}"));
        }
        out.push('^');
        out.extend(self.s1.iter().map(|&(_, b)| if b == 1 { '1' } else { '0' }));
        out
    }
}

/// `D = a_i a_j - a_{j⊕p} a_{i⊕p}` as a polynomial.
pub fn font_determinant(spec: &FontSpec) -> CoeffPoly {
    let n = spec.n_qubits;
    let (i, j) = spec.rows();
    let p = mask(n, spec.transposed);
    let product = |x: usize, y: usize| Monomial::from_factors([(x as u32, 1), (y as u32, 1)]);
    CoeffPoly::from_terms(
        n,
        [
            (product(i, j), RationalComplex::from_integer(1)),
            (product(j ^ p, i ^ p), RationalComplex::from_integer(-1)),
        ],
    )
    .expect("font rows lie in range")
}

/// `K`, the number of qubits on which the two rows differ.
pub fn k_way(spec: &FontSpec) -> usize {
    spec.s1.len()
}

/// All canonical fonts of the transpose on qubit 1 for `n` qubits.
pub fn enumerate_fonts(n_qubits: usize) -> Vec<FontSpec> {
    enumerate_fonts_for(n_qubits, 1)
}

/// All canonical fonts of the transpose on qubit `transposed`.
pub fn enumerate_fonts_for(n_qubits: usize, transposed: usize) -> Vec<FontSpec> {
    if n_qubits < 2 || transposed == 0 || transposed > n_qubits {
        return Vec::new();
    }
    let full = 1usize << n_qubits;
    let p = mask(n_qubits, transposed);
    let mut out = Vec::new();
    for i in 0..full {
        for diff in 0..full {
            if diff & p == 0 || diff.count_ones() < 2 {
                continue;
            }
            let spec = FontSpec::from_rows(n_qubits, transposed, i, i ^ diff)
                .expect("rows drawn from range");
            if spec.is_canonical() {
                out.push(spec);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Degree-two covariant triple for qubit `q` in `S2`: the determinants with
/// `q` fixed at 0, the cross term `(D^{..0..} + D^{..1..}) / 2` with `q` moved
/// to `S1`, and the determinant with `q` fixed at 1. The bit `spec` itself
/// assigns to `q` is ignored.
pub fn covariant_triple(spec: &FontSpec, q: usize) -> Result<[CoeffPoly; 3]> {
    let d0 = font_determinant(&spec.with_fixed(q, 0)?);
    let d1 = font_determinant(&spec.with_fixed(q, 1)?);
    let cross = font_determinant(&spec.widen(q, 0)?)
        .add(&font_determinant(&spec.widen(q, 1)?))?
        .scale(&RationalComplex::ratio(1, 2));
    Ok([d0, cross, d1])
}

/// The action of `u` on degree-two coefficients `(c00, c01, c11)`, i.e. the
/// symmetric square of `u` in the basis `(e0⊗e0, sym(e0⊗e1), e1⊗e1)`.
pub fn symmetric_square(u: &Matrix2<Complex64>) -> Matrix3<Complex64> {
    let two = Complex64::new(2.0, 0.0);
    let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    Matrix3::new(
        a * a,
        two * a * b,
        b * b,
        a * c,
        a * d + b * c,
        b * d,
        c * c,
        two * c * d,
        d * d,
    )
}

impl std::fmt::Display for FontSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (i, j) = self.rows();
        write!(
            f,
            "{} [rows {} {}]",
            self.label(),
            format_bits(i, self.n_qubits),
            format_bits(j, self.n_qubits)
        )
    }
}
