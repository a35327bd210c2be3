//! Pure states of `n` qubits, local unitaries, reduced density matrices and
//! global negativity.
//!
//! Amplitudes are indexed by the bitstring `i1 i2 ... iN` read with qubit 1 as
//! the most significant bit. Qubits are labelled `1..=n` throughout the crate.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Maximum deviation of `Σ|a|²` from one accepted by [`PureState::new`].
pub const NORM_TOLERANCE: f64 = 1e-9;

const UNITARY_TOLERANCE: f64 = 1e-12;
const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
const PSD_TOLERANCE: f64 = -1e-10;
const NEGATIVITY_CLAMP: f64 = -1e-14;

/// Bit of qubit `q` (1-based, qubit 1 most significant) in `index`.
#[inline]
pub(crate) fn bit(index: usize, n_qubits: usize, q: usize) -> usize {
    (index >> (n_qubits - q)) & 1
}

#[inline]
pub(crate) fn mask(n_qubits: usize, q: usize) -> usize {
    1 << (n_qubits - q)
}

pub(crate) fn check_qubit(q: usize, n_qubits: usize) -> Result<()> {
    if q == 0 || q > n_qubits {
        Err(Error::QubitOutOfRange { qubit: q, n_qubits })
    } else {
        Ok(())
    }
}

/// Parse a bitstring such as `"0110"` into an amplitude index.
pub fn parse_bits(bits: &str) -> Result<usize> {
    if bits.is_empty() || bits.len() > usize::BITS as usize - 1 {
        return Err(Error::Parse(format!("bad bitstring {bits:?}")));
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::Parse(format!("bad bitstring {bits:?}"))),
    })
}

/// Format `index` as an `n`-character bitstring.
pub fn format_bits(index: usize, n_qubits: usize) -> String {
    (1..=n_qubits)
        .map(|q| if bit(index, n_qubits, q) == 1 { '1' } else { '0' })
        .collect()
}

/// Normalized state vector of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state, rejecting amplitude vectors whose norm deviates from one
    /// by more than [`NORM_TOLERANCE`].
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(n_qubits, &amplitudes)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Builds a state after rescaling the amplitudes to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(n_qubits, &amplitudes)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("amplitudes cannot be normalized".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    fn check_shape(n_qubits: usize, amplitudes: &[Complex64]) -> Result<()> {
        if n_qubits == 0 || n_qubits > 24 {
            return Err(Error::InvalidState(format!(
                "unsupported qubit count {n_qubits}"
            )));
        }
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Tensor a single-qubit factor `(α0, α1)` into the state so that it
    /// becomes qubit `position` of the result.
    pub fn insert_qubit(&self, position: usize, factor: [Complex64; 2]) -> Result<Self> {
        let n = self.n_qubits + 1;
        check_qubit(position, n)?;
        let amplitudes = (0..1usize << n)
            .map(|index| {
                let b = bit(index, n, position);
                self.amplitudes[remove_bit(index, n, position)] * factor[b]
            })
            .collect();
        Self::normalized(n, amplitudes)
    }
}

pub(crate) fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// Drop the bit of qubit `q` from an `n`-qubit index.
#[inline]
pub(crate) fn remove_bit(index: usize, n_qubits: usize, q: usize) -> usize {
    let low_width = n_qubits - q;
    let low = index & ((1 << low_width) - 1);
    let high = index >> (low_width + 1);
    (high << low_width) | low
}

/// Insert `b` as qubit `q` of an index over `n_qubits - 1` qubits.
#[inline]
pub(crate) fn insert_bit(index: usize, n_qubits: usize, q: usize, b: usize) -> usize {
    let low_width = n_qubits - q;
    let low = index & ((1 << low_width) - 1);
    let high = index >> low_width;
    (high << (low_width + 1)) | (b << low_width) | low
}

/// Amplitudes of the `(n-1)`-qubit vector with qubit `q` fixed at `b`.
pub(crate) fn slice(amplitudes: &[Complex64], n_qubits: usize, q: usize, b: usize) -> Vec<Complex64> {
    (0..1usize << (n_qubits - 1))
        .map(|index| amplitudes[insert_bit(index, n_qubits, q, b)])
        .collect()
}

/// Requested canonical state.
#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    Ghz,
    W,
    /// Computational basis state given by its bitstring.
    Basis(String),
    /// Product of single-qubit states `(α0, α1)`, one per qubit.
    Product(Vec<[Complex64; 2]>),
    /// Haar-random state drawn from a complex Gaussian with this seed.
    Random(u64),
}

pub fn canonical_state(kind: &StateKind, n_qubits: usize) -> Result<PureState> {
    if n_qubits == 0 {
        return Err(Error::InvalidState("need at least one qubit".into()));
    }
    let dim = 1usize << n_qubits;
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        StateKind::Ghz => {
            let mut amps = vec![zero; dim];
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = h;
            amps[dim - 1] = h;
            PureState::new(n_qubits, amps)
        }
        StateKind::W => {
            if n_qubits < 2 {
                return Err(Error::InvalidState("W state needs at least two qubits".into()));
            }
            let mut amps = vec![zero; dim];
            let w = Complex64::new(1.0 / (n_qubits as f64).sqrt(), 0.0);
            for q in 1..=n_qubits {
                amps[mask(n_qubits, q)] = w;
            }
            PureState::new(n_qubits, amps)
        }
        StateKind::Basis(bits) => {
            if bits.len() != n_qubits {
                return Err(Error::InvalidState(format!(
                    "bitstring {bits:?} does not have {n_qubits} characters"
                )));
            }
            let mut amps = vec![zero; dim];
            amps[parse_bits(bits)?] = Complex64::new(1.0, 0.0);
            PureState::new(n_qubits, amps)
        }
        StateKind::Product(factors) => {
            if factors.len() != n_qubits {
                return Err(Error::InvalidState(format!(
                    "{} product factors given for {n_qubits} qubits",
                    factors.len()
                )));
            }
            let mut normalized = Vec::with_capacity(n_qubits);
            for f in factors {
                let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
                if !(norm > 0.0 && norm.is_finite()) {
                    return Err(Error::InvalidState("product factor cannot be normalized".into()));
                }
                normalized.push([f[0] / norm, f[1] / norm]);
            }
            let amps = (0..dim)
                .map(|index| {
                    (1..=n_qubits)
                        .map(|q| normalized[q - 1][bit(index, n_qubits, q)])
                        .product()
                })
                .collect();
            PureState::normalized(n_qubits, amps)
        }
        StateKind::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            random_state_with(&mut rng, n_qubits)
        }
    }
}

pub(crate) fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random state of `n_qubits` qubits drawn from `rng`.
pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Result<PureState> {
    let amps = (0..1usize << n_qubits).map(|_| gaussian_complex(rng)).collect();
    PureState::normalized(n_qubits, amps)
}

/// A 2×2 unitary acting on one qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    qubit: usize,
    matrix: Matrix2<Complex64>,
}

impl LocalUnitary {
    pub fn new(qubit: usize, matrix: Matrix2<Complex64>) -> Result<Self> {
        if qubit == 0 {
            return Err(Error::QubitOutOfRange { qubit, n_qubits: 0 });
        }
        let deviation = (matrix.adjoint() * matrix - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { qubit, matrix })
    }

    pub fn identity(qubit: usize) -> Self {
        Self {
            qubit,
            matrix: Matrix2::identity(),
        }
    }

    /// `U(x) = (1 + |x|²)^{-1/2} [[1, -x*], [x, 1]]`.
    pub fn from_parameter(qubit: usize, x: Complex64) -> Self {
        let s = 1.0 / (1.0 + x.norm_sqr()).sqrt();
        let one = Complex64::new(s, 0.0);
        Self {
            qubit,
            matrix: Matrix2::new(one, -x.conj() * s, x * s, one),
        }
    }

    /// Recovers `x` when the matrix has the form produced by
    /// [`LocalUnitary::from_parameter`].
    pub fn parameter(&self) -> Option<Complex64> {
        let m = &self.matrix;
        let corner = m[(0, 0)];
        let tol = 1e-12;
        if corner.im.abs() > tol || corner.re <= tol {
            return None;
        }
        if (m[(1, 1)] - corner).norm() > tol || (m[(0, 1)] + m[(1, 0)].conj()).norm() > tol {
            return None;
        }
        Some(m[(1, 0)] / corner.re)
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.matrix
    }

    pub fn on_qubit(mut self, qubit: usize) -> Self {
        self.qubit = qubit;
        self
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }
}

/// Haar-random SU(2) element, reproducible per seed, acting on qubit 1.
pub fn random_su2(seed: u64) -> LocalUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_su2_with(&mut rng, 1)
}

/// Gram-Schmidt on two complex Gaussian columns gives a Haar U(2) element;
/// dividing by a square root of its determinant lands in SU(2).
pub fn random_su2_with<R: Rng + ?Sized>(rng: &mut R, qubit: usize) -> LocalUnitary {
    loop {
        let g1 = [gaussian_complex(rng), gaussian_complex(rng)];
        let g2 = [gaussian_complex(rng), gaussian_complex(rng)];
        let n1 = (g1[0].norm_sqr() + g1[1].norm_sqr()).sqrt();
        if n1 < 1e-8 {
            continue;
        }
        let v1 = [g1[0] / n1, g1[1] / n1];
        let overlap = v1[0].conj() * g2[0] + v1[1].conj() * g2[1];
        let w = [g2[0] - overlap * v1[0], g2[1] - overlap * v1[1]];
        let n2 = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if n2 < 1e-8 {
            continue;
        }
        let v2 = [w[0] / n2, w[1] / n2];
        let m = Matrix2::new(v1[0], v2[0], v1[1], v2[1]);
        let phase = m.determinant().sqrt();
        return LocalUnitary {
            qubit,
            matrix: m / phase,
        };
    }
}

/// In-place action of a 2×2 matrix on qubit `q` of a raw amplitude vector.
pub(crate) fn apply_matrix(
    amplitudes: &mut [Complex64],
    n_qubits: usize,
    q: usize,
    m: &Matrix2<Complex64>,
) {
    let step = mask(n_qubits, q);
    for index in 0..amplitudes.len() {
        if index & step != 0 {
            continue;
        }
        let a0 = amplitudes[index];
        let a1 = amplitudes[index | step];
        amplitudes[index] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
        amplitudes[index | step] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
    }
}

pub fn apply_local_unitary(state: &PureState, u: &LocalUnitary) -> Result<PureState> {
    check_qubit(u.qubit, state.n_qubits)?;
    let mut amplitudes = state.amplitudes.clone();
    apply_matrix(&mut amplitudes, state.n_qubits, u.qubit, &u.matrix);
    Ok(PureState {
        n_qubits: state.n_qubits,
        amplitudes,
    })
}

/// Exchange the roles of qubits `a` and `b`.
pub fn swap_qubits(state: &PureState, a: usize, b: usize) -> Result<PureState> {
    let n = state.n_qubits;
    check_qubit(a, n)?;
    check_qubit(b, n)?;
    let (ma, mb) = (mask(n, a), mask(n, b));
    let amplitudes = (0..state.amplitudes.len())
        .map(|index| {
            let (ba, bb) = (index & ma != 0, index & mb != 0);
            let mut source = index & !(ma | mb);
            if ba {
                source |= mb;
            }
            if bb {
                source |= ma;
            }
            state.amplitudes[source]
        })
        .collect();
    Ok(PureState {
        n_qubits: n,
        amplitudes,
    })
}

/// Reduced (or full) density matrix over an ordered set of qubit labels.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    qubits: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(qubits: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << qubits.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {asym:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let min_eig = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { qubits, matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            qubits: (1..=state.n_qubits).collect(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Trace out every label not in `keep`. Labels refer to the original
    /// qubits, not to positions within this matrix.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let positions = keep
            .iter()
            .map(|q| {
                self.qubits.iter().position(|p| p == q).map(|p| p + 1).ok_or(Error::QubitOutOfRange {
                    qubit: *q,
                    n_qubits: self.qubits.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let split = KeepSplit::new(self.qubits.len(), positions)?;
        let kdim = 1usize << split.keep.len();
        let rdim = 1usize << split.rest.len();
        let mut out = DMatrix::zeros(kdim, kdim);
        for i in 0..kdim {
            for j in 0..kdim {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..rdim {
                    acc += self.matrix[(split.compose(i, r), split.compose(j, r))];
                }
                out[(i, j)] = acc;
            }
        }
        let qubits = split.keep.iter().map(|&p| self.qubits[p - 1]).collect();
        Ok(DensityMatrix {
            qubits,
            matrix: out,
        })
    }
}

/// Positions (1-based within an `n`-qubit index) split into kept and traced
/// sets, both ascending.
struct KeepSplit {
    n: usize,
    keep: Vec<usize>,
    rest: Vec<usize>,
}

impl KeepSplit {
    fn new(n: usize, mut keep: Vec<usize>) -> Result<Self> {
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.len() >= n {
            return Err(Error::InvalidState(
                "kept qubits must form a nonempty proper subset".into(),
            ));
        }
        if let Some(&q) = keep.iter().find(|&&q| q == 0 || q > n) {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits: n });
        }
        let rest = (1..=n).filter(|q| !keep.contains(q)).collect();
        Ok(Self { n, keep, rest })
    }

    fn compose(&self, kept_index: usize, rest_index: usize) -> usize {
        let mut index = 0;
        let kn = self.keep.len();
        for (pos, &q) in self.keep.iter().enumerate() {
            index |= ((kept_index >> (kn - 1 - pos)) & 1) << (self.n - q);
        }
        let rn = self.rest.len();
        for (pos, &q) in self.rest.iter().enumerate() {
            index |= ((rest_index >> (rn - 1 - pos)) & 1) << (self.n - q);
        }
        index
    }
}

pub fn partial_trace(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let split = KeepSplit::new(state.n_qubits, keep.to_vec())?;
    let kdim = 1usize << split.keep.len();
    let rdim = 1usize << split.rest.len();
    let a = state.amplitudes();
    let mut out = DMatrix::zeros(kdim, kdim);
    for i in 0..kdim {
        for j in i..kdim {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rdim {
                acc += a[split.compose(i, r)] * a[split.compose(j, r)].conj();
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    Ok(DensityMatrix {
        qubits: split.keep,
        matrix: out,
    })
}

/// Twice the sum of the moduli of the negative eigenvalues of `|ψ⟩⟨ψ|`
/// partially transposed on qubit `q`.
pub fn global_negativity(state: &PureState, q: usize) -> Result<f64> {
    let n = state.n_qubits;
    check_qubit(q, n)?;
    let dim = 1usize << n;
    let a = state.amplitudes();
    let m = mask(n, q);
    let pt = DMatrix::from_fn(dim, dim, |i, j| {
        // ρ^{T_q}[i, j] = ρ[i', j'] with the q-bits of i and j exchanged.
        let (bi, bj) = (i & m, j & m);
        let ii = (i & !m) | bj;
        let jj = (j & !m) | bi;
        a[ii] * a[jj].conj()
    });
    let eig = SymmetricEigen::new(pt).eigenvalues;
    let negative: f64 = eig
        .iter()
        .filter(|&&l| l < NEGATIVITY_CLAMP)
        .map(|l| l.abs())
        .sum();
    Ok(2.0 * negative)
}
