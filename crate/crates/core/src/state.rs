//! Validated pure and mixed states, a few named states, and random sampling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numcore::{self, check_index, CMatrix, CVector, Dims};

/// Tolerance on trace and normalization when validating inputs.
pub const STATE_TOL: f64 = 1e-8;

/// Hermitian, unit-trace, positive-semidefinite matrix over a multipartite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Dims,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (relative tolerance 1e-9).
    pub fn new(matrix: CMatrix, dims: Dims) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "density matrix must be square, found {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: matrix.nrows(),
            });
        }
        let dev = numcore::hermitian_deviation(&matrix);
        if dev > 1e-9 * numcore::max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let vals = numcore::hermitian_eigenvalues(&matrix)?;
        let min = vals.first().copied().unwrap_or(0.0);
        if min < -numcore::PSD_TOL * numcore::max_abs(&matrix).max(1.0) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(Self { matrix, dims })
    }

    /// Wraps a matrix already known to be a state (e.g. a partial trace of one).
    pub(crate) fn from_trusted(matrix: CMatrix, dims: Dims) -> Self {
        Self { matrix, dims }
    }

    /// `I / D`.
    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        let matrix = CMatrix::identity(n, n).scale(1.0 / n as f64);
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn into_parts(self) -> (CMatrix, Dims) {
        (self.matrix, self.dims)
    }

    /// Reduced state on the 1-based subsystems in `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = numcore::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = self.dims.restrict(keep)?;
        Ok(Self::from_trusted(m, dims))
    }

    /// Purity `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Conjugation by a unitary acting on the whole space.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.matrix.nrows() || u.ncols() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: u.nrows(),
            });
        }
        Ok(Self::from_trusted(u * &self.matrix * u.adjoint(), self.dims.clone()))
    }

    /// `ρ ⊗ σ` over the concatenated dimension list.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.to_vec();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(
            numcore::kron(&self.matrix, &other.matrix),
            Dims::new(dims).expect("concatenated dims are valid"),
        )
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.to_density()
    }
}

/// Normalized state vector over a multipartite space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Dims,
}

impl PureState {
    /// Requires `‖ψ‖ = 1` within 1e-8.
    pub fn new(amplitudes: CVector, dims: Dims) -> Result<Self> {
        check_len(&amplitudes, &dims)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector, dims: Dims) -> Result<Self> {
        check_len(&amplitudes, &dims)?;
        let norm = amplitudes.norm();
        if norm <= 1e-300 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            dims,
        })
    }

    /// Real amplitudes, normalized.
    pub fn from_real(amplitudes: &[f64], dims: Dims) -> Result<Self> {
        let v = CVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::normalized(v, dims)
    }

    /// Computational basis state; `digits` are 0-based levels per subsystem.
    pub fn basis(digits: &[usize], dims: Dims) -> Result<Self> {
        if digits.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                found: digits.len(),
            });
        }
        if let Some((&i, &d)) = digits.iter().zip(dims.iter()).find(|(&i, &d)| i >= d) {
            return Err(Error::InvalidArgument(format!(
                "basis level {i} does not exist in a {d}-level subsystem"
            )));
        }
        let mut v = CVector::zeros(dims.total());
        v[numcore::flat_index(digits, &dims)] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v, dims })
    }

    /// Qubit basis state from a bit string such as `"0101"`.
    pub fn bits(bits: &str) -> Result<Self> {
        let digits: Vec<usize> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::basis(&digits, Dims::qubits(digits.len())?)
    }

    /// Product of single-subsystem vectors (each normalized on the way in).
    pub fn product(factors: &[CVector]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySelection);
        }
        let dims = Dims::new(factors.iter().map(|f| f.len()).collect())?;
        let mut v = CVector::from_element(1, Complex64::new(1.0, 0.0));
        for f in factors {
            v = numcore::kron_vec(&v, f);
        }
        Self::normalized(v, dims)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn into_parts(self) -> (CVector, Dims) {
        (self.amplitudes, self.dims)
    }

    /// `|ψ><ψ|`.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(numcore::outer(&self.amplitudes, &self.amplitudes), self.dims.clone())
    }

    /// `|ψ> ⊗ |φ>`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.to_vec();
        dims.extend_from_slice(&other.dims);
        PureState {
            amplitudes: numcore::kron_vec(&self.amplitudes, &other.amplitudes),
            dims: Dims::new(dims).expect("concatenated dims are valid"),
        }
    }

    /// `|<ψ|φ>|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes).norm_sqr())
    }

    /// Applies a `d_k × d_k` operator to subsystem `k` (1-based) without
    /// forming the full Kronecker product. The result is not renormalized.
    pub fn apply_local_unnormalized(&self, k: usize, op: &CMatrix) -> Result<CVector> {
        check_index(k, self.dims.len())?;
        let d = self.dims[k - 1];
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: op.nrows(),
            });
        }
        let inner: usize = self.dims[k..].iter().product();
        let outer: usize = self.dims[..k - 1].iter().product();
        let mut out = CVector::zeros(self.amplitudes.len());
        for o in 0..outer {
            for r in 0..d {
                for c in 0..d {
                    let w = op[(r, c)];
                    if w == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..inner {
                        out[(o * d + r) * inner + i] += w * self.amplitudes[(o * d + c) * inner + i];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies a unitary to subsystem `k` (1-based).
    pub fn apply_local(&self, k: usize, u: &CMatrix) -> Result<PureState> {
        let v = self.apply_local_unnormalized(k, u)?;
        PureState::normalized(v, self.dims.clone())
    }

    /// Reorders subsystems; see [`numcore::permute_subsystems`].
    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        let (amplitudes, dims) = numcore::permute_vector(&self.amplitudes, &self.dims, order)?;
        Ok(PureState { amplitudes, dims })
    }

    /// Same vector viewed with a different (compatible) dimension list.
    pub fn regroup(&self, dims: Dims) -> Result<PureState> {
        check_len(&self.amplitudes, &dims)?;
        Ok(PureState {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }
}

fn check_len(v: &CVector, dims: &Dims) -> Result<()> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: v.len(),
        });
    }
    Ok(())
}

/// `(1/√d) Σ_k |k k ... k>` on `n` qudits.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ needs at least 2 parties, got {n}")));
    }
    let dims = Dims::new(vec![d; n])?;
    let mut v = CVector::zeros(dims.total());
    for k in 0..d {
        v[numcore::flat_index(&vec![k; n], &dims)] = Complex64::new(1.0, 0.0);
    }
    PureState::normalized(v, dims)
}

/// `(1/√n) Σ_j |0..1_j..0>` on `n` qubits.
pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("W needs at least 2 parties, got {n}")));
    }
    let dims = Dims::qubits(n)?;
    let mut v = CVector::zeros(dims.total());
    for j in 0..n {
        v[1 << (n - 1 - j)] = Complex64::new(1.0, 0.0);
    }
    PureState::normalized(v, dims)
}

/// `(|00> + |11>)/√2`.
pub fn bell() -> PureState {
    ghz(2, 2).expect("two-qubit GHZ is valid")
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> PureState {
    let v = CVector::from_fn(dims.total(), |_, _| complex_normal(rng));
    PureState::normalized(v, dims.clone()).expect("Gaussian vector is nonzero")
}

/// Random mixed state `G G† / Tr(G G†)` with a `D × rank` Ginibre matrix.
pub fn random_mixed<R: Rng + ?Sized>(dims: &Dims, rank: usize, rng: &mut R) -> DensityMatrix {
    let n = dims.total();
    let g = DMatrix::from_fn(n, rank.max(1), |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m.unscale(tr), dims.clone())
}

/// Haar-random `d × d` unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random product of single-subsystem unitaries `U_1 ⊗ ... ⊗ U_N`.
pub fn random_local_unitaries<R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Vec<CMatrix> {
    dims.iter().map(|&d| random_unitary(d, rng)).collect()
}
