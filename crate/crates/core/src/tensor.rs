//! Real multiway arrays: matricization, n-mode products, norms and rank-1 expansions.
//!
//! Entries are stored last-index-fastest. Modes are numbered from 1 in every
//! public function; entry coordinates passed to [`DenseTensor::get`] are 0-based.

use nalgebra::DVector;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numcore::{self, check_index, RMatrix};

/// Absolute tolerance used by [`DenseTensor::is_supersymmetric`] by default.
pub const SUPERSYMMETRY_TOL: f64 = 1e-10;

/// Real tensor of shape `I_1 × ... × I_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptySelection);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidDimension(bad));
        }
        let n: usize = dims.iter().product();
        if data.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let n = dims.iter().product();
        Self::new(dims, vec![0.0; n])
    }

    /// Builds a tensor from a function of 0-based coordinates.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut t = Self::zeros(dims)?;
        let dims = t.dims.clone();
        let mut idx = vec![0; dims.len()];
        for x in 0..t.data.len() {
            t.data[x] = f(&idx);
            increment(&mut idx, &dims);
        }
        Ok(t)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Entry at 0-based coordinates.
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    /// `sqrt(Σ t²)`.
    pub fn euclidean_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Sum of entry moduli.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).sum()
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &DenseTensor) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&self, c: f64) -> DenseTensor {
        DenseTensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.same_shape(other)?;
        Ok(DenseTensor {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.add(&other.scale(-1.0))
    }

    fn same_shape(&self, other: &DenseTensor) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "tensor shapes {:?} and {:?} differ",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// Mode-`n` matricization: an `I_n × (I_{n+1}…I_N I_1…I_{n-1})` matrix whose
    /// column index runs over the remaining modes in backward-cyclic order,
    /// `i_{n-1}` varying fastest.
    pub fn unfold(&self, n: usize) -> Result<RMatrix> {
        check_index(n, self.order())?;
        let rows = self.dims[n - 1];
        let cols = self.numel() / rows;
        let (col_of, _) = self.column_map(n);
        let mut m = RMatrix::zeros(rows, cols);
        let mut idx = vec![0; self.order()];
        for x in 0..self.numel() {
            m[(idx[n - 1], col_of(&idx))] = self.data[x];
            increment(&mut idx, &self.dims);
        }
        Ok(m)
    }

    /// Returns the column-index function of the mode-`n` unfolding and the
    /// cyclic mode order it uses (0-based modes).
    fn column_map(&self, n: usize) -> (impl Fn(&[usize]) -> usize + '_, Vec<usize>) {
        let order: Vec<usize> = (n..self.order()).chain(0..n - 1).collect();
        let cyc = order.clone();
        let dims = &self.dims;
        (
            move |idx: &[usize]| cyc.iter().fold(0, |acc, &m| acc * dims[m] + idx[m]),
            order,
        )
    }

    /// Inverse of [`DenseTensor::unfold`].
    pub fn refold(m: &RMatrix, dims: &[usize], n: usize) -> Result<DenseTensor> {
        let t = DenseTensor::zeros(dims.to_vec())?;
        check_index(n, t.order())?;
        let rows = dims[n - 1];
        let cols = t.numel() / rows;
        if m.nrows() != rows || m.ncols() != cols {
            return Err(Error::ShapeMismatch(format!(
                "expected a {rows}x{cols} unfolding, found {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut data = vec![0.0; t.numel()];
        {
            let (col_of, _) = t.column_map(n);
            let mut idx = vec![0; dims.len()];
            for slot in data.iter_mut() {
                *slot = m[(idx[n - 1], col_of(&idx))];
                increment(&mut idx, dims);
            }
        }
        DenseTensor::new(dims.to_vec(), data)
    }

    /// n-mode product `T ×_n A`; `A` must have `I_n` columns.
    pub fn mode_product(&self, a: &RMatrix, n: usize) -> Result<DenseTensor> {
        check_index(n, self.order())?;
        if a.ncols() != self.dims[n - 1] {
            return Err(Error::DimensionMismatch {
                expected: self.dims[n - 1],
                found: a.ncols(),
            });
        }
        let product = a * self.unfold(n)?;
        let mut dims = self.dims.clone();
        dims[n - 1] = a.nrows();
        DenseTensor::refold(&product, &dims, n)
    }

    /// `max_n Σ σ_i(T_(n))`.
    pub fn kyfan_norm(&self) -> f64 {
        (1..=self.order())
            .map(|n| numcore::kyfan_norm_matrix(&self.unfold(n).expect("mode in range")))
            .fold(0.0, f64::max)
    }

    /// Nuclear norm of every unfolding, in mode order.
    pub fn mode_kyfan_norms(&self) -> Vec<f64> {
        (1..=self.order())
            .map(|n| numcore::kyfan_norm_matrix(&self.unfold(n).expect("mode in range")))
            .collect()
    }

    /// Invariance under every permutation of indices, within `tol` (absolute).
    pub fn is_supersymmetric(&self, tol: f64) -> Result<bool> {
        let d = self.dims[0];
        if self.dims.iter().any(|&x| x != d) {
            return Err(Error::ShapeMismatch(format!(
                "supersymmetry needs equal dimensions, found {:?}",
                self.dims
            )));
        }
        // Adjacent transpositions generate the symmetric group.
        let mut idx = vec![0; self.order()];
        for x in 0..self.numel() {
            for k in 0..self.order().saturating_sub(1) {
                let mut swapped = idx.clone();
                swapped.swap(k, k + 1);
                if (self.data[x] - self.get(&swapped)).abs() > tol {
                    return Ok(false);
                }
            }
            increment(&mut idx, &self.dims);
        }
        Ok(true)
    }

    /// Contracts every mode except `skip` (0-based) against the given vectors.
    fn contract_except(&self, vecs: &[DVector<f64>], skip: usize) -> DVector<f64> {
        let mut out = DVector::zeros(self.dims[skip]);
        let mut idx = vec![0; self.order()];
        for &t in &self.data {
            if t != 0.0 {
                let mut w = t;
                for (m, v) in vecs.iter().enumerate() {
                    if m != skip {
                        w *= v[idx[m]];
                    }
                }
                out[idx[skip]] += w;
            }
            increment(&mut idx, &self.dims);
        }
        out
    }

    /// `T · (u_1 ∘ ... ∘ u_N)`.
    fn contract_all(&self, vecs: &[DVector<f64>]) -> f64 {
        let partial = self.contract_except(vecs, 0);
        partial.dot(&vecs[0])
    }
}

/// Advances a last-index-fastest odometer.
pub(crate) fn increment(idx: &mut [usize], dims: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return;
        }
        idx[k] = 0;
    }
}

/// Rank-1 tensor `u_1 ∘ u_2 ∘ ... ∘ u_N`.
pub fn outer(vectors: &[Vec<f64>]) -> Result<DenseTensor> {
    if vectors.is_empty() {
        return Err(Error::EmptySelection);
    }
    let dims: Vec<usize> = vectors.iter().map(|v| v.len()).collect();
    DenseTensor::from_fn(dims, |idx| idx.iter().zip(vectors).map(|(&i, v)| v[i]).product())
}

/// Columnwise Kronecker product of `I×K` and `J×K` matrices.
pub fn khatri_rao(a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
    if a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            found: b.ncols(),
        });
    }
    let (i, j) = (a.nrows(), b.nrows());
    Ok(RMatrix::from_fn(i * j, a.ncols(), |r, k| a[(r / j, k)] * b[(r % j, k)]))
}

/// One term `ξ · u_1 ∘ ... ∘ u_N` of a rank-1 expansion with unit vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneTerm {
    pub weight: f64,
    pub factors: Vec<Vec<f64>>,
}

/// Rank-1 expansion `T = Σ ξ_r u_r^(1) ∘ ... ∘ u_r^(N)` with unit factors.
#[derive(Clone, Debug, PartialEq)]
pub struct Kruskal {
    pub terms: Vec<RankOneTerm>,
    /// Euclidean norm of what the expansion leaves unexplained.
    pub residual: f64,
    /// Whether factors in every mode are mutually orthonormal across terms.
    pub completely_orthogonal: bool,
}

impl Kruskal {
    /// `Σ |ξ_r|`.
    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight.abs()).sum()
    }
}

/// Settings for [`orthogonal_deflation`].
#[derive(Clone, Copy, Debug)]
pub struct DeflationOptions {
    pub max_terms: usize,
    pub tolerance: f64,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for DeflationOptions {
    fn default() -> Self {
        Self {
            max_terms: 50,
            tolerance: 1e-8,
            restarts: 6,
            max_sweeps: 500,
            seed: 0x5eed,
        }
    }
}

/// Greedy completely orthogonal rank-1 deflation.
///
/// Each step runs alternating power iterations, with every factor confined to
/// the orthogonal complement of the factors already extracted in its mode,
/// starting once from the leading left singular vectors of the projected
/// unfoldings and then from seeded random points. Returns `None` when the
/// residual cannot be pushed below `tolerance`.
pub fn orthogonal_deflation(t: &DenseTensor, opts: &DeflationOptions) -> Option<Kruskal> {
    let order = t.order();
    let max_terms = opts.max_terms.min(*t.dims().iter().min().unwrap_or(&0));
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut residual = t.clone();
    let mut terms: Vec<RankOneTerm> = Vec::new();
    let mut bases: Vec<Vec<DVector<f64>>> = vec![Vec::new(); order];

    while residual.euclidean_norm() > opts.tolerance {
        if terms.len() >= max_terms {
            return None;
        }
        let mut best: Option<(f64, Vec<DVector<f64>>)> = None;
        let mut starts = vec![hosvd_start(&residual, &bases)];
        for _ in 0..opts.restarts {
            starts.push(random_start(t.dims(), &bases, &mut rng));
        }
        for start in starts.into_iter().flatten() {
            let (xi, vecs) = power_iterate(&residual, &bases, start, opts.max_sweeps);
            if best.as_ref().is_none_or(|(b, _)| xi.abs() > b.abs()) {
                best = Some((xi, vecs));
            }
        }
        let (xi, vecs) = best?;
        if xi.abs() <= opts.tolerance {
            return None;
        }
        let factors: Vec<Vec<f64>> = vecs.iter().map(|v| v.iter().copied().collect()).collect();
        let term = outer(&factors).ok()?.scale(xi);
        residual = residual.sub(&term).ok()?;
        for (m, v) in vecs.into_iter().enumerate() {
            bases[m].push(v);
        }
        terms.push(RankOneTerm { weight: xi, factors });
    }
    Some(Kruskal {
        terms,
        residual: residual.euclidean_norm(),
        completely_orthogonal: true,
    })
}

/// Standard-basis expansion: one term per nonzero entry. Always exact.
pub fn entrywise_expansion(t: &DenseTensor) -> Kruskal {
    let mut terms = Vec::new();
    let mut idx = vec![0; t.order()];
    for &x in t.data() {
        if x != 0.0 {
            let factors = idx
                .iter()
                .zip(t.dims())
                .map(|(&i, &d)| {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    e
                })
                .collect();
            terms.push(RankOneTerm { weight: x, factors });
        }
        increment(&mut idx, t.dims());
    }
    let co = completely_orthogonal(&terms);
    Kruskal {
        terms,
        residual: 0.0,
        completely_orthogonal: co,
    }
}

fn completely_orthogonal(terms: &[RankOneTerm]) -> bool {
    for (a, ta) in terms.iter().enumerate() {
        for tb in &terms[a + 1..] {
            for (u, v) in ta.factors.iter().zip(&tb.factors) {
                let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                if dot.abs() > 1e-12 {
                    return false;
                }
            }
        }
    }
    true
}

fn project_out(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    // Two passes of Gram-Schmidt keep the complement numerically clean.
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(v);
            v.axpy(-c, b, 1.0);
        }
    }
}

fn normalize(mut v: DVector<f64>) -> Option<DVector<f64>> {
    let n = v.norm();
    if n <= 1e-14 {
        return None;
    }
    v /= n;
    Some(v)
}

fn hosvd_start(r: &DenseTensor, bases: &[Vec<DVector<f64>>]) -> Option<Vec<DVector<f64>>> {
    (0..r.order())
        .map(|m| {
            let mut unf = r.unfold(m + 1).ok()?;
            for b in &bases[m] {
                let proj = b * (b.transpose() * &unf);
                unf -= proj;
            }
            let gram = &unf * unf.transpose();
            let eig = nalgebra::SymmetricEigen::new(gram);
            let top = eig.eigenvalues.imax();
            let mut v = eig.eigenvectors.column(top).into_owned();
            project_out(&mut v, &bases[m]);
            normalize(v)
        })
        .collect()
}

fn random_start(dims: &[usize], bases: &[Vec<DVector<f64>>], rng: &mut StdRng) -> Option<Vec<DVector<f64>>> {
    dims.iter()
        .enumerate()
        .map(|(m, &d)| {
            let mut v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
            project_out(&mut v, &bases[m]);
            normalize(v)
        })
        .collect()
}

fn power_iterate(
    r: &DenseTensor,
    bases: &[Vec<DVector<f64>>],
    mut vecs: Vec<DVector<f64>>,
    max_sweeps: usize,
) -> (f64, Vec<DVector<f64>>) {
    let mut xi = r.contract_all(&vecs);
    for _ in 0..max_sweeps {
        for m in 0..r.order() {
            let mut v = r.contract_except(&vecs, m);
            project_out(&mut v, &bases[m]);
            if let Some(v) = normalize(v) {
                vecs[m] = v;
            }
        }
        let next = r.contract_all(&vecs);
        let done = (next.abs() - xi.abs()).abs() <= 1e-15 * next.abs().max(1.0);
        xi = next;
        if done {
            break;
        }
    }
    (xi, vecs)
}
