//! Bloch representation: coherence vectors and correlation tensors.
//!
//! A state on `d_1 ⊗ ... ⊗ d_N` is expanded as
//! `ρ = (1/Π d_k) [ I + Σ_k s^(k)·λ^(k) + Σ_{S, |S|≥2} t^S · λ^{S} ]`, with
//! `s^(k)_a = (d_k/2) Tr(ρ_k λ_a)` and `t^S_α = (Π_{k∈S} d_k / 2^{|S|}) Tr(ρ_S ⊗ λ_α)`.
//! For qubits both prefactors equal one.
//!
//! Internally every coefficient comes out of a single "generalized
//! expectation" array `Γ_α = Tr(ρ μ_{α_1} ⊗ ... ⊗ μ_{α_N})` with `μ_0 = I` and
//! `μ_a = λ_a`, computed one subsystem at a time.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{self, su_generators, CMatrix, CVector, Dims, GeneratorBasis};
use crate::state::{DensityMatrix, PureState};
use crate::tensor::{self, DenseTensor};

/// Largest qudit count for which [`full_bloch`] materializes every subset.
pub const MAX_FULL_BLOCH_SUBSYSTEMS: usize = 12;

/// Coherence vectors and correlation tensors of a state.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochRep {
    pub dims: Dims,
    /// `s^(k)` for `k = 1..N` (stored at position `k - 1`).
    pub coherence: Vec<Vec<f64>>,
    /// `T^S` keyed by the sorted 1-based subset `S`, `|S| ≥ 2`.
    pub tensors: BTreeMap<Vec<usize>, DenseTensor>,
}

impl BlochRep {
    /// Representation of the maximally mixed state.
    pub fn zero(dims: Dims) -> Self {
        let coherence = dims.iter().map(|&d| vec![0.0; d * d - 1]).collect();
        let mut tensors = BTreeMap::new();
        for subset in subsets(dims.len(), 2) {
            let shape = subset.iter().map(|&k| dims[k - 1] * dims[k - 1] - 1).collect();
            tensors.insert(subset, DenseTensor::zeros(shape).expect("nonzero shape"));
        }
        Self {
            dims,
            coherence,
            tensors,
        }
    }

    /// The full correlation tensor `T^(N)`.
    pub fn full_tensor(&self) -> Option<&DenseTensor> {
        let all: Vec<usize> = (1..=self.dims.len()).collect();
        self.tensors.get(&all)
    }
}

/// All subsets of `{1..n}` with at least `min` elements, ordered by size then lexicographically.
pub fn subsets(n: usize, min: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << n))
        .map(|mask| {
            (0..n)
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| k + 1)
                .collect::<Vec<_>>()
        })
        .filter(|s: &Vec<usize>| s.len() >= min)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn bases_for(dims: &Dims) -> Result<Vec<GeneratorBasis>> {
    dims.iter().map(|&d| su_generators(d)).collect()
}

/// Applies `m` (new × old) along axis `axis` of a flat row-major array with shape `shape`.
fn apply_along(data: &[Complex64], shape: &mut [usize], axis: usize, m: &CMatrix) -> Vec<Complex64> {
    let old = shape[axis];
    let new = m.nrows();
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * new * inner];
    for o in 0..outer {
        for r in 0..new {
            let dst = &mut out[(o * new + r) * inner..(o * new + r + 1) * inner];
            for c in 0..old {
                let w = m[(r, c)];
                if w.re == 0.0 && w.im == 0.0 {
                    continue;
                }
                let src = &data[(o * old + c) * inner..(o * old + c + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
    }
    shape[axis] = new;
    out
}

/// Operator `μ_a` with `μ_0 = I`.
fn mu(basis: &GeneratorBasis, a: usize) -> CMatrix {
    if a == 0 {
        CMatrix::identity(basis.dim(), basis.dim())
    } else {
        basis.get(a - 1).clone()
    }
}

/// `Γ_α = Tr(ρ ⊗_k μ_{α_k})`, flat over `Π d_k²` with `α_N` fastest.
fn expectations(rho: &CMatrix, dims: &Dims, bases: &[GeneratorBasis]) -> Vec<f64> {
    let n = dims.len();
    let total = dims.total();
    // Interleave row and column digits so each subsystem owns one axis of size d².
    let mut shape: Vec<usize> = dims.iter().map(|&d| d * d).collect();
    let mut data = vec![Complex64::new(0.0, 0.0); total * total];
    let digits: Vec<Vec<usize>> = (0..total).map(|x| numcore::digits(x, dims)).collect();
    for x in 0..total {
        for y in 0..total {
            let pair: usize = (0..n).fold(0, |acc, k| acc * shape[k] + digits[x][k] * dims[k] + digits[y][k]);
            data[pair] = rho[(x, y)];
        }
    }
    for (k, basis) in bases.iter().enumerate() {
        let d = basis.dim();
        // Row a contracts (i, j) against μ_a[j, i], i.e. Tr(ρ_block μ_a).
        let m = CMatrix::from_fn(d * d, d * d, |a, p| {
            let (i, j) = (p / d, p % d);
            mu(basis, a)[(j, i)]
        });
        data = apply_along(&data, &mut shape, k, &m);
    }
    data.into_iter().map(|z| z.re).collect()
}

/// Inverse of [`expectations`].
fn from_expectations(gamma: &[f64], dims: &Dims, bases: &[GeneratorBasis]) -> CMatrix {
    let n = dims.len();
    let total = dims.total();
    let mut shape: Vec<usize> = dims.iter().map(|&d| d * d).collect();
    let mut data: Vec<Complex64> = gamma.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for (k, basis) in bases.iter().enumerate() {
        let d = basis.dim();
        let m = CMatrix::from_fn(d * d, d * d, |p, a| {
            let (i, j) = (p / d, p % d);
            let norm = if a == 0 { d as f64 } else { 2.0 };
            mu(basis, a)[(i, j)] / norm
        });
        data = apply_along(&data, &mut shape, k, &m);
    }
    let mut rho = CMatrix::zeros(total, total);
    let digits: Vec<Vec<usize>> = (0..total).map(|x| numcore::digits(x, dims)).collect();
    for x in 0..total {
        for y in 0..total {
            let pair: usize = (0..n).fold(0, |acc, k| acc * shape[k] + digits[x][k] * dims[k] + digits[y][k]);
            rho[(x, y)] = data[pair];
        }
    }
    rho
}

/// Reads off the tensor for 1-based `subset` from a Γ array.
fn extract(gamma: &[f64], dims: &Dims, subset: &[usize]) -> DenseTensor {
    let sq: Vec<usize> = dims.iter().map(|&d| d * d).collect();
    let shape: Vec<usize> = subset.iter().map(|&k| sq[k - 1] - 1).collect();
    let prefactor: f64 = subset.iter().map(|&k| dims[k - 1] as f64 / 2.0).product();
    let mut full_idx = vec![0usize; dims.len()];
    DenseTensor::from_fn(shape, |idx| {
        for (&k, &i) in subset.iter().zip(idx) {
            full_idx[k - 1] = i + 1;
        }
        prefactor * gamma[tensor_offset(&full_idx, &sq)]
    })
    .expect("nonempty shape")
}

fn tensor_offset(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// `s^(k)` for 1-based subsystem `k`.
pub fn bloch_vector(rho: &DensityMatrix, k: usize) -> Result<Vec<f64>> {
    let reduced = rho.reduce(&[k])?;
    let d = reduced.dims()[0];
    let basis = su_generators(d)?;
    Ok(basis
        .generators()
        .iter()
        .map(|l| d as f64 / 2.0 * (reduced.matrix() * l).trace().re)
        .collect())
}

/// `T^S` for a 1-based subset with at least two elements.
pub fn correlation_tensor(rho: &DensityMatrix, subset: &[usize]) -> Result<DenseTensor> {
    let sel = rho.dims().selection(subset)?;
    if sel.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a correlation tensor needs at least two subsystems, got {}",
            sel.len()
        )));
    }
    let keep: Vec<usize> = sel.iter().map(|k| k + 1).collect();
    let reduced = if keep.len() == rho.dims().len() {
        rho.clone()
    } else {
        rho.reduce(&keep)?
    };
    let dims = reduced.dims().clone();
    let gamma = expectations(reduced.matrix(), &dims, &bases_for(&dims)?);
    let all: Vec<usize> = (1..=dims.len()).collect();
    Ok(extract(&gamma, &dims, &all))
}

/// Every coherence vector and correlation tensor of `rho`.
pub fn full_bloch(rho: &DensityMatrix) -> Result<BlochRep> {
    let dims = rho.dims().clone();
    if dims.len() > MAX_FULL_BLOCH_SUBSYSTEMS {
        return Err(Error::InvalidArgument(format!(
            "full Bloch expansion limited to {MAX_FULL_BLOCH_SUBSYSTEMS} subsystems, got {}",
            dims.len()
        )));
    }
    let gamma = expectations(rho.matrix(), &dims, &bases_for(&dims)?);
    let coherence = (1..=dims.len())
        .map(|k| extract(&gamma, &dims, &[k]).data().to_vec())
        .collect();
    let tensors = subsets(dims.len(), 2)
        .into_iter()
        .map(|s| {
            let t = extract(&gamma, &dims, &s);
            (s, t)
        })
        .collect();
    Ok(BlochRep {
        dims,
        coherence,
        tensors,
    })
}

/// Rebuilds the density matrix from its Bloch data.
pub fn reconstruct(b: &BlochRep) -> Result<DensityMatrix> {
    let dims = &b.dims;
    let sq: Vec<usize> = dims.iter().map(|&d| d * d).collect();
    if b.coherence.len() != dims.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} coherence vectors for {} subsystems",
            b.coherence.len(),
            dims.len()
        )));
    }
    let mut gamma = vec![0.0; sq.iter().product()];
    gamma[0] = 1.0;
    let mut place = |subset: &[usize], t: &DenseTensor| -> Result<()> {
        let shape: Vec<usize> = subset.iter().map(|&k| sq[k - 1] - 1).collect();
        if t.dims() != shape.as_slice() {
            return Err(Error::ShapeMismatch(format!(
                "component {subset:?} has shape {:?}, expected {shape:?}",
                t.dims()
            )));
        }
        let prefactor: f64 = subset.iter().map(|&k| dims[k - 1] as f64 / 2.0).product();
        let mut idx = vec![0usize; subset.len()];
        let mut full = vec![0usize; dims.len()];
        for &x in t.data() {
            for (&k, &i) in subset.iter().zip(&idx) {
                full[k - 1] = i + 1;
            }
            gamma[tensor_offset(&full, &sq)] = x / prefactor;
            tensor::increment(&mut idx, &shape);
        }
        Ok(())
    };
    for (k, s) in b.coherence.iter().enumerate() {
        let t = DenseTensor::new(vec![s.len()], s.clone())?;
        place(&[k + 1], &t)?;
    }
    for (subset, t) in &b.tensors {
        dims.selection(subset)?;
        place(subset, t)?;
    }
    let rho = from_expectations(&gamma, dims, &bases_for(dims)?);
    DensityMatrix::new(rho, dims.clone())
}

/// `T^(N)` of a pure state without forming `|ψ><ψ|`.
///
/// Uses `<φ|λ_a ⊗ R|χ> = Σ_ij (λ_a)_ij <φ_i|R|χ_j>` recursively over
/// subsystems, so memory scales with the tensor size rather than `D²`.
pub fn pure_correlation_tensor(psi: &PureState) -> Result<DenseTensor> {
    let dims = psi.dims();
    let bases = bases_for(dims)?;
    let shape: Vec<usize> = dims.iter().map(|&d| d * d - 1).collect();
    let prefactor: f64 = dims.iter().map(|&d| d as f64 / 2.0).product();
    let amps: Vec<Complex64> = psi.amplitudes().iter().copied().collect();
    let raw = pair_tensor(&amps, &amps, dims, &bases);
    DenseTensor::new(shape, raw.into_iter().map(|z| prefactor * z.re).collect())
}

/// Flat array of `<φ|λ_{a_1} ⊗ ... ⊗ λ_{a_n}|χ>` over the generators of each mode.
fn pair_tensor(phi: &[Complex64], chi: &[Complex64], dims: &[usize], bases: &[GeneratorBasis]) -> Vec<Complex64> {
    if dims.is_empty() {
        let s: Complex64 = phi.iter().zip(chi).map(|(a, b)| a.conj() * b).sum();
        return vec![s];
    }
    let d = dims[0];
    let block = phi.len() / d;
    let rest_dims = &dims[1..];
    let rest_bases = &bases[1..];
    let mut subs: Vec<Vec<Vec<Complex64>>> = vec![vec![Vec::new(); d]; d];
    let mut out_len = 0;
    for i in 0..d {
        for j in 0..d {
            let needed = bases[0].generators().iter().any(|l| l[(i, j)].norm() > 0.0);
            if needed {
                let v = pair_tensor(
                    &phi[i * block..(i + 1) * block],
                    &chi[j * block..(j + 1) * block],
                    rest_dims,
                    rest_bases,
                );
                out_len = v.len();
                subs[i][j] = v;
            }
        }
    }
    let ng = bases[0].len();
    let mut out = vec![Complex64::new(0.0, 0.0); ng * out_len];
    for (a, l) in bases[0].generators().iter().enumerate() {
        let dst = &mut out[a * out_len..(a + 1) * out_len];
        for i in 0..d {
            for j in 0..d {
                let w = l[(i, j)];
                if w.norm() == 0.0 {
                    continue;
                }
                for (o, s) in dst.iter_mut().zip(&subs[i][j]) {
                    *o += w * s;
                }
            }
        }
    }
    out
}

/// Coherence vectors of a pure state.
pub fn pure_coherence(psi: &PureState) -> Result<Vec<Vec<f64>>> {
    let rho = psi.to_density();
    (1..=psi.dims().len()).map(|k| bloch_vector(&rho, k)).collect()
}

/// Product test for pure states: `T^(N)` equals the outer product of the coherence vectors.
pub fn is_product_pure(psi: &PureState) -> Result<bool> {
    if psi.dims().len() < 2 {
        return Ok(true);
    }
    let t = pure_correlation_tensor(psi)?;
    let s = pure_coherence(psi)?;
    let o = tensor::outer(&s)?;
    Ok(t.sub(&o)?.euclidean_norm() <= 1e-8)
}

/// `|2^N Tr(ρ²) − (1 + Σ‖s^(k)‖² + Σ_S ‖T^S‖²)|` for qubit systems.
pub fn purity_identity(rho: &DensityMatrix) -> Result<f64> {
    if !rho.dims().is_all_qubits() {
        return Err(Error::NotQubits);
    }
    let b = full_bloch(rho)?;
    let mut total = 1.0;
    for s in &b.coherence {
        total += s.iter().map(|x| x * x).sum::<f64>();
    }
    for t in b.tensors.values() {
        total += t.euclidean_norm().powi(2);
    }
    let n = rho.dims().len() as i32;
    Ok((2f64.powi(n) * rho.purity() - total).abs())
}

/// Coherence vector of a single-qudit pure vector, used by tests of the basis algebra.
pub fn single_coherence(v: &CVector) -> Result<Vec<f64>> {
    let d = v.len();
    let basis = su_generators(d)?;
    let rho = numcore::outer(v, v);
    Ok(basis
        .generators()
        .iter()
        .map(|l| d as f64 / 2.0 * (&rho * l).trace().re)
        .collect())
}
