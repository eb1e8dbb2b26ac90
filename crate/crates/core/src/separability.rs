//! Separability tests built on correlation tensors, plus the partial-transpose check.
//!
//! The Ky Fan test is one-directional: a norm above the bound proves
//! entanglement, a norm below it proves nothing. Only [`sufficiency_test`] and
//! [`nqubit_iff_test`] ever answer [`Status::Separable`].

use std::fmt;

use crate::bloch::{self, correlation_tensor};
use crate::error::{Error, Result};
use crate::graphstate::PartitionSpec;
use crate::numcore::{self, Dims};
use crate::state::DensityMatrix;
use crate::tensor::{self, DeflationOptions, DenseTensor};

/// Smallest partial-transpose eigenvalue still counted as nonnegative.
pub const PPT_TOL: f64 = 1e-10;
/// Margin by which a witness must exceed its bound to report entanglement.
pub const STRICT_MARGIN: f64 = 1e-12;
/// Size below which lower-order Bloch components count as absent.
pub const VANISHING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Entangled,
    Separable,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Entangled => "Entangled",
            Status::Separable => "Separable",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

/// Outcome of a test: the verdict plus the numbers that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: f64,
    pub bound: f64,
    /// Groups of 1-based subsystems the test was applied to, when not the plain N-partite split.
    pub partition: Option<Vec<Vec<usize>>>,
}

impl Verdict {
    fn necessary(witness: f64, bound: f64) -> Self {
        let status = if witness > bound + STRICT_MARGIN {
            Status::Entangled
        } else {
            Status::Inconclusive
        };
        Self {
            status,
            witness,
            bound,
            partition: None,
        }
    }

    fn with_partition(mut self, groups: Vec<Vec<usize>>) -> Self {
        self.partition = Some(groups);
        self
    }
}

/// `sqrt(Π d_k (d_k − 1) / 2^N)`, the largest Ky Fan norm of a fully separable state.
pub fn kyfan_bound(dims: &Dims) -> f64 {
    dims.iter().map(|&d| (d * (d - 1)) as f64 / 2.0).product::<f64>().sqrt()
}

fn require_multipartite(dims: &Dims) -> Result<()> {
    if dims.len() < 2 {
        return Err(Error::InvalidArgument(
            "a separability test needs at least two subsystems".into(),
        ));
    }
    Ok(())
}

/// Ky Fan norm of the full correlation tensor against [`kyfan_bound`].
pub fn kyfan_test(rho: &DensityMatrix) -> Result<Verdict> {
    require_multipartite(rho.dims())?;
    let all: Vec<usize> = (1..=rho.dims().len()).collect();
    let t = correlation_tensor(rho, &all)?;
    Ok(Verdict::necessary(t.kyfan_norm(), kyfan_bound(rho.dims())))
}

/// Ky Fan test on the reduced state of a subset of at least two subsystems.
pub fn kyfan_test_subsystem(rho: &DensityMatrix, subset: &[usize]) -> Result<Verdict> {
    let sel = rho.dims().selection(subset)?;
    if sel.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "subsystem test needs at least two subsystems, got {}",
            sel.len()
        )));
    }
    let keep: Vec<usize> = sel.iter().map(|k| k + 1).collect();
    let reduced = rho.reduce(&keep)?;
    Ok(kyfan_test(&reduced)?.with_partition(vec![keep]))
}

/// Validates a grouping of `{1..n}` into at least two nonempty blocks.
fn check_grouping(groups: &[Vec<usize>], n: usize) -> Result<()> {
    if groups.len() < 2 {
        return Err(Error::InvalidPartition("a grouping needs at least two blocks".into()));
    }
    let mut seen = vec![false; n];
    for g in groups {
        if g.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        for &k in g {
            numcore::check_index(k, n)?;
            if seen[k - 1] {
                return Err(Error::DuplicateIndex(k));
            }
            seen[k - 1] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::InvalidPartition(format!(
            "subsystem {} is not assigned to a block",
            missing + 1
        )));
    }
    Ok(())
}

/// Regards each block of `groups` as one subsystem of dimension `Π d_k`.
pub fn coarse_grain(rho: &DensityMatrix, groups: &[Vec<usize>]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    check_grouping(groups, dims.len())?;
    let order: Vec<usize> = groups.iter().flatten().copied().collect();
    let (m, _) = numcore::permute_subsystems(rho.matrix(), dims, &order)?;
    let merged = Dims::new(
        groups
            .iter()
            .map(|g| g.iter().map(|&k| dims[k - 1]).product())
            .collect(),
    )?;
    DensityMatrix::new(m, merged)
}

/// Ky Fan test after merging each block of `groups` into a single subsystem.
///
/// The SU(D) generators of each merged block are built afresh, so the bound is
/// the one for the coarse dimensions, e.g. `√6` for 3 qubits grouped as (12|3).
pub fn kyfan_test_partition(rho: &DensityMatrix, groups: &[Vec<usize>]) -> Result<Verdict> {
    let coarse = coarse_grain(rho, groups)?;
    Ok(kyfan_test(&coarse)?.with_partition(groups.to_vec()))
}

/// `sqrt(2^M Π(d_k − 1) / Π d_k)` over the subsystems of `subset`.
fn sufficiency_weight(dims: &Dims, subset: &[usize]) -> f64 {
    subset
        .iter()
        .map(|&k| {
            let d = dims[k - 1] as f64;
            2.0 * (d - 1.0) / d
        })
        .product::<f64>()
        .sqrt()
}

/// Smallest Σ|ξ| found among rank-1 expansions of an order ≥ 3 tensor.
///
/// Tries greedy completely orthogonal deflation and falls back to the exact
/// standard-basis expansion, which always exists.
pub fn rank_one_weight(t: &DenseTensor) -> f64 {
    let entrywise = tensor::entrywise_expansion(t).weight_sum();
    match tensor::orthogonal_deflation(t, &DeflationOptions::default()) {
        Some(k) => k.weight_sum().min(entrywise),
        None => entrywise,
    }
}

/// Sufficient condition for full separability.
///
/// Sums, over every nonempty subset `S`, `sqrt(2^M Π(d−1)/Π d)` times a norm
/// of the Bloch component for `S`: Euclidean for coherence vectors, matrix
/// Ky Fan for pairs, the rank-1 weight for larger subsets. A total of at most
/// one certifies separability.
pub fn sufficiency_test(rho: &DensityMatrix) -> Result<Verdict> {
    require_multipartite(rho.dims())?;
    let dims = rho.dims();
    let b = bloch::full_bloch(rho)?;
    let mut total = 0.0;
    for (k, s) in b.coherence.iter().enumerate() {
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        total += sufficiency_weight(dims, &[k + 1]) * norm;
    }
    for (subset, t) in &b.tensors {
        if t.max_abs() == 0.0 {
            continue;
        }
        let norm = if subset.len() == 2 {
            numcore::kyfan_norm_matrix(&t.unfold(1)?)
        } else {
            rank_one_weight(t)
        };
        total += sufficiency_weight(dims, subset) * norm;
    }
    let status = if total <= 1.0 {
        Status::Separable
    } else {
        Status::Inconclusive
    };
    Ok(Verdict {
        status,
        witness: total,
        bound: 1.0,
        partition: None,
    })
}

/// Exact test for N-qubit states whose only Bloch component is `T^(N)`.
///
/// When the preconditions hold and `T^(N)` has a completely orthogonal
/// expansion, the state is separable iff `‖T^(N)‖_KF ≤ 1`. Any failed
/// precondition yields [`Status::Inconclusive`].
pub fn nqubit_iff_test(rho: &DensityMatrix) -> Result<Verdict> {
    require_multipartite(rho.dims())?;
    let dims = rho.dims();
    let inconclusive = |witness: f64| Verdict {
        status: Status::Inconclusive,
        witness,
        bound: 1.0,
        partition: None,
    };
    if !dims.is_all_qubits() {
        return Ok(inconclusive(f64::NAN));
    }
    let b = bloch::full_bloch(rho)?;
    let full = b.full_tensor().expect("full tensor present for N >= 2").clone();
    let witness = full.kyfan_norm();
    let lower_vanish = b.coherence.iter().flatten().all(|x| x.abs() <= VANISHING_TOL)
        && b.tensors
            .iter()
            .filter(|(s, _)| s.len() < dims.len())
            .all(|(_, t)| t.max_abs() <= VANISHING_TOL);
    if !lower_vanish {
        return Ok(inconclusive(witness));
    }
    if tensor::orthogonal_deflation(&full, &DeflationOptions::default()).is_none() {
        return Ok(inconclusive(witness));
    }
    let status = if witness > 1.0 + STRICT_MARGIN {
        Status::Entangled
    } else {
        Status::Separable
    };
    Ok(Verdict {
        status,
        witness,
        bound: 1.0,
        partition: None,
    })
}

/// Smallest eigenvalue of the partial transpose on the `s` side of `cut`.
pub fn min_pt_eigenvalue(rho: &DensityMatrix, cut: &PartitionSpec) -> Result<f64> {
    if cut.num_parts() != rho.dims().len() {
        return Err(Error::InvalidPartition(format!(
            "cut is over {} subsystems, state has {}",
            cut.num_parts(),
            rho.dims().len()
        )));
    }
    let pt = numcore::partial_transpose(rho.matrix(), rho.dims(), cut.s())?;
    let vals = numcore::hermitian_eigenvalues(&pt)?;
    Ok(vals[0])
}

/// Peres test: a negative partial-transpose eigenvalue proves entanglement across `cut`.
///
/// The witness is `−λ_min(ρ^{T_s})` and the bound is [`PPT_TOL`].
pub fn ppt_test(rho: &DensityMatrix, cut: &PartitionSpec) -> Result<Verdict> {
    let min = min_pt_eigenvalue(rho, cut)?;
    let witness = -min;
    let status = if min < -PPT_TOL {
        Status::Entangled
    } else {
        Status::Inconclusive
    };
    Ok(Verdict {
        status,
        witness,
        bound: PPT_TOL,
        partition: Some(vec![cut.s().to_vec(), cut.t().to_vec()]),
    })
}
