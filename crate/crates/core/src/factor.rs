//! Full factorization of pure multipartite states through graph cuts.
//!
//! A pure state's graph is the clique on its nonzero amplitudes. The state
//! splits across `s | t` exactly when the partial transpose `T_s` preserves
//! every vertex degree, so factorization reduces to a search over cuts. The
//! search starts at the smallest block size `s_1` that can host the largest
//! prime factor of the clique size, and a prime clique size short-circuits to
//! looking for a subsystem whose level is the same on every nonzero amplitude.

use num_complex::Complex64;

use crate::bloch;
use crate::error::{Error, Result};
use crate::graphstate::{GraphKind, PartitionSpec, WeightedGraph};
use crate::numcore::{self, CVector, Dims};
use crate::state::PureState;

/// Amplitudes with modulus at or below this are structural zeros.
pub const AMPLITUDE_ZERO: f64 = 1e-12;

/// Node of a factorization: the (1-based, original) subsystems it covers and their state.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorTree {
    pub subsystems: Vec<usize>,
    pub state: PureState,
    pub children: Vec<FactorTree>,
}

impl FactorTree {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Irreducible factors, ordered by their smallest subsystem.
    pub fn leaves(&self) -> Vec<&FactorTree> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_by_key(|l| l.subsystems[0]);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a FactorTree>) {
        if self.is_leaf() {
            out.push(self);
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    /// Subsystem groups of the leaves.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        self.leaves().into_iter().map(|l| l.subsystems.clone()).collect()
    }

    /// Tensor product of the leaves, returned in the original subsystem order.
    pub fn product_state(&self) -> Result<PureState> {
        let leaves = self.leaves();
        let mut acc = leaves[0].state.clone();
        let mut order: Vec<usize> = leaves[0].subsystems.clone();
        for l in &leaves[1..] {
            acc = acc.tensor(&l.state);
            order.extend_from_slice(&l.subsystems);
        }
        // Subsystem k of the product sits at position of k in `order`; invert.
        let mut inverse = vec![0; order.len()];
        for (pos, &k) in order.iter().enumerate() {
            inverse[k - 1] = pos + 1;
        }
        acc.permute(&inverse)
    }
}

/// Copy of `psi` with structural zeros cleared.
fn cleaned(psi: &PureState) -> PureState {
    let v = psi.amplitudes().map(|a| {
        if a.norm() <= AMPLITUDE_ZERO {
            Complex64::new(0.0, 0.0)
        } else {
            a
        }
    });
    PureState::normalized(v, psi.dims().clone()).expect("state has a nonzero amplitude")
}

/// Graph of `|ψ><ψ|` under the complex convention.
pub fn state_graph(psi: &PureState) -> Result<WeightedGraph> {
    WeightedGraph::from_density(&cleaned(psi).to_density(), GraphKind::Complex)
}

fn check_cut(psi: &PureState, cut: &PartitionSpec) -> Result<()> {
    if cut.num_parts() != psi.dims().len() {
        return Err(Error::InvalidPartition(format!(
            "cut is over {} parts, state has {}",
            cut.num_parts(),
            psi.dims().len()
        )));
    }
    Ok(())
}

/// Whether the state graph's edge set is closed under `T_s` with matching `|a|`.
pub fn edge_closure_test(psi: &PureState, cut: &PartitionSpec) -> Result<bool> {
    check_cut(psi, cut)?;
    state_graph(psi)?.edge_set_closed(cut)
}

/// Degree criterion on the state graph.
pub fn degree_test(psi: &PureState, cut: &PartitionSpec) -> Result<bool> {
    check_cut(psi, cut)?;
    state_graph(psi)?.degree_criterion(cut)
}

/// Bloch-side check: after merging `s` and `t` into one subsystem each, the
/// two-party correlation tensor is the outer product of the two coherence vectors.
pub fn bloch_factor_oracle(psi: &PureState, cut: &PartitionSpec) -> Result<bool> {
    check_cut(psi, cut)?;
    bloch::is_product_pure(&two_block(psi, cut)?)
}

/// `psi` reordered as `s` then `t` and viewed as a two-party state.
fn two_block(psi: &PureState, cut: &PartitionSpec) -> Result<PureState> {
    let order: Vec<usize> = cut.s().iter().chain(cut.t()).copied().collect();
    let permuted = psi.permute(&order)?;
    let ds: usize = cut.s().iter().map(|&k| psi.dims()[k - 1]).product();
    let dt: usize = cut.t().iter().map(|&k| psi.dims()[k - 1]).product();
    permuted.regroup(Dims::new(vec![ds, dt])?)
}

/// Largest prime factor of `n` (1 for `n ≤ 1`).
pub fn largest_prime_factor(mut n: usize) -> usize {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            best = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        best = best.max(n);
    }
    best
}

fn is_prime(n: usize) -> bool {
    n >= 2 && largest_prime_factor(n) == n
}

/// Least `s` such that the `s` largest dimensions multiply to at least `p`.
pub fn min_block_size(dims: &[usize], p: usize) -> usize {
    let mut sorted = dims.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prod = 1;
    for (i, d) in sorted.iter().enumerate() {
        prod *= d;
        if prod >= p {
            return i + 1;
        }
    }
    dims.len()
}

/// Candidate cuts in search order: ascending `|s|` from `s_1` to `m − 1`, then lexicographic.
pub fn candidate_cuts(dims: &[usize], clique: usize) -> Vec<PartitionSpec> {
    let m = dims.len();
    let s1 = min_block_size(dims, largest_prime_factor(clique)).max(1);
    let mut out = Vec::new();
    for size in s1..m {
        for s in combinations(m, size) {
            out.push(PartitionSpec::new(&s, m).expect("proper nonempty subset"));
        }
    }
    out
}

/// `k`-subsets of `{1..n}` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn support(psi: &PureState) -> Vec<usize> {
    psi.amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > AMPLITUDE_ZERO)
        .map(|(i, _)| i)
        .collect()
}

/// First subsystem (1-based) whose level is identical across the support.
fn common_symbol(psi: &PureState, support: &[usize]) -> Option<usize> {
    let dims = psi.dims();
    let digits: Vec<Vec<usize>> = support.iter().map(|&x| numcore::digits(x, dims)).collect();
    (0..dims.len())
        .find(|&k| digits.iter().all(|d| d[k] == digits[0][k]))
        .map(|k| k + 1)
}

/// Dominant eigenvector of the reduced state on `keep`, phase-fixed so its
/// largest-modulus amplitude is real and positive.
fn reduced_factor(psi: &PureState, keep: &[usize]) -> Result<PureState> {
    let rho = psi.to_density().reduce(keep)?;
    let (_, vecs) = numcore::hermitian_eigen(rho.matrix())?;
    let mut v: CVector = vecs.column(vecs.ncols() - 1).into_owned();
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty vector");
    let phase = pivot.conj() / pivot.norm();
    v *= phase;
    PureState::normalized(v, rho.dims().clone())
}

/// Splits `psi` across the first passing cut, returning the cut and both factors.
pub fn factor_once(psi: &PureState) -> Result<Option<(PartitionSpec, PureState, PureState)>> {
    PureState::new(psi.amplitudes().clone(), psi.dims().clone())?;
    let m = psi.dims().len();
    if m < 2 {
        return Ok(None);
    }
    let psi = cleaned(psi);
    let supp = support(&psi);
    let clique = supp.len();
    let cut = if clique == 1 || is_prime(clique) {
        match common_symbol(&psi, &supp) {
            Some(k) => Some(PartitionSpec::new(&[k], m)?),
            None => None,
        }
    } else {
        let graph = state_graph(&psi)?;
        let mut found = None;
        for cut in candidate_cuts(psi.dims(), clique) {
            if graph.degree_criterion(&cut)? {
                found = Some(cut);
                break;
            }
        }
        found
    };
    match cut {
        None => Ok(None),
        Some(cut) => {
            let a = reduced_factor(&psi, cut.s())?;
            let b = reduced_factor(&psi, cut.t())?;
            Ok(Some((cut, a, b)))
        }
    }
}

/// Recursively factors `psi` into irreducible pieces.
pub fn full_factorize(psi: &PureState) -> Result<FactorTree> {
    PureState::new(psi.amplitudes().clone(), psi.dims().clone())?;
    let labels: Vec<usize> = (1..=psi.dims().len()).collect();
    factorize_labeled(psi, labels)
}

fn factorize_labeled(psi: &PureState, labels: Vec<usize>) -> Result<FactorTree> {
    let children = match factor_once(psi)? {
        None => Vec::new(),
        Some((cut, a, b)) => {
            let la = cut.s().iter().map(|&k| labels[k - 1]).collect();
            let lb = cut.t().iter().map(|&k| labels[k - 1]).collect();
            vec![factorize_labeled(&a, la)?, factorize_labeled(&b, lb)?]
        }
    };
    Ok(FactorTree {
        subsystems: labels,
        state: psi.clone(),
        children,
    })
}
