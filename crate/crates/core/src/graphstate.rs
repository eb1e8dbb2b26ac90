//! Weighted graphs as density matrices.
//!
//! A graph on `n` vertices carries edge weights `a(u, v)` and real loop
//! weights `a(v, v)`. Its generalized Laplacian `Q`, divided by the degree sum,
//! is the associated state. Two conventions exist and are kept apart by
//! [`GraphKind`]:
//!
//! * **real**: `d_v = Σ_u a(u, v) + a(v, v)`, `Q_uv = −a(u, v)`, `Q_vv = d_v`;
//! * **complex**: `d_v = Σ_u |a(u, v)| + a(v, v)`, `Q_uv = a(u, v)`, `Q_vv = d_v`,
//!   with `a(v, u) = conj(a(u, v))`.
//!
//! Vertices are 0-based and labelled row-major by the subsystem dimensions,
//! so vertex `v` of a graph over `(d_1, ..., d_m)` is the basis state whose
//! digits are [`numcore::digits`]`(v, dims)`. Parts in [`PartitionSpec`] are 1-based.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{self, check_index, CMatrix, CVector, Dims};
use crate::state::DensityMatrix;

/// Weights with modulus at or below this are treated as absent.
pub const EDGE_TOL: f64 = 1e-12;
/// Tolerance on degree comparisons in the degree criterion.
pub const DEGREE_TOL: f64 = 1e-10;

/// Which Laplacian convention a graph follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Real,
    Complex,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Real => "real",
            GraphKind::Complex => "complex",
        })
    }
}

/// A bipartition `s | t` of parts `{1..m}`; `s` is nonempty and proper.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    m: usize,
    s: Vec<usize>,
    t: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(s: &[usize], m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for &k in s {
            check_index(k, m)?;
            if seen[k - 1] {
                return Err(Error::DuplicateIndex(k));
            }
            seen[k - 1] = true;
        }
        if s.is_empty() || s.len() == m {
            return Err(Error::InvalidPartition(format!(
                "s must be a nonempty proper subset of 1..={m}"
            )));
        }
        let s: Vec<usize> = (1..=m).filter(|k| seen[k - 1]).collect();
        let t: Vec<usize> = (1..=m).filter(|k| !seen[k - 1]).collect();
        Ok(Self { m, s, t })
    }

    /// Every bipartition with `1 ∈ s`, so each unordered cut appears once.
    pub fn all_cuts(m: usize) -> Vec<PartitionSpec> {
        (0u64..(1u64 << (m.saturating_sub(1))))
            .filter_map(|mask| {
                let s: Vec<usize> = std::iter::once(1)
                    .chain((2..=m).filter(|&k| mask >> (k - 2) & 1 == 1))
                    .collect();
                PartitionSpec::new(&s, m).ok()
            })
            .collect()
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    pub fn num_parts(&self) -> usize {
        self.m
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", join(&self.s), join(&self.t))
    }
}

/// Weighted graph with real or complex edge weights and real loops.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    kind: GraphKind,
    dims: Vec<usize>,
    n: usize,
    /// Keyed by `(u, v)` with `u < v`, holding `a(u, v)`.
    edges: BTreeMap<(usize, usize), Complex64>,
    loops: BTreeMap<usize, f64>,
}

/// Graph operators: η, L, N, Ω and the loop-only degree graph NL.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphOp {
    /// Negates every weight.
    Eta,
    /// Drops loops.
    L,
    /// Loops equal to the degrees, no edges.
    N,
    /// Keeps loops only.
    Omega,
    /// Loops equal to the loop-free part of the degrees, no edges.
    NL,
}

/// Result of the structural positivity screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdVerdict {
    Psd,
    NotPsd,
    Unknown,
}

/// Structural edit performed by [`WeightedGraph::edit_edge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditAction {
    Add,
    Delete,
}

impl WeightedGraph {
    /// Empty graph whose vertices are labelled by `dims` (each at least 1).
    pub fn new(kind: GraphKind, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptySelection);
        }
        if dims.contains(&0) {
            return Err(Error::InvalidDimension(0));
        }
        let n = dims.iter().product();
        Ok(Self {
            kind,
            dims,
            n,
            edges: BTreeMap::new(),
            loops: BTreeMap::new(),
        })
    }

    /// Empty graph on `n` vertices with a single-part labelling.
    pub fn with_vertices(kind: GraphKind, n: usize) -> Result<Self> {
        Self::new(kind, vec![n])
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Edges as `((u, v), a(u, v))` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.edges.iter().map(|(&k, &w)| (k, w))
    }

    pub fn loops(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.loops.iter().map(|(&k, &w)| (k, w))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::IndexOutOfRange {
                index: v,
                max: self.n.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// Sets `a(u, v)` (and implicitly `a(v, u) = conj`). A weight of modulus
    /// at most [`EDGE_TOL`] removes the edge.
    pub fn set_edge(&mut self, u: usize, v: usize, w: Complex64) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(format!(
                "edge endpoints must differ; use set_loop for vertex {u}"
            )));
        }
        if self.kind == GraphKind::Real && w.im.abs() > EDGE_TOL {
            return Err(Error::UnsupportedGraphKind(
                "real graphs cannot hold complex edge weights".into(),
            ));
        }
        let (key, w) = if u < v { ((u, v), w) } else { ((v, u), w.conj()) };
        let w = if self.kind == GraphKind::Real {
            Complex64::new(w.re, 0.0)
        } else {
            w
        };
        if w.norm() <= EDGE_TOL {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, w);
        }
        Ok(())
    }

    /// Real-weight convenience for [`WeightedGraph::set_edge`].
    pub fn set_edge_real(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        self.set_edge(u, v, Complex64::new(w, 0.0))
    }

    /// Sets the loop weight at `v`; zero removes the loop.
    pub fn set_loop(&mut self, v: usize, w: f64) -> Result<()> {
        self.check_vertex(v)?;
        if w.abs() <= EDGE_TOL {
            self.loops.remove(&v);
        } else {
            self.loops.insert(v, w);
        }
        Ok(())
    }

    /// `a(u, v)`, zero when absent.
    pub fn weight(&self, u: usize, v: usize) -> Complex64 {
        if u == v {
            return Complex64::new(self.loop_weight(u), 0.0);
        }
        match self.edges.get(&(u.min(v), u.max(v))) {
            Some(&w) if u < v => w,
            Some(&w) => w.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn loop_weight(&self, v: usize) -> f64 {
        self.loops.get(&v).copied().unwrap_or(0.0)
    }

    /// Contribution of an edge weight to the degree under this graph's convention.
    fn edge_degree(&self, w: Complex64) -> f64 {
        match self.kind {
            GraphKind::Real => w.re,
            GraphKind::Complex => w.norm(),
        }
    }

    /// Degree of every vertex, loops included.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (&(u, v), &w) in &self.edges {
            let x = self.edge_degree(w);
            d[u] += x;
            d[v] += x;
        }
        for (&v, &w) in &self.loops {
            d[v] += w;
        }
        d
    }

    /// Degree sum `Σ_v d_v`.
    pub fn degree_sum(&self) -> f64 {
        self.degrees().iter().sum()
    }

    /// Neighbours of `v` (loops excluded) with `a(v, u)`.
    pub fn neighbours(&self, v: usize) -> Vec<(usize, Complex64)> {
        self.edges
            .iter()
            .filter_map(|(&(a, b), &w)| {
                if a == v {
                    Some((b, w))
                } else if b == v {
                    Some((a, w.conj()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// The generalized Laplacian `Q`.
    pub fn laplacian(&self) -> CMatrix {
        let mut q = CMatrix::zeros(self.n, self.n);
        for (v, d) in self.degrees().into_iter().enumerate() {
            q[(v, v)] = Complex64::new(d, 0.0);
        }
        for (&(u, v), &w) in &self.edges {
            let x = match self.kind {
                GraphKind::Real => -w,
                GraphKind::Complex => w,
            };
            q[(u, v)] = x;
            q[(v, u)] = x.conj();
        }
        q
    }

    fn state_dims(&self) -> Result<Dims> {
        let nontrivial: Vec<usize> = self.dims.iter().copied().filter(|&d| d > 1).collect();
        if nontrivial.is_empty() {
            return Err(Error::InvalidDimension(1));
        }
        Dims::new(nontrivial)
    }

    /// `σ = Q / Σ d_v`, checked to be positive semidefinite.
    pub fn density(&self) -> Result<DensityMatrix> {
        let total = self.degree_sum();
        if total.abs() <= EDGE_TOL {
            return Err(Error::ZeroDegreeSum);
        }
        DensityMatrix::new(self.laplacian().unscale(total), self.state_dims()?)
    }

    /// Builds the graph whose Laplacian is `q` (Hermitian, and real for [`GraphKind::Real`]).
    pub fn from_laplacian(q: &CMatrix, kind: GraphKind, dims: Vec<usize>) -> Result<Self> {
        let mut g = Self::new(kind, dims)?;
        if q.nrows() != g.n || q.ncols() != g.n {
            return Err(Error::DimensionMismatch {
                expected: g.n,
                found: q.nrows(),
            });
        }
        if !numcore::is_hermitian(q, 1e-9) {
            return Err(Error::NotHermitian {
                deviation: numcore::hermitian_deviation(q),
            });
        }
        let scale = numcore::max_abs(q).max(1.0);
        for i in 0..g.n {
            for j in i + 1..g.n {
                let x = q[(i, j)];
                if x.norm() <= EDGE_TOL * scale {
                    continue;
                }
                let w = match kind {
                    GraphKind::Real => {
                        if x.im.abs() > EDGE_TOL * scale {
                            return Err(Error::UnsupportedGraphKind(
                                "a real graph needs a real Laplacian".into(),
                            ));
                        }
                        Complex64::new(-x.re, 0.0)
                    }
                    GraphKind::Complex => x,
                };
                g.set_edge(i, j, w)?;
            }
        }
        let partial = g.degrees();
        for (v, p) in partial.into_iter().enumerate() {
            let lp = q[(v, v)].re - p;
            if lp.abs() > EDGE_TOL * scale {
                g.set_loop(v, lp)?;
            }
        }
        Ok(g)
    }

    /// Graph of a density matrix; its degree sum is 1 so `σ(G) = ρ`.
    pub fn from_density(rho: &DensityMatrix, kind: GraphKind) -> Result<Self> {
        Self::from_laplacian(rho.matrix(), kind, rho.dims().to_vec())
    }

    /// Purity test: `Σ d_v² + 2 Σ |a(u, v)|² = (Σ d_v)²`, relative tolerance 1e-9.
    pub fn is_pure(&self) -> Result<bool> {
        self.require_psd()?;
        let d = self.degrees();
        let total: f64 = d.iter().sum();
        let lhs: f64 =
            d.iter().map(|x| x * x).sum::<f64>() + 2.0 * self.edges.values().map(|w| w.norm_sqr()).sum::<f64>();
        Ok((lhs - total * total).abs() <= 1e-9 * (total * total).max(1e-300))
    }

    fn require_psd(&self) -> Result<()> {
        let q = self.laplacian();
        let vals = numcore::hermitian_eigenvalues(&q)?;
        let min = vals.first().copied().unwrap_or(0.0);
        if min < -numcore::PSD_TOL * numcore::max_abs(&q).max(1.0) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(())
    }

    /// Writes `Q` as `Σ c_k |x_k><x_k|`.
    ///
    /// Each edge gives `2|a| · P[(|u> + conj(â)|v>)/√2]` (complex, `â = a/|a|`)
    /// or `2a · P[(|u> − |v>)/√2]` (real); each loop gives `a(v,v) · P[|v>]`.
    /// Coefficients may be negative when `Q` is not positive semidefinite.
    pub fn projector_decomposition(&self) -> Vec<(f64, CVector)> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::with_capacity(self.edges.len() + self.loops.len());
        for (&(u, v), &w) in &self.edges {
            let mut x = CVector::zeros(self.n);
            x[u] = Complex64::new(r, 0.0);
            let (coeff, phase) = match self.kind {
                GraphKind::Real => (2.0 * w.re, Complex64::new(-1.0, 0.0)),
                GraphKind::Complex => (2.0 * w.norm(), (w / w.norm()).conj()),
            };
            x[v] = phase * r;
            out.push((coeff, x));
        }
        for (&v, &w) in &self.loops {
            let mut x = CVector::zeros(self.n);
            x[v] = Complex64::new(1.0, 0.0);
            out.push((w, x));
        }
        out
    }

    /// Von Neumann entropy of `σ(G)` in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let rho = self.density()?;
        let vals = numcore::hermitian_eigenvalues(rho.matrix())?;
        Ok(vals.into_iter().filter(|&l| l > 1e-15).map(|l| -l * l.log2()).sum())
    }

    /// Applies one of the graph operators.
    pub fn apply(&self, op: GraphOp) -> WeightedGraph {
        let mut g = WeightedGraph {
            kind: self.kind,
            dims: self.dims.clone(),
            n: self.n,
            edges: BTreeMap::new(),
            loops: BTreeMap::new(),
        };
        match op {
            GraphOp::Eta => {
                g.edges = self.edges.iter().map(|(&k, &w)| (k, -w)).collect();
                g.loops = self.loops.iter().map(|(&k, &w)| (k, -w)).collect();
            }
            GraphOp::L => g.edges = self.edges.clone(),
            GraphOp::Omega => g.loops = self.loops.clone(),
            GraphOp::N => {
                for (v, d) in self.degrees().into_iter().enumerate() {
                    g.set_loop(v, d).expect("vertex in range");
                }
            }
            GraphOp::NL => {
                let loopless = self.apply(GraphOp::L);
                for (v, d) in loopless.degrees().into_iter().enumerate() {
                    g.set_loop(v, d).expect("vertex in range");
                }
            }
        }
        g
    }

    fn same_kind(&self, other: &WeightedGraph) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::GraphKindMismatch);
        }
        Ok(())
    }

    /// Disjoint edge union: weights of coinciding edges and loops add.
    ///
    /// `Q` is additive under this union for real graphs, and for complex
    /// graphs whenever coinciding edges share a phase.
    pub fn union(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.same_kind(other)?;
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "vertex labellings {:?} and {:?} differ",
                self.dims, other.dims
            )));
        }
        let mut g = self.clone();
        for (&(u, v), &w) in &other.edges {
            let cur = g.weight(u, v);
            g.set_edge(u, v, cur + w)?;
        }
        for (&v, &w) in &other.loops {
            let cur = g.loop_weight(v);
            g.set_loop(v, cur + w)?;
        }
        Ok(g)
    }

    /// Graph tensor product: adjacency (loops on the diagonal) `M(g) ⊗ M(h)`.
    pub fn tensor(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.same_kind(other)?;
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut g = WeightedGraph::new(self.kind, dims)?;
        let m = other.n;
        let entries = |h: &WeightedGraph| -> Vec<(usize, usize, Complex64)> {
            let mut e: Vec<(usize, usize, Complex64)> = Vec::new();
            for (&(u, v), &w) in &h.edges {
                e.push((u, v, w));
                e.push((v, u, w.conj()));
            }
            for (&v, &w) in &h.loops {
                e.push((v, v, Complex64::new(w, 0.0)));
            }
            e
        };
        let (eg, eh) = (entries(self), entries(other));
        for &(v, w, a) in &eg {
            for &(x, y, b) in &eh {
                let (p, q) = (v * m + x, w * m + y);
                let c = a * b;
                if p == q {
                    g.set_loop(p, g.loop_weight(p) + c.re)?;
                } else if p < q {
                    g.set_edge(p, q, g.weight(p, q) + c)?;
                }
            }
        }
        Ok(g)
    }

    /// Modified tensor product, built so that `Q(g ⊡ h) = Q(g) ⊗ Q(h)`.
    ///
    /// Real: `L(g)⊗Lη(h) ⊍ L(g)⊗N(h) ⊍ N(g)⊗L(h) ⊍ Ω(g)⊗Ω(h)`.
    /// Complex: `L(g)⊗L(h) ⊍ L(g)⊗N(h) ⊍ N(g)⊗L(h) ⊍ Ω(g)⊗Ω(h)` with loops
    /// lowered by `2·NL(g)⊗NL(h)`.
    pub fn modified_tensor_product(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.same_kind(other)?;
        use GraphOp::*;
        let lg = self.apply(L);
        let ng = self.apply(N);
        let lh = other.apply(L);
        let nh = other.apply(N);
        let first = match self.kind {
            GraphKind::Real => lg.tensor(&lh.apply(Eta))?,
            GraphKind::Complex => lg.tensor(&lh)?,
        };
        let mut g = first
            .union(&lg.tensor(&nh)?)?
            .union(&ng.tensor(&lh)?)?
            .union(&self.apply(Omega).tensor(&other.apply(Omega))?)?;
        if self.kind == GraphKind::Complex {
            let corr = self.apply(NL).tensor(&other.apply(NL))?;
            for (v, w) in corr.loops() {
                g.set_loop(v, g.loop_weight(v) - 2.0 * w)?;
            }
        }
        Ok(g)
    }

    /// Cartesian product `L(g)⊗N(h) ⊍ N(g)⊗L(h)`.
    pub fn cartesian_product(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.same_kind(other)?;
        self.apply(GraphOp::L)
            .tensor(&other.apply(GraphOp::N))?
            .union(&self.apply(GraphOp::N).tensor(&other.apply(GraphOp::L))?)
    }

    /// Graph of the state with the 1-based parts in `traced` traced out.
    ///
    /// Edge weights of the reduced graph are `a'(i, j) = Σ_k a((i,k), (j,k))`;
    /// loops restore the reduced degrees `Σ_k d_(i,k)`.
    pub fn trace_out(&self, traced: &[usize]) -> Result<WeightedGraph> {
        let m = self.dims.len();
        let mut is_traced = vec![false; m];
        for &k in traced {
            check_index(k, m)?;
            if is_traced[k - 1] {
                return Err(Error::DuplicateIndex(k));
            }
            is_traced[k - 1] = true;
        }
        if traced.is_empty() || traced.len() == m {
            return Err(Error::InvalidPartition(
                "trace out a nonempty proper subset of the parts".into(),
            ));
        }
        let kept_dims: Vec<usize> = (0..m).filter(|&k| !is_traced[k]).map(|k| self.dims[k]).collect();
        let split = |v: usize| -> (usize, usize) {
            let dg = numcore::digits(v, &self.dims);
            let mut keep = 0;
            let mut rest = 0;
            for k in 0..m {
                if is_traced[k] {
                    rest = rest * self.dims[k] + dg[k];
                } else {
                    keep = keep * self.dims[k] + dg[k];
                }
            }
            (keep, rest)
        };
        let mut g = WeightedGraph::new(self.kind, kept_dims)?;
        for (&(u, v), &w) in &self.edges {
            let ((iu, ru), (iv, rv)) = (split(u), split(v));
            if ru == rv && iu != iv {
                g.set_edge(iu, iv, g.weight(iu, iv) + w)?;
            }
        }
        let mut reduced_deg = vec![0.0; g.n];
        for (v, d) in self.degrees().into_iter().enumerate() {
            reduced_deg[split(v).0] += d;
        }
        let partial = g.degrees();
        for v in 0..g.n {
            g.set_loop(v, reduced_deg[v] - partial[v])?;
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<WeightedGraph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            self.check_vertex(p)?;
            if seen[p] {
                return Err(Error::DuplicateIndex(p));
            }
            seen[p] = true;
        }
        let mut g = WeightedGraph::new(self.kind, self.dims.clone())?;
        for (&(u, v), &w) in &self.edges {
            g.set_edge(perm[u], perm[v], w)?;
        }
        for (&v, &w) in &self.loops {
            g.set_loop(perm[v], w)?;
        }
        Ok(g)
    }

    /// Vertex pair reached from the edge `(v, w)` by swapping the `s`-digits.
    fn transpose_pair(&self, v: usize, w: usize, cut: &PartitionSpec) -> (usize, usize) {
        let mut dv = numcore::digits(v, &self.dims);
        let mut dw = numcore::digits(w, &self.dims);
        for &k in cut.s() {
            std::mem::swap(&mut dv[k - 1], &mut dw[k - 1]);
        }
        // (v_s, v_t), (w_s, w_t) become (w_s, v_t), (v_s, w_t).
        (
            numcore::flat_index(&dv, &self.dims),
            numcore::flat_index(&dw, &self.dims),
        )
    }

    fn check_cut(&self, cut: &PartitionSpec) -> Result<()> {
        if cut.num_parts() != self.dims.len() {
            return Err(Error::InvalidPartition(format!(
                "cut is over {} parts, graph labelling has {}",
                cut.num_parts(),
                self.dims.len()
            )));
        }
        Ok(())
    }

    /// Partial transpose `T_s`: edge `{(v_s,v_t), (w_s,w_t)}` moves to
    /// `{(w_s,v_t), (v_s,w_t)}` carrying `a(v, w)` in that orientation; loops stay.
    ///
    /// Off the diagonal this coincides with the matrix partial transpose of `Q`.
    pub fn partial_transpose(&self, cut: &PartitionSpec) -> Result<WeightedGraph> {
        self.check_cut(cut)?;
        let mut g = WeightedGraph::new(self.kind, self.dims.clone())?;
        for (&(v, w), &a) in &self.edges {
            let (p, q) = self.transpose_pair(v, w, cut);
            g.set_edge(p, q, a)?;
        }
        g.loops = self.loops.clone();
        Ok(g)
    }

    /// Degree criterion: `T_s` leaves every vertex degree unchanged.
    pub fn degree_criterion(&self, cut: &PartitionSpec) -> Result<bool> {
        let d0 = self.degrees();
        let d1 = self.partial_transpose(cut)?.degrees();
        let scale = d0.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        Ok(d0.iter().zip(&d1).all(|(a, b)| (a - b).abs() <= DEGREE_TOL * scale))
    }

    /// Whether `T_s` maps the edge set into itself with matching `|a|`.
    pub fn edge_set_closed(&self, cut: &PartitionSpec) -> Result<bool> {
        self.check_cut(cut)?;
        let scale = self.edges.values().fold(1e-300f64, |m, w| m.max(w.norm()));
        for (&(v, w), &a) in &self.edges {
            let (p, q) = self.transpose_pair(v, w, cut);
            let image = self.weight(p, q);
            if p == q || (image.norm() - a.norm()).abs() > 1e-9 * scale || image.norm() <= EDGE_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Hermitian operator read off the graph; equal to its Laplacian, with no
    /// positivity or trace requirement.
    pub fn observable(&self) -> CMatrix {
        self.laplacian()
    }

    /// Structural edit of the real graph.
    ///
    /// Deleting a positive edge removes it and every loop, then adds loops
    /// `2|a|` at both ends of each remaining negative edge. Adding a negative
    /// edge also adds loops `2|a|` at its ends. Other edits are plain.
    /// With `u == v` the loop weight is added or removed.
    pub fn edit_edge(&self, u: usize, v: usize, weight: f64, action: EditAction) -> Result<WeightedGraph> {
        if self.kind != GraphKind::Real {
            return Err(Error::UnsupportedGraphKind(
                "compensated edge edits are defined for real graphs only".into(),
            ));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        if u == v {
            match action {
                EditAction::Add => g.set_loop(u, g.loop_weight(u) + weight)?,
                EditAction::Delete => {
                    if !self.loops.contains_key(&u) {
                        return Err(Error::MissingEdge { u, v });
                    }
                    g.set_loop(u, 0.0)?;
                }
            }
            return Ok(g);
        }
        match action {
            EditAction::Add => {
                g.set_edge_real(u, v, g.weight(u, v).re + weight)?;
                if weight < 0.0 {
                    for x in [u, v] {
                        g.set_loop(x, g.loop_weight(x) + 2.0 * weight.abs())?;
                    }
                }
            }
            EditAction::Delete => {
                let current = self.weight(u, v).re;
                if !self.has_edge(u, v) {
                    return Err(Error::MissingEdge { u, v });
                }
                g.set_edge_real(u, v, 0.0)?;
                if current > 0.0 {
                    g.loops.clear();
                    let negative: Vec<((usize, usize), f64)> = g
                        .edges
                        .iter()
                        .filter(|(_, w)| w.re < 0.0)
                        .map(|(&k, w)| (k, w.re))
                        .collect();
                    for ((a, b), w) in negative {
                        for x in [a, b] {
                            g.set_loop(x, g.loop_weight(x) + 2.0 * w.abs())?;
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Vertices touched by at least one edge.
    fn nonisolated(&self) -> Vec<bool> {
        let mut touched = vec![false; self.n];
        for &(u, v) in self.edges.keys() {
            touched[u] = true;
            touched[v] = true;
        }
        touched
    }

    /// The two fast rejections: a zero-degree vertex with edges, or (real)
    /// loops that are all negative.
    fn quick_reject(&self) -> bool {
        let d = self.degrees();
        let scale = d.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let touched = self.nonisolated();
        if (0..self.n).any(|v| touched[v] && d[v].abs() <= EDGE_TOL * scale) {
            return true;
        }
        self.kind == GraphKind::Real && !self.loops.is_empty() && self.loops.values().all(|&w| w < 0.0)
    }

    /// Principal subgraph without vertex `u`, with neighbour loops raised to keep their degrees.
    fn theta(&self, u: usize) -> WeightedGraph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != u).collect();
        let index = |v: usize| if v < u { v } else { v - 1 };
        let mut g = WeightedGraph::new(self.kind, vec![self.n - 1]).expect("n >= 2");
        for (&(a, b), &w) in &self.edges {
            if a != u && b != u {
                g.set_edge(index(a), index(b), w).expect("in range");
            }
        }
        for &v in &keep {
            let extra = self.edge_degree(self.weight(u, v));
            let w = self.loop_weight(v) + extra;
            g.set_loop(index(v), w).expect("in range");
        }
        g
    }

    fn is_tree(&self) -> bool {
        if self.n < 2 || self.edges.len() != self.n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(u, v) in self.edges.keys() {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Structural positivity screen; [`PsdVerdict::Unknown`] means "ask the eigenvalues".
    pub fn psd_screen(&self) -> PsdVerdict {
        if self.quick_reject() {
            return PsdVerdict::NotPsd;
        }
        let real = self.kind == GraphKind::Real;
        if real && self.loops.is_empty() && self.is_tree() {
            return if self.edges.values().all(|w| w.re > 0.0) {
                PsdVerdict::Psd
            } else {
                PsdVerdict::NotPsd
            };
        }
        let loops_nonneg = self.loops.values().all(|&w| w >= 0.0);
        if real && loops_nonneg && self.edges.values().all(|w| w.re > 0.0) {
            return PsdVerdict::Psd;
        }
        if !real && loops_nonneg {
            return PsdVerdict::Psd;
        }
        let q = self.laplacian();
        let dominant = (0..self.n).all(|i| {
            let off: f64 = (0..self.n).filter(|&j| j != i).map(|j| q[(i, j)].norm()).sum();
            q[(i, i)].re >= 0.0 && q[(i, i)].re >= off
        });
        if dominant {
            return PsdVerdict::Psd;
        }
        if self.n >= 2 && (0..self.n).any(|u| self.theta(u).quick_reject()) {
            return PsdVerdict::NotPsd;
        }
        PsdVerdict::Unknown
    }
}

/// `σ = Σ p_i σ(G_i)` as a graph (degree sum 1).
pub fn convex_combine(graphs: &[WeightedGraph], weights: &[f64]) -> Result<WeightedGraph> {
    if graphs.is_empty() {
        return Err(Error::EmptySelection);
    }
    if graphs.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: graphs.len(),
            found: weights.len(),
        });
    }
    if let Some(&p) = weights.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidProbability(p));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "mixing weights sum to {total}, expected 1"
        )));
    }
    let first = &graphs[0];
    let mut q = CMatrix::zeros(first.n, first.n);
    for (g, &p) in graphs.iter().zip(weights) {
        first.same_kind(g)?;
        if g.dims != first.dims {
            return Err(Error::ShapeMismatch("graphs have different vertex labellings".into()));
        }
        let d = g.degree_sum();
        if d.abs() <= EDGE_TOL {
            return Err(Error::ZeroDegreeSum);
        }
        q += g.laplacian() * Complex64::new(p / d, 0.0);
    }
    WeightedGraph::from_laplacian(&q, first.kind, first.dims.clone())
}
