//! Dense complex linear algebra and the SU(d) operator basis.
//!
//! Multipartite Hilbert spaces are laid out row-major over the subsystem
//! dimensions: basis state `|i_1 i_2 ... i_N>` sits at index
//! `((i_1 * d_2 + i_2) * d_3 + i_3) ...`, so the first subsystem varies
//! slowest. Eigen- and singular-value kernels are delegated to `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row and column indices 0-based.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;
/// Dense real matrix.
pub type RMatrix = DMatrix<f64>;

/// Relative tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default relative tolerance for positive-semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Ordered list of subsystem dimensions `d_1, ..., d_N`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptySelection);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(bad));
        }
        Ok(Self(dims))
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of subsystems.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of the full Hilbert space.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Dimension of subsystem `k` (1-based).
    pub fn get(&self, k: usize) -> Result<usize> {
        check_index(k, self.len())?;
        Ok(self.0[k - 1])
    }

    pub fn is_all_qubits(&self) -> bool {
        self.0.iter().all(|&d| d == 2)
    }

    /// Validates a 1-based subsystem selection and returns it sorted and 0-based.
    pub fn selection(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(subset.len());
        for &k in subset {
            check_index(k, self.len())?;
            if out.contains(&(k - 1)) {
                return Err(Error::DuplicateIndex(k));
            }
            out.push(k - 1);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Dimensions of the selected (1-based) subsystems, in ascending order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Dims> {
        let sel = self.selection(subset)?;
        if sel.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(Dims(sel.iter().map(|&k| self.0[k]).collect()))
    }
}

impl std::ops::Deref for Dims {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

pub(crate) fn check_index(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        Err(Error::IndexOutOfRange { index: k, max })
    } else {
        Ok(())
    }
}

/// Splits a flat row-major index into per-subsystem digits.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Inverse of [`digits`].
pub fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

fn check_square(a: &CMatrix, side: usize) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, found {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() != side {
        return Err(Error::DimensionMismatch {
            expected: side,
            found: a.nrows(),
        });
    }
    Ok(())
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest deviation `|a_ij - conj(a_ji)|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Hermiticity check relative to the largest entry.
pub fn is_hermitian(a: &CMatrix, rel_tol: f64) -> bool {
    a.nrows() == a.ncols() && hermitian_deviation(a) <= rel_tol * max_abs(a).max(1e-300)
}

fn require_hermitian(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, found {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let dev = hermitian_deviation(a);
    // Inputs assembled from floating-point sums pick up round-off well above
    // 1e-12 relative, so eigen-routines accept a looser bound than the
    // invariant check in `is_hermitian`.
    if dev > 1e-9 * max_abs(a).max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::from_element(1, 1, ONE), |acc, f| acc.kronecker(f))
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// Outer product `|a><b|`.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Reduced matrix on the 1-based subsystems in `keep`, tracing out the rest.
///
/// The kept subsystems appear in ascending order in the result.
pub fn partial_trace(rho: &CMatrix, dims: &Dims, keep: &[usize]) -> Result<CMatrix> {
    check_square(rho, dims.total())?;
    let kept = dims.selection(keep)?;
    if kept.is_empty() {
        return Err(Error::EmptySelection);
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let kdims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let nk: usize = kdims.iter().product();
    let nt: usize = tdims.iter().product();

    // full[kept_index * nt + traced_index] = flat index in the full space
    let mut full = vec![0usize; nk * nt];
    for x in 0..dims.total() {
        let dg = digits(x, dims);
        let ki = flat_index(&kept.iter().map(|&k| dg[k]).collect::<Vec<_>>(), &kdims);
        let ti = flat_index(&traced.iter().map(|&k| dg[k]).collect::<Vec<_>>(), &tdims);
        full[ki * nt + ti] = x;
    }
    let mut out = CMatrix::zeros(nk, nk);
    for i in 0..nk {
        for j in 0..nk {
            let mut acc = ZERO;
            for t in 0..nt {
                acc += rho[(full[i * nt + t], full[j * nt + t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Transpose on the 1-based subsystems in `subset`.
pub fn partial_transpose(rho: &CMatrix, dims: &Dims, subset: &[usize]) -> Result<CMatrix> {
    check_square(rho, dims.total())?;
    let sel = dims.selection(subset)?;
    let n = dims.total();
    let all_digits: Vec<Vec<usize>> = (0..n).map(|x| digits(x, dims)).collect();
    let mut out = CMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let mut dx = all_digits[x].clone();
            let mut dy = all_digits[y].clone();
            for &k in &sel {
                std::mem::swap(&mut dx[k], &mut dy[k]);
            }
            out[(flat_index(&dx, dims), flat_index(&dy, dims))] = rho[(x, y)];
        }
    }
    Ok(out)
}

/// Reorders subsystems: subsystem `k` of the result is subsystem `order[k]`
/// (1-based) of the input. Returns the permuted matrix and dimensions.
pub fn permute_subsystems(rho: &CMatrix, dims: &Dims, order: &[usize]) -> Result<(CMatrix, Dims)> {
    check_square(rho, dims.total())?;
    let perm = permutation(dims, order)?;
    let new_dims: Vec<usize> = perm.iter().map(|&k| dims[k]).collect();
    let map = permuted_indices(dims, &perm, &new_dims);
    let n = dims.total();
    let mut out = CMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            out[(map[x], map[y])] = rho[(x, y)];
        }
    }
    Ok((out, Dims(new_dims)))
}

/// Same reordering as [`permute_subsystems`] applied to a state vector.
pub fn permute_vector(psi: &CVector, dims: &Dims, order: &[usize]) -> Result<(CVector, Dims)> {
    if psi.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: psi.len(),
        });
    }
    let perm = permutation(dims, order)?;
    let new_dims: Vec<usize> = perm.iter().map(|&k| dims[k]).collect();
    let map = permuted_indices(dims, &perm, &new_dims);
    let mut out = CVector::zeros(psi.len());
    for x in 0..psi.len() {
        out[map[x]] = psi[x];
    }
    Ok((out, Dims(new_dims)))
}

fn permutation(dims: &Dims, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != dims.len() {
        return Err(Error::InvalidPartition(format!(
            "permutation has {} entries for {} subsystems",
            order.len(),
            dims.len()
        )));
    }
    let mut seen = vec![false; dims.len()];
    let mut perm = Vec::with_capacity(order.len());
    for &k in order {
        check_index(k, dims.len())?;
        if seen[k - 1] {
            return Err(Error::DuplicateIndex(k));
        }
        seen[k - 1] = true;
        perm.push(k - 1);
    }
    Ok(perm)
}

fn permuted_indices(dims: &Dims, perm: &[usize], new_dims: &[usize]) -> Vec<usize> {
    (0..dims.total())
        .map(|x| {
            let dg = digits(x, dims);
            let nd: Vec<usize> = perm.iter().map(|&k| dg[k]).collect();
            flat_index(&nd, new_dims)
        })
        .collect()
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    require_hermitian(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Ascending real eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|(v, _)| v)
}

/// `true` iff the smallest eigenvalue is at least `-tol * max|a_ij|`.
pub fn is_psd(a: &CMatrix, tol: f64) -> Result<bool> {
    let vals = hermitian_eigenvalues(a)?;
    let floor = -tol * max_abs(a);
    Ok(vals.first().is_none_or(|&m| m >= floor))
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    sorted_desc(m.clone().svd(false, false).singular_values.iter().copied())
}

/// Singular values of a real matrix in nonincreasing order.
pub fn singular_values_real(m: &RMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    sorted_desc(m.clone().svd(false, false).singular_values.iter().copied())
}

fn sorted_desc(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = it.map(|s| s.max(0.0)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Matrix Ky Fan (nuclear) norm: sum of singular values.
pub fn kyfan_norm_matrix(m: &RMatrix) -> f64 {
    singular_values_real(m).iter().sum()
}

/// Hermitian, traceless, orthogonal generators of SU(d) with `Tr(λ_i λ_j) = 2 δ_ij`.
///
/// For `d = 2` the order is `(σx, σy, σz)`. For `d ≥ 3` the diagonal
/// generators `w_1..w_{d-1}` come first, then the symmetric `u_jk`, then the
/// antisymmetric `v_jk`, each off-diagonal block in lexicographic `(j, k)` order.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    d: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Number of generators, `d² - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator `i` (0-based).
    pub fn get(&self, i: usize) -> &CMatrix {
        &self.generators[i]
    }
}

/// Builds the SU(d) generator basis.
pub fn su_generators(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let i = Complex64::new(0.0, 1.0);
    let unit = |r: usize, c: usize| {
        let mut m = CMatrix::zeros(d, d);
        m[(r, c)] = ONE;
        m
    };
    let generators = if d == 2 {
        let mut sx = CMatrix::zeros(2, 2);
        sx[(0, 1)] = ONE;
        sx[(1, 0)] = ONE;
        let mut sy = CMatrix::zeros(2, 2);
        sy[(0, 1)] = -i;
        sy[(1, 0)] = i;
        let mut sz = CMatrix::zeros(2, 2);
        sz[(0, 0)] = ONE;
        sz[(1, 1)] = -ONE;
        vec![sx, sy, sz]
    } else {
        let mut g = Vec::with_capacity(d * d - 1);
        for l in 1..d {
            let mut w = CMatrix::zeros(d, d);
            for j in 0..l {
                w[(j, j)] = ONE;
            }
            w[(l, l)] = Complex64::new(-(l as f64), 0.0);
            g.push(w.scale((2.0 / (l * (l + 1)) as f64).sqrt()));
        }
        for j in 0..d {
            for k in j + 1..d {
                g.push(unit(j, k) + unit(k, j));
            }
        }
        for j in 0..d {
            for k in j + 1..d {
                g.push((unit(j, k) - unit(k, j)) * (-i));
            }
        }
        g
    };
    Ok(GeneratorBasis { d, generators })
}

/// Structure constants of an SU(d) basis, indexed by 0-based generator labels.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    n: usize,
    f: Vec<f64>,
    g: Vec<f64>,
}

impl StructureConstants {
    /// Number of generators.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Totally antisymmetric constant `f_ijk`.
    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f[(i * self.n + j) * self.n + k]
    }

    /// Totally symmetric constant `g_ijk`.
    pub fn g(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g[(i * self.n + j) * self.n + k]
    }
}

/// `f_ijk = -(i/4) Tr([λ_i, λ_j] λ_k)` and `g_ijk = (1/4) Tr({λ_i, λ_j} λ_k)`.
pub fn structure_constants(basis: &GeneratorBasis) -> StructureConstants {
    let n = basis.len();
    let mut f = vec![0.0; n * n * n];
    let mut g = vec![0.0; n * n * n];
    let quarter_i = Complex64::new(0.0, -0.25);
    for a in 0..n {
        for b in 0..n {
            let ab = basis.get(a) * basis.get(b);
            let ba = basis.get(b) * basis.get(a);
            let comm = &ab - &ba;
            let anti = &ab + &ba;
            for c in 0..n {
                let idx = (a * n + b) * n + c;
                f[idx] = (quarter_i * (&comm * basis.get(c)).trace()).re;
                g[idx] = 0.25 * (&anti * basis.get(c)).trace().re;
            }
        }
    }
    StructureConstants { n, f, g }
}

/// Largest entrywise residual of `λ_i λ_j = (2/d) δ_ij I + Σ_k (i f_ijk + g_ijk) λ_k`.
pub fn structure_residual(basis: &GeneratorBasis, sc: &StructureConstants) -> f64 {
    let n = basis.len();
    let d = basis.dim();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let mut rhs = if a == b {
                CMatrix::identity(d, d).scale(2.0 / d as f64)
            } else {
                CMatrix::zeros(d, d)
            };
            for c in 0..n {
                let coeff = Complex64::new(sc.g(a, b, c), sc.f(a, b, c));
                rhs += basis.get(c) * coeff;
            }
            let diff = basis.get(a) * basis.get(b) - rhs;
            worst = worst.max(max_abs(&diff));
        }
    }
    worst
}

/// Expands a real matrix into a complex one.
pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_of_diagonals() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2.0)]));
        let b = CMatrix::from_diagonal(&CVector::from_vec(vec![c(3.0), c(4.0)]));
        let k = kron(&a, &b);
        let expect = [3.0, 4.0, 6.0, 8.0];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(k[(i, i)], c(*e));
        }
        assert_eq!(k.iter().filter(|z| z.norm() > 0.0).count(), 4);
    }

    #[test]
    fn digits_roundtrip() {
        let dims = [2, 3, 4];
        for x in 0..24 {
            assert_eq!(flat_index(&digits(x, &dims), &dims), x);
        }
        assert_eq!(digits(23, &dims), vec![1, 2, 3]);
    }

    #[test]
    fn selection_rejects_bad_indices() {
        let dims = Dims::new(vec![2, 2]).unwrap();
        assert!(matches!(dims.selection(&[0]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(dims.selection(&[3]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(dims.selection(&[1, 1]), Err(Error::DuplicateIndex(1))));
        assert!(Dims::new(vec![2, 1]).is_err());
    }

    #[test]
    fn qubit_structure_constants_match_pauli_algebra() {
        let basis = su_generators(2).unwrap();
        let sc = structure_constants(&basis);
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            let p = [i, j, k];
            if p[0] == p[1] || p[1] == p[2] || p[0] == p[2] {
                0.0
            } else if (p[0] + 1) % 3 == p[1] {
                1.0
            } else {
                -1.0
            }
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    // σ_x σ_y = i σ_z, so f_xyz = 1 under the product rule.
                    assert!((sc.f(i, j, k) - eps(i, j, k)).abs() < 1e-14);
                    assert!(sc.g(i, j, k).abs() < 1e-14);
                }
            }
        }
    }
}
