//! Tensor-norm entanglement measures for pure N-qubit states.
//!
//! `E_T(ψ) = ‖T^(N)‖ − 1` vanishes exactly on product states; `ε_T = log₂‖T^(N)‖`
//! is additive under tensor products. Closed forms for the standard state
//! families are provided next to the direct computation so each can check the other.

use num_complex::Complex64;

use crate::bloch;
use crate::error::{Error, Result};
use crate::numcore::{self, CMatrix, CVector, Dims};
use crate::state::{self, PureState};

/// The measure and its companions for one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureResult {
    pub e_t: f64,
    pub eps_t: f64,
    pub tensor_norm: f64,
    /// `E_T / R_N`, when requested.
    pub normalized_by_ghz: Option<f64>,
}

fn require_qubits(psi: &PureState) -> Result<()> {
    if !psi.dims().is_all_qubits() {
        return Err(Error::NotQubits);
    }
    let norm = psi.amplitudes().norm();
    if (norm - 1.0).abs() > state::STATE_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// `‖T^(N)‖` of a pure qubit state.
pub fn tensor_norm(psi: &PureState) -> Result<f64> {
    require_qubits(psi)?;
    Ok(bloch::pure_correlation_tensor(psi)?.euclidean_norm())
}

/// `E_T`, `ε_T` and `‖T^(N)‖`.
pub fn e_t(psi: &PureState) -> Result<MeasureResult> {
    let norm = tensor_norm(psi)?;
    Ok(MeasureResult {
        e_t: norm - 1.0,
        eps_t: norm.log2(),
        tensor_norm: norm,
        normalized_by_ghz: None,
    })
}

/// Like [`e_t`], also reporting `E_T / R_N`.
pub fn e_t_normalized(psi: &PureState) -> Result<MeasureResult> {
    let mut r = e_t(psi)?;
    r.normalized_by_ghz = Some(r.e_t / r_n(psi.dims().len())?);
    Ok(r)
}

/// `ε_T = log₂ ‖T^(N)‖`.
pub fn eps_t(psi: &PureState) -> Result<f64> {
    Ok(tensor_norm(psi)?.log2())
}

/// `Σ p_i E_T(ψ_i)` over an explicit decomposition. This bounds the convex
/// roof of a mixed state from above; it is not the roof itself.
pub fn decomposition_bound(decomposition: &[(f64, PureState)]) -> Result<f64> {
    let total: f64 = decomposition.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "decomposition weights sum to {total}, expected 1"
        )));
    }
    let mut acc = 0.0;
    for (p, psi) in decomposition {
        if !(0.0..=1.0).contains(p) {
            return Err(Error::InvalidProbability(*p));
        }
        acc += p * e_t(psi)?.e_t;
    }
    Ok(acc)
}

/// `‖T^(N−1)‖` of the state left after tracing out qubit `k` (1-based).
pub fn traced_out_tensor_norm(psi: &PureState, k: usize) -> Result<f64> {
    require_qubits(psi)?;
    let n = psi.dims().len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "tracing out one qubit of {n} leaves no multipartite tensor"
        )));
    }
    numcore::check_index(k, n)?;
    let keep: Vec<usize> = (1..=n).filter(|&j| j != k).collect();
    let reduced = psi.to_density().reduce(&keep)?;
    let all: Vec<usize> = (1..n).collect();
    Ok(bloch::correlation_tensor(&reduced, &all)?.euclidean_norm())
}

/// Binomial coefficient as a float; zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// `√p |0…0> + √(1−p) |1…1>`.
pub fn ghz_family_state(p: f64, n: usize) -> Result<PureState> {
    check_probability(p)?;
    let dims = Dims::qubits(n)?;
    let mut v = CVector::zeros(dims.total());
    v[0] = Complex64::new(p.sqrt(), 0.0);
    v[dims.total() - 1] = Complex64::new((1.0 - p).sqrt(), 0.0);
    PureState::normalized(v, dims)
}

/// Closed-form `E_T` of [`ghz_family_state`].
pub fn ghz_family_et(p: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need N ≥ 2, got {n}")));
    }
    let c = 4.0 * p * (1.0 - p);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let zz = p + sign * (1.0 - p);
    let even: f64 = (1..=n / 2).map(|k| binomial(n as i64, 2 * k as i64)).sum();
    Ok((c + zz * zz + c * even).sqrt() - 1.0)
}

/// `R_N = E_T(GHZ_N)`.
pub fn r_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need N ≥ 2, got {n}")));
    }
    let parity = if n.is_multiple_of(2) { 2.0 } else { 0.0 };
    let even: f64 = (1..=n / 2).map(|k| binomial(n as i64, 2 * k as i64)).sum();
    Ok((1.0 + 0.25 * parity * parity + even).sqrt() - 1.0)
}

/// Closed-form `E_T(W_N) = √(1 + 4(N−1)/N) − 1`.
pub fn w_state_et(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("W formula needs N ≥ 3, got {n}")));
    }
    let n = n as f64;
    Ok((1.0 + 4.0 * (n - 1.0) / n).sqrt() - 1.0)
}

/// `W̃_N`: every qubit of `W_N` flipped.
pub fn w_tilde(n: usize) -> Result<PureState> {
    let w = state::w(n)?;
    let total = w.amplitudes().len();
    let v = CVector::from_fn(total, |i, _| w.amplitudes()[total - 1 - i]);
    PureState::new(v, w.dims().clone())
}

/// `√s |W> + √(1−s) e^{iφ} |W̃>`.
pub fn w_wtilde_superposition(n: usize, s: f64, phi: f64) -> Result<PureState> {
    check_probability(s)?;
    let w = state::w(n)?;
    let wt = w_tilde(n)?;
    let v =
        w.amplitudes() * Complex64::new(s.sqrt(), 0.0) + wt.amplitudes() * Complex64::from_polar((1.0 - s).sqrt(), phi);
    PureState::normalized(v, w.dims().clone())
}

/// `√s |GHZ_3> + √(1−s) e^{iφ} |W_3>`.
pub fn wghz_superposition_state(s: f64, phi: f64) -> Result<PureState> {
    check_probability(s)?;
    let g = state::ghz(3, 2)?;
    let w = state::w(3)?;
    let v =
        g.amplitudes() * Complex64::new(s.sqrt(), 0.0) + w.amplitudes() * Complex64::from_polar((1.0 - s).sqrt(), phi);
    PureState::new(v, g.dims().clone())
}

/// Closed-form `E_T` of [`wghz_superposition_state`]; independent of `φ`.
pub fn wghz_superposition_et(s: f64) -> Result<f64> {
    check_probability(s)?;
    let sq = 4.0 * s * s + 6.0 * s * (1.0 - s) + 11.0 / 3.0 * (s - 1.0).powi(2);
    Ok(sq.sqrt() - 1.0)
}

/// Uniform superposition of all `N`-bit strings of Hamming weight `s`.
pub fn heisenberg_state(n: usize, s: usize) -> Result<PureState> {
    if s > n {
        return Err(Error::InvalidArgument(format!("weight {s} exceeds N = {n}")));
    }
    let dims = Dims::qubits(n)?;
    let v = CVector::from_fn(dims.total(), |i, _| {
        if (i as u64).count_ones() as usize == s {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    PureState::normalized(v, dims)
}

/// Closed-form `E_T` of [`heisenberg_state`].
///
/// A Pauli string with `x` σ_x's, `y` σ_y's and σ_z elsewhere has a nonzero
/// expectation only when `m = x + y` is even. Its value is
/// `c(x, y) C(N−m, s−h) / C(N, s)` with `h = m/2`, where `c(x, y)` is the
/// coefficient of `t^h` in `(1+t)^x (1−t)^y`; the σ_z sign squares away. Each
/// such string occurs at `C(N,x) C(N−x,y)` positions.
pub fn heisenberg_et(n: usize, s: usize) -> Result<f64> {
    if s > n {
        return Err(Error::InvalidArgument(format!("weight {s} exceeds N = {n}")));
    }
    let (n, s) = (n as i64, s as i64);
    let mut sum = 0.0;
    for x in 0..=n {
        for y in 0..=n - x {
            let m = x + y;
            if m < 2 || m % 2 != 0 || m > 2 * s {
                continue;
            }
            let h = m / 2;
            let core = dicke_coefficient(x, y, h);
            let elem = core * binomial(n - m, s - h);
            sum += elem * elem * binomial(n, x) * binomial(n - x, y);
        }
    }
    let c = binomial(n, s);
    Ok((1.0 + sum / (c * c)).sqrt() - 1.0)
}

/// Coefficient of `t^h` in `(1+t)^x (1−t)^y`.
fn dicke_coefficient(x: i64, y: i64, h: i64) -> f64 {
    (0..=y.min(h))
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(y, j) * binomial(x, h - j)
        })
        .sum()
}

/// `E_T` of [`heisenberg_state`] computed from the state itself (any `N`).
pub fn heisenberg_et_direct(n: usize, s: usize) -> Result<f64> {
    Ok(e_t(&heisenberg_state(n, s)?)?.e_t)
}

/// `‖T‖²` of the normalized state `a₁|00> + a₂|01> + a₃|10> + a₄|11>`: `1 + 8|a₁a₄ − a₂a₃|²`.
pub fn two_qubit_norm_sq(a: [Complex64; 4]) -> f64 {
    1.0 + 8.0 * (a[0] * a[3] - a[1] * a[2]).norm_sqr()
}

/// The moduli form `1 + 8(|a₂a₃| − |a₁a₄|)²`.
///
/// Agrees with [`two_qubit_norm_sq`] only when `a₁a₄` and `a₂a₃` carry the same
/// phase, for instance when all amplitudes are nonnegative.
pub fn two_qubit_norm_sq_moduli(a: [Complex64; 4]) -> f64 {
    let d = (a[1] * a[2]).norm() - (a[0] * a[3]).norm();
    1.0 + 8.0 * d * d
}

/// Three-qubit Schmidt form `λ₀|000> + λ₁e^{iφ}|100> + λ₂|101> + λ₃|110> + λ₄|111>`.
pub fn schmidt_form_state(lambda: [f64; 5], phi: f64) -> Result<PureState> {
    if lambda.iter().any(|&l| l < 0.0) {
        return Err(Error::InvalidArgument(
            "Schmidt coefficients must be nonnegative".into(),
        ));
    }
    let mut v = CVector::zeros(8);
    v[0] = Complex64::new(lambda[0], 0.0);
    v[4] = Complex64::from_polar(lambda[1], phi);
    v[5] = Complex64::new(lambda[2], 0.0);
    v[6] = Complex64::new(lambda[3], 0.0);
    v[7] = Complex64::new(lambda[4], 0.0);
    PureState::normalized(v, Dims::qubits(3)?)
}

/// Lower bound on `‖T^(3)‖²` for the Schmidt form.
pub fn schmidt_form_lower_bound(lambda: [f64; 5]) -> f64 {
    let [l0, l1, l2, l3, l4] = lambda;
    1.0 + 12.0 * (l0 * l4).powi(2)
        + 8.0 * (l0 * l2).powi(2)
        + 8.0 * (l0 * l3).powi(2)
        + 8.0 * (l1 * l4 - l2 * l3).powi(2)
}

/// Two-outcome single-qubit measurement `A₁ = U diag(α, β) V`,
/// `A₂ = U diag(√(1−α²), √(1−β²)) V`, so that `A₁†A₁ + A₂†A₂ = I`.
pub fn two_outcome_measurement(alpha: f64, beta: f64, u: &CMatrix, v: &CMatrix) -> Result<[CMatrix; 2]> {
    for x in [alpha, beta] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidArgument(format!("diagonal entry {x} outside [0, 1]")));
        }
    }
    let diag = |a: f64, b: f64| {
        CMatrix::from_diagonal(&CVector::from_vec(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]))
    };
    let a1 = u * diag(alpha, beta) * v;
    let a2 = u * diag((1.0 - alpha * alpha).sqrt(), (1.0 - beta * beta).sqrt()) * v;
    Ok([a1, a2])
}

/// Outcome probabilities and post-measurement states of a local measurement on qubit `k`.
pub fn measure_locally(psi: &PureState, k: usize, ops: &[CMatrix]) -> Result<Vec<(f64, Option<PureState>)>> {
    ops.iter()
        .map(|op| {
            let v = psi.apply_local_unnormalized(k, op)?;
            let p = v.norm_squared();
            let post = if p > 1e-14 {
                Some(PureState::normalized(v, psi.dims().clone())?)
            } else {
                None
            };
            Ok((p, post))
        })
        .collect()
}

/// `Σ p_i E_T(φ_i)` after a local measurement; outcomes of zero probability are skipped.
pub fn expected_et_after_measurement(psi: &PureState, k: usize, ops: &[CMatrix]) -> Result<f64> {
    let mut acc = 0.0;
    for (p, post) in measure_locally(psi, k, ops)? {
        if let Some(phi) = post {
            acc += p * e_t(&phi)?.e_t;
        }
    }
    Ok(acc)
}
