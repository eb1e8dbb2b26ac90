//! Numerical experiments: noise thresholds of the Ky Fan test, bound-entangled
//! four-qubit states, Grover dynamics of `E_T`, and parameter sweeps emitted as CSV.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures;
use crate::numcore::{self, CMatrix, CVector, Dims};
use crate::separability::{self, Verdict};
use crate::state::{self, DensityMatrix, PureState};

/// Grid size of the monotonicity pre-scan that precedes bisection.
pub const PRESCAN_POINTS: usize = 21;
/// Bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-6;
pub const MAX_BISECTIONS: usize = 60;
/// Largest register [`grover_trace`] accepts.
pub const GROVER_MAX_QUBITS: usize = 16;

/// `(1 − p)/D · I + p |ψ><ψ|`.
pub fn noisy_state(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let dims = psi.dims().clone();
    let d = dims.total();
    let mut m = numcore::outer(psi.amplitudes(), psi.amplitudes()) * Complex64::new(p, 0.0);
    for i in 0..d {
        m[(i, i)] += Complex64::new((1.0 - p) / d as f64, 0.0);
    }
    DensityMatrix::new(m, dims)
}

/// `W_m` for any `m ≥ 1` (`W_1 = |1>`).
fn w_any(m: usize) -> Result<PureState> {
    if m == 1 {
        PureState::bits("1")
    } else {
        state::w(m)
    }
}

/// Noisy `W_N` with `n` qubits traced out, written as the mixture
/// `(1−p)/2^{N−n} I + (n/N) p |0…0><0…0| + ((N−n)/N) p |W_{N−n}><W_{N−n}|`.
pub fn reduced_w_noisy(total: usize, traced: usize, p: f64) -> Result<DensityMatrix> {
    if traced == 0 || traced >= total {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ n < N, got n = {traced}, N = {total}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let m = total - traced;
    let w = w_any(m)?;
    let dims = w.dims().clone();
    let d = dims.total();
    let frac_zero = traced as f64 / total as f64;
    let mut rho = numcore::outer(w.amplitudes(), w.amplitudes()) * Complex64::new(p * (1.0 - frac_zero), 0.0);
    rho[(0, 0)] += Complex64::new(p * frac_zero, 0.0);
    for i in 0..d {
        rho[(i, i)] += Complex64::new((1.0 - p) / d as f64, 0.0);
    }
    DensityMatrix::new(rho, dims)
}

/// `½(|0,0,1> + |0,1,2> + |1,0,3> + |1,2,3>)` in `C² ⊗ C³ ⊗ C⁴`.
pub fn mixed_dimension_state() -> Result<PureState> {
    let dims = Dims::new(vec![2, 3, 4])?;
    let mut v = CVector::zeros(dims.total());
    for digits in [[0, 0, 1], [0, 1, 2], [1, 0, 3], [1, 2, 3]] {
        v[numcore::flat_index(&digits, &dims)] = Complex64::new(0.5, 0.0);
    }
    PureState::new(v, dims)
}

/// The four Bell states, in the order Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
fn bell_basis() -> [CVector; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: [f64; 4]| CVector::from_iterator(4, a.iter().map(|&x| Complex64::new(x * h, 0.0)));
    [
        v([1.0, 0.0, 0.0, 1.0]),
        v([1.0, 0.0, 0.0, -1.0]),
        v([0.0, 1.0, 1.0, 0.0]),
        v([0.0, 1.0, -1.0, 0.0]),
    ]
}

/// Equal mixture of `|β_i><β_i|_{AB} ⊗ |β_i><β_i|_{CD}` over the four Bell states.
pub fn smolin_state() -> DensityMatrix {
    let mut m = CMatrix::zeros(16, 16);
    for b in bell_basis() {
        let p = numcore::outer(&b, &b);
        m += numcore::kron(&p, &p) * Complex64::new(0.25, 0.0);
    }
    DensityMatrix::new(m, Dims::qubits(4).expect("four qubits")).expect("valid mixture")
}

/// `(1/5)(|GHZ₄><GHZ₄| + ½ Σ_i (P_i + P̄_i))`, where `P_i` projects onto the
/// product state with qubit `i` in `|1>` and the rest in `|0>`, and `P̄_i` onto its complement.
pub fn dur_state() -> DensityMatrix {
    let ghz = state::ghz(4, 2).expect("GHZ_4");
    let mut m = numcore::outer(ghz.amplitudes(), ghz.amplitudes());
    for i in 0..4 {
        let one = 1usize << (3 - i);
        m[(one, one)] += Complex64::new(0.5, 0.0);
        let flip = 15 - one;
        m[(flip, flip)] += Complex64::new(0.5, 0.0);
    }
    m *= Complex64::new(0.2, 0.0);
    DensityMatrix::new(m, Dims::qubits(4).expect("four qubits")).expect("valid mixture")
}

/// Where a test's witness first exceeds its bound along `p ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing {
    At(f64),
    /// The witness never exceeds the bound on `[0, 1]`.
    Never,
    /// The witness exceeds the bound already at `p = 0`.
    Always,
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Crossing::At(p) => write!(f, "{p:.6}"),
            Crossing::Never => f.write_str("never"),
            Crossing::Always => f.write_str("always"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdScan {
    pub family: String,
    pub crossing: Crossing,
    pub iterations: usize,
    /// `(p, witness)` at the pre-scan grid points.
    pub curve: Vec<(f64, f64)>,
    pub bound: f64,
}

impl ThresholdScan {
    pub fn p_star(&self) -> Option<f64> {
        match self.crossing {
            Crossing::At(p) => Some(p),
            _ => None,
        }
    }
}

/// Finds the `p` at which `test(family(p))` starts reporting a witness above its bound.
///
/// A pre-scan on [`PRESCAN_POINTS`] grid points checks that the witness does not
/// decrease in `p`; a decreasing family is rejected rather than bisected.
pub fn threshold_bisect<F, T>(name: &str, family: F, test: T) -> Result<ThresholdScan>
where
    F: Fn(f64) -> Result<DensityMatrix>,
    T: Fn(&DensityMatrix) -> Result<Verdict>,
{
    let eval = |p: f64| -> Result<Verdict> { test(&family(p)?) };
    let mut curve = Vec::with_capacity(PRESCAN_POINTS);
    let mut bound = f64::NAN;
    for i in 0..PRESCAN_POINTS {
        let p = i as f64 / (PRESCAN_POINTS - 1) as f64;
        let v = eval(p)?;
        bound = v.bound;
        curve.push((p, v.witness));
    }
    if let Some(w) = curve.windows(2).find(|w| w[1].1 < w[0].1 - 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "family {name} is not monotone in p: witness drops from {} at p = {} to {} at p = {}",
            w[0].1, w[0].0, w[1].1, w[1].0
        )));
    }
    let above = |w: f64| w > bound;
    let scan = |crossing, iterations| ThresholdScan {
        family: name.to_string(),
        crossing,
        iterations,
        curve: curve.clone(),
        bound,
    };
    if above(curve[0].1) {
        return Ok(scan(Crossing::Always, 0));
    }
    let Some(idx) = curve.iter().position(|&(_, w)| above(w)) else {
        return Ok(scan(Crossing::Never, 0));
    };
    let (mut lo, mut hi) = (curve[idx - 1].0, curve[idx].0);
    let mut iterations = 0;
    while hi - lo > BISECTION_WIDTH && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if above(eval(mid)?.witness) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(scan(Crossing::At(0.5 * (lo + hi)), iterations))
}

/// Threshold of the Ky Fan test for the noisy family built on `psi`.
pub fn kyfan_threshold(name: &str, psi: &PureState) -> Result<ThresholdScan> {
    threshold_bisect(name, |p| noisy_state(psi, p), separability::kyfan_test)
}

/// One reproduced threshold next to its reference value.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdRow {
    pub family: String,
    pub n: usize,
    pub computed: Crossing,
    pub reference: f64,
}

impl ThresholdRow {
    pub fn deviation(&self) -> Option<f64> {
        match self.computed {
            Crossing::At(p) => Some((p - self.reference).abs()),
            _ => None,
        }
    }
}

/// Reference noise thresholds for GHZ_N and W_N, N = 3..6.
pub const GHZ_REFERENCE: [f64; 4] = [0.35355, 0.2, 0.17675, 0.1112];
pub const W_REFERENCE: [f64; 4] = [0.3068, 0.3018, 0.30225, 0.3045];
/// Reference thresholds for the qutrit GHZ state, N = 3, 4.
pub const QUTRIT_GHZ_REFERENCE: [f64; 2] = [0.2285, 0.2162];
/// Reference threshold for the `2 ⊗ 3 ⊗ 4` state of [`mixed_dimension_state`].
pub const MIXED_DIMENSION_REFERENCE: f64 = 0.24152;

/// Noise thresholds of GHZ_N and W_N for N = 3..6 (GHZ rows first).
pub fn qubit_threshold_table() -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::new();
    for (i, n) in (3..=6).enumerate() {
        let scan = kyfan_threshold("GHZ", &state::ghz(n, 2)?)?;
        rows.push(ThresholdRow {
            family: "GHZ".into(),
            n,
            computed: scan.crossing,
            reference: GHZ_REFERENCE[i],
        });
    }
    for (i, n) in (3..=6).enumerate() {
        let scan = kyfan_threshold("W", &state::w(n)?)?;
        rows.push(ThresholdRow {
            family: "W".into(),
            n,
            computed: scan.crossing,
            reference: W_REFERENCE[i],
        });
    }
    Ok(rows)
}

/// Noise thresholds of the qutrit GHZ state for N = 3, 4.
pub fn qutrit_threshold_table() -> Result<Vec<ThresholdRow>> {
    (3..=4)
        .zip(QUTRIT_GHZ_REFERENCE)
        .map(|(n, reference)| {
            let scan = kyfan_threshold("GHZ(d=3)", &state::ghz(n, 3)?)?;
            Ok(ThresholdRow {
                family: "GHZ(d=3)".into(),
                n,
                computed: scan.crossing,
                reference,
            })
        })
        .collect()
}

/// Noise threshold of the `2 ⊗ 3 ⊗ 4` state.
pub fn mixed_dimension_threshold() -> Result<ThresholdRow> {
    let scan = kyfan_threshold("2x3x4", &mixed_dimension_state()?)?;
    Ok(ThresholdRow {
        family: "2x3x4".into(),
        n: 3,
        computed: scan.crossing,
        reference: MIXED_DIMENSION_REFERENCE,
    })
}

/// One Grover iteration's record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverStep {
    pub iteration: usize,
    pub e_t: f64,
    pub target_probability: f64,
}

/// In-place Walsh–Hadamard transform `H^{⊗N}` on a `2^N` amplitude vector.
fn walsh_hadamard(v: &mut CVector) {
    let n = v.len();
    let scale = 1.0 / (n as f64).sqrt();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    *v *= Complex64::new(scale, 0.0);
}

/// Runs Grover search for `target` (a bitstring, qubit 1 leftmost) from `|+>^{⊗N}`,
/// recording `E_T` and the target probability for `k = 0 ..= ⌈(π/4)√2^N⌉ + 2`.
pub fn grover_trace(target: &str) -> Result<Vec<GroverStep>> {
    let n = target.len();
    if n == 0 || n > GROVER_MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "Grover register must have 1..={GROVER_MAX_QUBITS} qubits, got {n}"
        )));
    }
    let marked = usize::from_str_radix(target, 2)
        .map_err(|_| Error::InvalidArgument(format!("target {target:?} is not a bitstring")))?;
    let dims = Dims::qubits(n)?;
    let size = dims.total();
    let mut v = CVector::from_element(size, Complex64::new(1.0 / (size as f64).sqrt(), 0.0));
    let last = (PI / 4.0 * (size as f64).sqrt()).ceil() as usize + 2;
    let mut out = Vec::with_capacity(last + 1);
    for k in 0..=last {
        let psi = PureState::normalized(v.clone(), dims.clone())?;
        out.push(GroverStep {
            iteration: k,
            e_t: measures::e_t(&psi)?.e_t,
            target_probability: v[marked].norm_sqr(),
        });
        v[marked] = -v[marked];
        walsh_hadamard(&mut v);
        for a in v.iter_mut().skip(1) {
            *a = -*a;
        }
        walsh_hadamard(&mut v);
    }
    Ok(out)
}

/// `(x, value)` samples of a one-parameter sweep, ordered by `x`.
pub type Sweep = Vec<(f64, f64)>;

fn grid(samples: usize) -> impl Iterator<Item = f64> {
    let denom = samples.saturating_sub(1).max(1) as f64;
    (0..samples).map(move |i| i as f64 / denom)
}

/// `E_T` of `√s|W_N> + √(1−s) e^{iφ}|W̃_N>` on an even grid of `samples` values of `s`.
pub fn w_wtilde_sweep(n: usize, phi: f64, samples: usize) -> Result<Sweep> {
    grid(samples)
        .map(|s| Ok((s, measures::e_t(&measures::w_wtilde_superposition(n, s, phi)?)?.e_t)))
        .collect()
}

/// Closed-form `E_T` of the weight-`s` Heisenberg state for `s = 0..=N`.
pub fn heisenberg_sweep(n: usize) -> Result<Sweep> {
    (0..=n)
        .map(|s| Ok((s as f64, measures::heisenberg_et(n, s)?)))
        .collect()
}

/// Closed-form `E_T` of the GHZ_3/W_3 superposition on an even grid of `s`.
pub fn wghz_sweep(samples: usize) -> Result<Sweep> {
    grid(samples)
        .map(|s| Ok((s, measures::wghz_superposition_et(s)?)))
        .collect()
}

/// Closed-form `E_T` of `√p|0…0> + √(1−p)|1…1>` on an even grid of `p`.
pub fn ghz_family_sweep(n: usize, samples: usize) -> Result<Sweep> {
    grid(samples).map(|p| Ok((p, measures::ghz_family_et(p, n)?))).collect()
}

/// Writes a sweep as CSV with header `x,value` and LF line endings.
pub fn scan_emit<W: Write>(sweep: &[(f64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "x,value")?;
    for (x, y) in sweep {
        writeln!(out, "{x},{y}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walsh_hadamard_is_an_involution() {
        let mut v = CVector::from_fn(8, |i, _| Complex64::new(i as f64, 1.0));
        let orig = v.clone();
        walsh_hadamard(&mut v);
        walsh_hadamard(&mut v);
        assert!((v - orig).norm() < 1e-12);
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let mut buf = Vec::new();
        scan_emit(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,value\n");
    }
}
