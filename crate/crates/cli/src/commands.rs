//! One function per subcommand, each producing an [`Output`].

use clap::ValueEnum;
use entangle_core::experiments::{self, ThresholdRow};
use entangle_core::factor;
use entangle_core::graphstate::{GraphKind, PartitionSpec, PsdVerdict, WeightedGraph};
use entangle_core::measures;
use entangle_core::numcore;
use entangle_core::separability::{self, Status, Verdict};
use serde_json::{json, Value};

use crate::error::{parse_err, semantic_err, CliResult};
use crate::input::{self, Input, StateFile};
use crate::output::Output;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    /// Ky Fan norm of the correlation tensor against the product-state bound.
    Kyfan,
    /// Degree matrices of the state graph and its partial transpose.
    Degree,
    /// Positivity of the partial transpose.
    Ppt,
    /// Sufficient condition for full separability (three or more parties).
    Sufficient,
    /// Exact test for qubit states whose only Bloch component is the full tensor.
    Iff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphAction {
    ToDensity,
    CheckPsd,
    Purity,
    Entropy,
    Pt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Noise thresholds of noisy GHZ and W states, N = 3..6.
    QubitThresholds,
    /// Noise thresholds of noisy qutrit GHZ states, N = 3, 4.
    QutritThresholds,
    /// Noise threshold of the 2x3x4 state.
    MixedDimensionThreshold,
    /// Ky Fan witness and partial-transpose spectra of the Smolin state.
    Smolin,
    /// Ky Fan witness of the Dür state.
    Dur,
    /// E_T and success probability along Grover iterations.
    Grover,
    /// E_T of weight-s Heisenberg (Dicke) states for every s.
    Heisenberg,
    /// E_T of the GHZ_3/W_3 superposition.
    Wghz,
    /// E_T of the GHZ family sqrt(p)|0...0> + sqrt(1-p)|1...1>.
    Ghzscan,
}

/// Options of `separability`.
pub struct SeparabilityArgs<'a> {
    pub criterion: Criterion,
    pub cut: Option<&'a str>,
    pub partition: Option<&'a str>,
    pub subsystems: Option<&'a str>,
}

fn verdict_output(criterion: &str, v: &Verdict) -> Output {
    Output::record()
        .field("criterion", criterion)
        .field("status", v.status.to_string())
        .field("witness", v.witness)
        .field("bound", v.bound)
        .field("partition", v.partition.as_ref().map_or(Value::Null, |p| json!(p)))
        .build()
}

fn cut_groups(cut: &PartitionSpec) -> Value {
    json!([cut.s(), cut.t()])
}

pub fn separability(input: &Input, args: SeparabilityArgs) -> CliResult<Output> {
    match args.criterion {
        Criterion::Kyfan => {
            let rho = input.density()?;
            let v = match (args.partition, args.subsystems) {
                (Some(_), Some(_)) => return Err(parse_err("use either --partition or --subsystems, not both")),
                (Some(p), None) => separability::kyfan_test_partition(&rho, &input::parse_partition(p)?)?,
                (None, Some(s)) => {
                    let subset = input::parse_partition(s)?.concat();
                    separability::kyfan_test_subsystem(&rho, &subset)?
                }
                (None, None) => separability::kyfan_test(&rho)?,
            };
            Ok(verdict_output("kyfan", &v))
        }
        Criterion::Sufficient => Ok(verdict_output(
            "sufficient",
            &separability::sufficiency_test(&input.density()?)?,
        )),
        Criterion::Iff => Ok(verdict_output(
            "iff",
            &separability::nqubit_iff_test(&input.density()?)?,
        )),
        Criterion::Ppt => {
            let rho = input.density()?;
            let m = rho.dims().len();
            let cuts = match args.cut {
                Some(c) => vec![input::parse_cut(c, m)?],
                None => PartitionSpec::all_cuts(m),
            };
            if cuts.is_empty() {
                return Err(semantic_err("the PPT test needs at least two subsystems"));
            }
            // Report the cut with the most negative partial-transpose eigenvalue.
            let mut worst: Option<Verdict> = None;
            for cut in &cuts {
                let v = separability::ppt_test(&rho, cut)?;
                if worst.as_ref().is_none_or(|w| v.witness > w.witness) {
                    worst = Some(v);
                }
            }
            Ok(verdict_output("ppt", &worst.expect("at least one cut")))
        }
        Criterion::Degree => {
            let text = args.cut.ok_or_else(|| parse_err("the degree criterion needs --cut"))?;
            let g = input.graph()?;
            let cut = input::parse_cut(text, g.dims().len())?;
            degree_report(input, &g, &cut)
        }
    }
}

fn degree_report(input: &Input, g: &WeightedGraph, cut: &PartitionSpec) -> CliResult<Output> {
    let holds = g.degree_criterion(cut)?;
    let before = g.degrees();
    let after = g.partial_transpose(cut)?.degrees();
    let gap = before
        .iter()
        .zip(&after)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let pure = match input {
        Input::Pure(_) => true,
        Input::Graph(g) => g.is_pure().unwrap_or(false),
        Input::Mixed(_) => false,
    };
    let loopless_real = g.kind() == GraphKind::Real && g.loops().next().is_none();
    let status = match (holds, pure, loopless_real) {
        (true, true, _) => Status::Separable,
        (false, true, _) | (false, _, true) => Status::Entangled,
        _ => Status::Inconclusive,
    };
    Ok(Output::record()
        .field("criterion", "degree")
        .field("status", status.to_string())
        .field("holds", holds)
        .field("witness", gap)
        .field("bound", 0.0)
        .field("partition", cut_groups(cut))
        .build())
}

pub fn measure(input: &Input, normalize: bool) -> CliResult<Output> {
    let psi = input.pure()?;
    let r = if normalize {
        measures::e_t_normalized(&psi)?
    } else {
        measures::e_t(&psi)?
    };
    Ok(Output::record()
        .field("e_t", r.e_t)
        .field("eps_t", r.eps_t)
        .field("tensor_norm", r.tensor_norm)
        .field_opt("e_t_over_r_n", r.normalized_by_ghz)
        .build())
}

pub fn factorize(input: &Input) -> CliResult<Output> {
    let psi = input.pure()?;
    let tree = factor::full_factorize(&psi)?;
    let groups = tree.groups();
    let text: String = groups
        .iter()
        .map(|g| format!("({})", g.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    let leaves: Vec<Value> = tree
        .leaves()
        .iter()
        .map(|l| {
            let file = StateFile::from_pure(&l.state);
            json!({"subsystems": l.subsystems, "dims": file.dims, "amplitudes": file.amplitudes})
        })
        .collect();
    Ok(Output::record()
        .field("factors", text)
        .field("groups", json!(groups))
        .field("leaves", Value::Array(leaves))
        .build())
}

fn graph_output(g: &WeightedGraph) -> Output {
    let edges: Vec<Value> = g
        .edges()
        .map(|((u, v), w)| json!({"u": u, "v": v, "w": [w.re, w.im]}))
        .collect();
    let loops: Vec<Value> = g.loops().map(|(v, w)| json!({"v": v, "w": w})).collect();
    Output::record()
        .field("kind", g.kind().to_string())
        .field("dims", json!(g.dims()))
        .field("edges", Value::Array(edges))
        .field("loops", Value::Array(loops))
        .build()
}

pub fn graph(input: &Input, action: GraphAction, cut: Option<&str>) -> CliResult<Output> {
    let g = input.graph()?;
    match action {
        GraphAction::ToDensity => {
            let file = StateFile::from_mixed(&g.density()?);
            Ok(Output::record()
                .field("kind", file.kind)
                .field("dims", json!(file.dims))
                .field("matrix", json!(file.matrix))
                .build())
        }
        GraphAction::CheckPsd => {
            let screen = match g.psd_screen() {
                PsdVerdict::Psd => "PSD",
                PsdVerdict::NotPsd => "NotPSD",
                PsdVerdict::Unknown => "Unknown",
            };
            let min = numcore::hermitian_eigenvalues(&g.laplacian())?
                .first()
                .copied()
                .unwrap_or(0.0);
            let scale = numcore::max_abs(&g.laplacian()).max(1.0);
            Ok(Output::record()
                .field("screen", screen)
                .field("min_eigenvalue", min)
                .field("psd", min >= -numcore::PSD_TOL * scale)
                .build())
        }
        GraphAction::Purity => Ok(Output::record().field("pure", g.is_pure()?).build()),
        GraphAction::Entropy => Ok(Output::record().field("entropy", g.von_neumann_entropy()?).build()),
        GraphAction::Pt => {
            let text = cut.ok_or_else(|| parse_err("the pt action needs --cut"))?;
            let cut = input::parse_cut(text, g.dims().len())?;
            Ok(graph_output(&g.partial_transpose(&cut)?))
        }
    }
}

/// Options of `reproduce`.
pub struct ReproduceArgs<'a> {
    pub n: Option<usize>,
    pub samples: usize,
    pub target: Option<&'a str>,
}

fn threshold_table(rows: &[ThresholdRow]) -> Output {
    let mut t = Output::table(&["family", "n", "threshold", "reference", "deviation"]);
    for r in rows {
        let threshold = match r.computed {
            experiments::Crossing::At(p) => json!(p),
            other => json!(other.to_string()),
        };
        t.push_row(vec![
            json!(r.family),
            json!(r.n),
            threshold,
            json!(r.reference),
            json!(r.deviation()),
        ]);
    }
    t
}

fn verdict_row(t: &mut Output, check: &str, cut: Value, v: &Verdict) {
    t.push_row(vec![
        json!(check),
        cut,
        json!(v.witness),
        json!(v.bound),
        json!(v.status.to_string()),
    ]);
}

pub fn reproduce(which: Experiment, args: ReproduceArgs) -> CliResult<Output> {
    let columns = ["check", "cut", "witness", "bound", "status"];
    Ok(match which {
        Experiment::QubitThresholds => threshold_table(&experiments::qubit_threshold_table()?),
        Experiment::QutritThresholds => threshold_table(&experiments::qutrit_threshold_table()?),
        Experiment::MixedDimensionThreshold => threshold_table(&[experiments::mixed_dimension_threshold()?]),
        Experiment::Smolin => {
            let rho = experiments::smolin_state();
            let mut t = Output::table(&columns);
            verdict_row(&mut t, "kyfan", Value::Null, &separability::kyfan_test(&rho)?);
            for s in [[1, 2], [1, 3], [1, 4]] {
                let cut = PartitionSpec::new(&s, 4)?;
                verdict_row(
                    &mut t,
                    "ppt",
                    json!(cut.to_string()),
                    &separability::ppt_test(&rho, &cut)?,
                );
            }
            verdict_row(&mut t, "iff", Value::Null, &separability::nqubit_iff_test(&rho)?);
            t
        }
        Experiment::Dur => {
            let mut t = Output::table(&columns);
            verdict_row(
                &mut t,
                "kyfan",
                Value::Null,
                &separability::kyfan_test(&experiments::dur_state())?,
            );
            t
        }
        Experiment::Grover => {
            let n = args.n.unwrap_or(6);
            let target = match args.target {
                Some(t) if t.len() != n => {
                    return Err(parse_err(format!("target {t:?} does not have {n} bits")));
                }
                Some(t) => t.to_string(),
                None => "0".repeat(n),
            };
            let mut t = Output::table(&["k", "e_t", "target_probability"]);
            for s in experiments::grover_trace(&target)? {
                t.push_row(vec![json!(s.iteration), json!(s.e_t), json!(s.target_probability)]);
            }
            t
        }
        Experiment::Heisenberg => sweep_table("s", experiments::heisenberg_sweep(args.n.unwrap_or(8))?),
        Experiment::Wghz => sweep_table("s", experiments::wghz_sweep(args.samples)?),
        Experiment::Ghzscan => sweep_table("p", experiments::ghz_family_sweep(args.n.unwrap_or(3), args.samples)?),
    })
}

fn sweep_table(x: &str, sweep: experiments::Sweep) -> Output {
    let mut t = Output::table(&[x, "e_t"]);
    for (a, b) in sweep {
        t.push_row(vec![json!(a), json!(b)]);
    }
    t
}
