//! Reading states and graphs from JSON files or built-in names.

use std::fs;

use entangle_core::experiments;
use entangle_core::graphstate::{GraphKind, PartitionSpec, WeightedGraph};
use entangle_core::measures;
use entangle_core::numcore::{CMatrix, CVector, Dims};
use entangle_core::state::{self, DensityMatrix, PureState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{parse_err, semantic_err, CliResult};

/// On-disk state: `amplitudes` for pure states, `matrix` rows for mixed ones.
#[derive(Debug, Deserialize, Serialize)]
pub struct StateFile {
    pub kind: String,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        StateFile {
            kind: "pure".into(),
            dims: psi.dims().to_vec(),
            amplitudes: Some(psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            matrix: None,
        }
    }

    pub fn from_mixed(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        StateFile {
            kind: "mixed".into(),
            dims: rho.dims().to_vec(),
            amplitudes: None,
            matrix: Some(
                (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect(),
            ),
        }
    }
}

/// Edge weights may be written as `[re, im]` or as a bare real number.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Weight {
    Complex([f64; 2]),
    Real(f64),
}

impl Weight {
    fn value(&self) -> Complex64 {
        match *self {
            Weight::Complex([re, im]) => Complex64::new(re, im),
            Weight::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
struct EdgeEntry {
    u: usize,
    v: usize,
    w: Weight,
}

#[derive(Debug, Deserialize)]
struct LoopEntry {
    v: usize,
    w: f64,
}

/// On-disk graph with 0-based vertex labels.
#[derive(Debug, Deserialize)]
struct GraphFile {
    kind: String,
    dims: Vec<usize>,
    #[serde(default)]
    edges: Vec<EdgeEntry>,
    #[serde(default)]
    loops: Vec<LoopEntry>,
}

/// What `--state` resolved to.
#[derive(Clone, Debug)]
pub enum Input {
    Pure(PureState),
    Mixed(DensityMatrix),
    Graph(WeightedGraph),
}

impl Input {
    pub fn load(spec: &str, tolerance: f64) -> CliResult<Input> {
        match spec.strip_prefix("builtin:") {
            Some(name) => builtin(name),
            None => {
                let text = fs::read_to_string(spec).map_err(|e| parse_err(format!("cannot read {spec}: {e}")))?;
                parse_document(&text, tolerance)
            }
        }
    }

    pub fn density(&self) -> CliResult<DensityMatrix> {
        Ok(match self {
            Input::Pure(psi) => psi.to_density(),
            Input::Mixed(rho) => rho.clone(),
            Input::Graph(g) => g.density()?,
        })
    }

    pub fn pure(&self) -> CliResult<PureState> {
        match self {
            Input::Pure(psi) => Ok(psi.clone()),
            Input::Mixed(_) => Err(semantic_err("this command needs a pure state, got a mixed state")),
            Input::Graph(_) => Err(semantic_err("this command needs a pure state, got a graph")),
        }
    }

    /// The input as a graph; states use the complex convention.
    pub fn graph(&self) -> CliResult<WeightedGraph> {
        match self {
            Input::Graph(g) => Ok(g.clone()),
            other => Ok(WeightedGraph::from_density(&other.density()?, GraphKind::Complex)?),
        }
    }
}

pub fn parse_document(text: &str, tolerance: f64) -> CliResult<Input> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("missing string field \"kind\""))?
        .to_string();
    match kind.as_str() {
        "pure" | "mixed" => {
            let file: StateFile =
                serde_json::from_value(value).map_err(|e| parse_err(format!("bad state file: {e}")))?;
            state_from_file(file, tolerance)
        }
        "real" | "complex" => {
            let file: GraphFile =
                serde_json::from_value(value).map_err(|e| parse_err(format!("bad graph file: {e}")))?;
            graph_from_file(file).map(Input::Graph)
        }
        other => Err(parse_err(format!(
            "unknown kind {other:?}; expected pure, mixed, real or complex"
        ))),
    }
}

fn state_from_file(file: StateFile, tolerance: f64) -> CliResult<Input> {
    let dims = Dims::new(file.dims)?;
    let total = dims.total();
    match file.kind.as_str() {
        "pure" => {
            let amps = file
                .amplitudes
                .ok_or_else(|| parse_err("pure state needs \"amplitudes\""))?;
            if amps.len() != total {
                return Err(parse_err(format!("expected {total} amplitudes, found {}", amps.len())));
            }
            let v = CVector::from_iterator(total, amps.iter().map(|&[re, im]| Complex64::new(re, im)));
            let norm = v.norm();
            if (norm - 1.0).abs() > tolerance {
                return Err(semantic_err(format!("amplitudes have norm {norm:.12}, expected 1")));
            }
            Ok(Input::Pure(PureState::normalized(v, dims)?))
        }
        _ => {
            let rows = file.matrix.ok_or_else(|| parse_err("mixed state needs \"matrix\""))?;
            if rows.len() != total || rows.iter().any(|r| r.len() != total) {
                return Err(parse_err(format!("matrix must be {total}x{total}")));
            }
            let m = CMatrix::from_fn(total, total, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
            let trace = m.trace();
            if (trace.re - 1.0).abs() > tolerance || trace.im.abs() > tolerance {
                return Err(semantic_err(format!("matrix has trace {:.12}, expected 1", trace.re)));
            }
            let m = m.unscale(trace.re);
            Ok(Input::Mixed(DensityMatrix::new(m, dims)?))
        }
    }
}

fn graph_from_file(file: GraphFile) -> CliResult<WeightedGraph> {
    let kind = if file.kind == "real" {
        GraphKind::Real
    } else {
        GraphKind::Complex
    };
    let mut g = WeightedGraph::new(kind, file.dims)?;
    for e in &file.edges {
        g.set_edge(e.u, e.v, e.w.value())?;
    }
    for l in &file.loops {
        g.set_loop(l.v, l.w)?;
    }
    Ok(g)
}

fn number(field: Option<&str>, default: usize, name: &str) -> CliResult<usize> {
    match field {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| parse_err(format!("builtin {name}: {s:?} is not a nonnegative integer"))),
    }
}

/// Named states: `ghz[:N[:d]]`, `w[:N]`, `bell`, `smolin`, `dur`, `heisenberg:N:s`, `bits:<01…>`.
pub fn builtin(spec: &str) -> CliResult<Input> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let arity = |max: usize| -> CliResult<()> {
        if args.len() > max {
            Err(parse_err(format!("builtin {name} takes at most {max} arguments")))
        } else {
            Ok(())
        }
    };
    let input = match name {
        "ghz" => {
            arity(2)?;
            let n = number(args.first().copied(), 3, name)?;
            let d = number(args.get(1).copied(), 2, name)?;
            Input::Pure(state::ghz(n, d)?)
        }
        "w" => {
            arity(1)?;
            Input::Pure(state::w(number(args.first().copied(), 3, name)?)?)
        }
        "bell" => {
            arity(0)?;
            Input::Pure(state::bell())
        }
        "smolin" => {
            arity(0)?;
            Input::Mixed(experiments::smolin_state())
        }
        "dur" => {
            arity(0)?;
            Input::Mixed(experiments::dur_state())
        }
        "heisenberg" => {
            if args.len() != 2 {
                return Err(parse_err("builtin heisenberg needs the form heisenberg:N:s"));
            }
            let n = number(Some(args[0]), 0, name)?;
            let s = number(Some(args[1]), 0, name)?;
            Input::Pure(measures::heisenberg_state(n, s)?)
        }
        "bits" => {
            if args.len() != 1 {
                return Err(parse_err("builtin bits needs the form bits:0101"));
            }
            Input::Pure(PureState::bits(args[0]).map_err(|e| parse_err(format!("builtin bits: {e}")))?)
        }
        other => return Err(parse_err(format!("unknown builtin state {other:?}"))),
    };
    Ok(input)
}

/// Parses `1,3` into the cut `{1,3} | rest` over `m` parts.
pub fn parse_cut(text: &str, m: usize) -> CliResult<PartitionSpec> {
    let s = parse_indices(text)?;
    PartitionSpec::new(&s, m).map_err(|e| semantic_err(e.to_string()))
}

/// Parses `1,2|3` into groups of 1-based subsystem indices.
pub fn parse_partition(text: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split('|').map(parse_indices).collect()
}

fn parse_indices(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(format!("{t:?} is not a subsystem index")))
        })
        .collect()
}
