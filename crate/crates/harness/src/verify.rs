//! Formula, oracle and comparison for a single expression.

use std::collections::BTreeMap;
use std::time::Instant;

use bei_algebra::oracle::{oracle_dim_in, oracle_resolution, verify_decomposition, verify_exactseq, DimReport, OracleCaps};
use bei_algebra::{with_field, AlgebraError, BettiTable, MonomialOrder};
use bei_core::cutsets::{cut_point_sets, dim_over_family};
use bei_core::{predict, Graph, GraphExpr, Label, VertexSet};
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, CacheKey};
use crate::dsl::emit;
use crate::error::{HarnessError, Result};
use crate::report::{CmCheck, InvariantCheck, OracleValue, Prediction, VerdictReport, KERNEL_VERSION, SCHEMA};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub m: u32,
    pub characteristic: u32,
    pub order: MonomialOrder,
    pub caps: OracleCaps,
    pub formula_only: bool,
}

impl Settings {
    pub fn new(m: u32) -> Self {
        Settings {
            m,
            characteristic: bei_algebra::ring::DEFAULT_CHARACTERISTIC,
            order: MonomialOrder::Degrevlex,
            caps: OracleCaps::default(),
            formula_only: false,
        }
    }

    pub fn with_characteristic(mut self, p: u32) -> Self {
        self.characteristic = p;
        self
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = m;
        self
    }
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn run<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(phase.into()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }
}

fn cap_reason(e: &HarnessError) -> Option<String> {
    match e {
        HarnessError::Algebra(AlgebraError::ResourceCap { what, limit }) => Some(format!("cap: {what} limit {limit}")),
        HarnessError::Algebra(AlgebraError::TooManyVariables { got, max }) => {
            Some(format!("cap: {got} variables, kernel maximum {max}"))
        }
        _ => None,
    }
}

fn key(g: &Graph, s: &Settings, order: MonomialOrder, kind: &str) -> CacheKey {
    CacheKey {
        graph: g.canonical(),
        m: s.m,
        characteristic: s.characteristic,
        order: order.to_string(),
        kind: kind.into(),
    }
}

fn cached<T: Serialize + serde::de::DeserializeOwned>(
    cache: Option<&Cache>,
    key: CacheKey,
    compute: impl Fn() -> Result<T>,
) -> Result<T> {
    match cache {
        Some(c) => c.get_or_compute(&key, compute),
        None => compute(),
    }
}

/// The inner `Err` carries the reason the oracle was not run.
fn oracle_dim(g: &Graph, s: &Settings, cache: Option<&Cache>) -> Result<std::result::Result<DimReport, String>> {
    let vars = s.m as usize * g.num_vertices();
    if vars > s.caps.gb_vars {
        return Ok(Err(format!("cap: m*|V| = {vars} exceeds the Groebner cap {}", s.caps.gb_vars)));
    }
    let run = || -> Result<DimReport> {
        Ok(with_field!(s.characteristic, F => oracle_dim_in::<F>(g, s.m, s.order, &s.caps))?)
    };
    match cached(cache, key(g, s, s.order, "dim"), run) {
        Ok(d) => Ok(Ok(d)),
        Err(e) => cap_reason(&e).map(Err).ok_or(e),
    }
}

fn oracle_betti(g: &Graph, s: &Settings, cache: Option<&Cache>) -> Result<std::result::Result<BettiTable, String>> {
    let vars = s.m as usize * g.num_vertices();
    if vars > s.caps.res.max_vars {
        return Ok(Err(format!("cap: m*|V| = {vars} exceeds the resolution cap {}", s.caps.res.max_vars)));
    }
    let run = || -> Result<BettiTable> {
        Ok(with_field!(s.characteristic, F => oracle_resolution::<F>(g, s.m, &s.caps)).map(|r| r.betti)?)
    };
    match cached(cache, key(g, s, MonomialOrder::Degrevlex, "betti"), run) {
        Ok(b) => Ok(Ok(b)),
        Err(e) => cap_reason(&e).map(Err).ok_or(e),
    }
}

fn skeleton(expr: &GraphExpr, g: &Graph, s: &Settings) -> VerdictReport {
    VerdictReport {
        schema: SCHEMA,
        kernel_version: KERNEL_VERSION.into(),
        expr: emit(expr),
        canonical: g.canonical(),
        num_vertices: g.num_vertices(),
        m: s.m,
        characteristic: s.characteristic,
        order: s.order.to_string(),
        caps: s.caps,
        checks: Vec::new(),
        cm: None,
        combinatorial_dim: None,
        betti: None,
        betti_grid: None,
        prediction_error: None,
        timings: BTreeMap::new(),
    }
}

struct Predicted {
    dim: Option<Prediction>,
    depth: Option<Prediction>,
    reg: Option<Prediction>,
    cm: Option<bool>,
    combinatorial_dim: Option<u32>,
    error: Option<String>,
}

fn run_predict(expr: &GraphExpr, m: u32) -> Result<Predicted> {
    match predict(expr, m) {
        Ok(r) => Ok(Predicted {
            dim: Some((&r.dim).into()),
            depth: Some((&r.depth).into()),
            reg: Some((&r.reg).into()),
            cm: r.cm,
            combinatorial_dim: r.combinatorial_dim.map(|d| d.dim),
            error: None,
        }),
        Err(e @ bei_core::Error::Contradiction { .. }) => Ok(Predicted {
            dim: None,
            depth: None,
            reg: None,
            cm: None,
            combinatorial_dim: None,
            error: Some(e.to_string()),
        }),
        Err(e) => Err(e.into()),
    }
}

struct Oracle {
    dim: OracleValue,
    depth: OracleValue,
    reg: OracleValue,
    betti: Option<BettiTable>,
}

fn run_oracle(g: &Graph, s: &Settings, cache: Option<&Cache>, timer: &mut Timer) -> Result<Oracle> {
    if s.formula_only {
        let skip = || OracleValue::Unavailable("formula-only".into());
        return Ok(Oracle { dim: skip(), depth: skip(), reg: skip(), betti: None });
    }
    let dim = match timer.run("oracle_dim", || oracle_dim(g, s, cache))? {
        Ok(d) => OracleValue::Value(d.dim),
        Err(why) => OracleValue::Unavailable(why),
    };
    let (depth, reg, betti) = match timer.run("oracle_resolution", || oracle_betti(g, s, cache))? {
        Ok(b) => {
            let depth = b.depth().map_or(OracleValue::Unavailable("unit ideal".into()), |d| OracleValue::Value(d as u32));
            let reg = b.reg().map_or(OracleValue::Unavailable("unit ideal".into()), OracleValue::Value);
            (depth, reg, Some(b))
        }
        Err(why) => (OracleValue::Unavailable(why.clone()), OracleValue::Unavailable(why), None),
    };
    Ok(Oracle { dim, depth, reg, betti })
}

fn realize(expr: &GraphExpr, timer: &mut Timer) -> Result<Graph> {
    Ok(timer.run("realize", || expr.realize())?.graph().clone())
}

pub fn cmd_predict(expr: &GraphExpr, s: &Settings) -> Result<VerdictReport> {
    let mut timer = Timer(BTreeMap::new());
    let g = realize(expr, &mut timer)?;
    let p = timer.run("predict", || run_predict(expr, s.m))?;
    let mut r = skeleton(expr, &g, s);
    r.checks = vec![
        InvariantCheck::new("dim", p.dim, None),
        InvariantCheck::new("depth", p.depth, None),
        InvariantCheck::new("reg", p.reg, None),
    ];
    r.cm = Some(CmCheck { predicted: p.cm, oracle: None, verdict: None });
    r.combinatorial_dim = p.combinatorial_dim;
    r.prediction_error = p.error;
    r.timings = timer.0;
    Ok(r)
}

pub fn cmd_oracle(expr: &GraphExpr, s: &Settings, cache: Option<&Cache>) -> Result<VerdictReport> {
    let mut timer = Timer(BTreeMap::new());
    let g = realize(expr, &mut timer)?;
    let o = run_oracle(&g, &Settings { formula_only: false, ..s.clone() }, cache, &mut timer)?;
    let mut r = skeleton(expr, &g, s);
    let cm = match (o.dim.value(), o.depth.value()) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    r.checks = vec![
        InvariantCheck::new("dim", None, Some(o.dim)),
        InvariantCheck::new("depth", None, Some(o.depth)),
        InvariantCheck::new("reg", None, Some(o.reg)),
    ];
    r.cm = Some(CmCheck { predicted: None, oracle: cm, verdict: None });
    r.betti_grid = o.betti.as_ref().map(|b| b.grid());
    r.betti = o.betti;
    r.timings = timer.0;
    Ok(r)
}

/// Prediction, oracle, and one verdict per invariant.
pub fn cmd_verify(expr: &GraphExpr, s: &Settings, cache: Option<&Cache>) -> Result<VerdictReport> {
    let mut timer = Timer(BTreeMap::new());
    let g = realize(expr, &mut timer)?;
    let p = timer.run("predict", || run_predict(expr, s.m))?;
    let o = run_oracle(&g, s, cache, &mut timer)?;
    let mut r = skeleton(expr, &g, s);
    let oracle_cm = match (o.dim.value(), o.depth.value()) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    r.checks = vec![
        InvariantCheck::new("dim", p.dim, Some(o.dim)),
        InvariantCheck::new("depth", p.depth, Some(o.depth)),
        InvariantCheck::new("reg", p.reg, Some(o.reg)),
    ];
    r.cm = Some(CmCheck::new(p.cm, oracle_cm));
    r.combinatorial_dim = p.combinatorial_dim;
    r.betti_grid = o.betti.as_ref().map(|b| b.grid());
    r.betti = o.betti;
    r.prediction_error = p.error;
    r.timings = timer.0;
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub set: VertexSet,
    pub components: Vec<VertexSet>,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactSeqCheck {
    pub vertex: Label,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub schema: u32,
    pub kernel_version: String,
    pub expr: String,
    pub canonical: String,
    pub m: u32,
    pub characteristic: u32,
    pub primes: Vec<PrimeEntry>,
    pub dim: usize,
    pub witness: VertexSet,
    pub unmixed: bool,
    /// `J = ∩ P_T`, when requested.
    pub identity: Option<bool>,
    /// The exact-sequence intersection identity at each internal vertex, when requested.
    pub exactseq: Vec<ExactSeqCheck>,
    pub timings: BTreeMap<String, f64>,
}

impl DecomposeReport {
    pub fn holds(&self) -> bool {
        self.identity != Some(false) && self.exactseq.iter().all(|c| c.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("expr:  {}\ngraph: {}\nm = {}\n", self.expr, self.canonical, self.m);
        for p in &self.primes {
            out += &format!("P_T  T = {:?}  components {:?}  dim {}\n", p.set, p.components, p.dim);
        }
        out += &format!("dim {} (witness T = {:?}), unmixed {}\n", self.dim, self.witness, self.unmixed);
        if let Some(i) = self.identity {
            out += &format!("intersection identity: {}\n", if i { "verified" } else { "FAILED" });
        }
        for c in &self.exactseq {
            out += &format!("exact sequence at {}: {}\n", c.vertex, if c.holds { "verified" } else { "FAILED" });
        }
        out
    }
}

pub fn cmd_decompose(expr: &GraphExpr, s: &Settings, identity: bool) -> Result<DecomposeReport> {
    let mut timer = Timer(BTreeMap::new());
    let g = realize(expr, &mut timer)?;
    let family = timer.run("cut_sets", || cut_point_sets(&g))?;
    let nv = g.num_vertices();
    let primes = family
        .sets
        .iter()
        .map(|c| PrimeEntry { set: c.set.clone(), components: c.components.clone(), dim: c.prime_dim(nv, s.m) })
        .collect::<Vec<_>>();
    let (dim, witness) = dim_over_family(&family, s.m);
    let unmixed = primes.iter().all(|p| p.dim == primes[0].dim);
    let mut report = DecomposeReport {
        schema: SCHEMA,
        kernel_version: KERNEL_VERSION.into(),
        expr: emit(expr),
        canonical: g.canonical(),
        m: s.m,
        characteristic: s.characteristic,
        primes,
        dim,
        witness,
        unmixed,
        identity: None,
        exactseq: Vec::new(),
        timings: BTreeMap::new(),
    };
    if identity {
        let holds = timer.run("decomposition_identity", || {
            with_field!(s.characteristic, F => verify_decomposition::<F>(&g, s.m, &s.caps))
        })?;
        report.identity = Some(holds);
        for v in g.vertices().collect::<Vec<_>>() {
            if g.is_internal(v)? {
                let holds = timer.run("exactseq_identity", || {
                    with_field!(s.characteristic, F => verify_exactseq::<F>(&g, v, s.m, &s.caps))
                })?;
                report.exactseq.push(ExactSeqCheck { vertex: v, holds });
            }
        }
    }
    report.timings = timer.0;
    Ok(report)
}
