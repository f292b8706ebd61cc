//! Bounded families of expressions and the batch driver.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use bei_core::{Atom, FanSpec, GraphExpr, Label, MarkRef, Op};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, CacheStats};
use crate::dsl::{emit, parse_expr};
use crate::error::{HarnessError, Result};
use crate::report::{Verdict, VerdictReport, KERNEL_VERSION, SCHEMA};
use crate::verify::{cmd_verify, Settings};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Fans with `n <= max_n`, `|W| <= max_w`, `h_{i,j} <= max_h`.
    Fans { max_n: u32, max_w: usize, max_h: u32, pure_only: bool },
    Fp { max_p: u32 },
    Paths { max_t: u32 },
    Complete { max_n: u32 },
    /// `F_{p_1} ∘ ... ∘ F_{p_t} ∘ F_{p_{t+1}}` with `3 <= p_i <= max_p` and `2 <= p_{t+1} <= max_p`.
    Chains { max_t: usize, max_p: u32 },
    /// The fixed list of depth-2 compositions returned by [`composites`].
    Composites,
    Random { count: usize, seed: u64, max_atoms: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Fans { max_n, max_w, max_h, pure_only } => {
                write!(f, "fans:n={max_n},w={max_w},h={max_h}")?;
                if *pure_only {
                    write!(f, ",pure")?;
                }
                Ok(())
            }
            Family::Fp { max_p } => write!(f, "fp:p={max_p}"),
            Family::Paths { max_t } => write!(f, "paths:t={max_t}"),
            Family::Complete { max_n } => write!(f, "complete:n={max_n}"),
            Family::Chains { max_t, max_p } => write!(f, "chains:t={max_t},p={max_p}"),
            Family::Composites => write!(f, "composites"),
            Family::Random { count, seed, max_atoms } => write!(f, "random:count={count},seed={seed},atoms={max_atoms}"),
        }
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    /// `name[:key=value,...]`, for example `fans:n=4,w=2,h=2,pure` or `fp:p=3`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = BTreeMap::new();
        let mut flags = Vec::new();
        for item in args.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => {
                    let v: u64 = v.trim().parse().map_err(|_| usage(format!("`{item}`: value is not an integer")))?;
                    kv.insert(k.trim().to_string(), v);
                }
                None => flags.push(item.to_string()),
            }
        }
        let allowed: &[&str] = match name {
            "fans" => &["n", "w", "h"],
            "fp" => &["p"],
            "paths" => &["t"],
            "complete" => &["n"],
            "chains" => &["t", "p"],
            "composites" => &[],
            "random" => &["count", "seed", "atoms"],
            _ => {
                return Err(usage(format!(
                    "unknown family `{name}`; expected fans, fp, paths, complete, chains, composites or random"
                )))
            }
        };
        if let Some(k) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(usage(format!("family `{name}` has no parameter `{k}`")));
        }
        if let Some(fl) = flags.iter().find(|f| !(name == "fans" && f.as_str() == "pure")) {
            return Err(usage(format!("family `{name}` has no flag `{fl}`")));
        }
        let get = |k: &str, default: u64| kv.get(k).copied().unwrap_or(default);
        Ok(match name {
            "fans" => Family::Fans {
                max_n: get("n", 4) as u32,
                max_w: get("w", 2) as usize,
                max_h: get("h", 2) as u32,
                pure_only: !flags.is_empty(),
            },
            "fp" => Family::Fp { max_p: get("p", 3) as u32 },
            "paths" => Family::Paths { max_t: get("t", 5) as u32 },
            "complete" => Family::Complete { max_n: get("n", 3) as u32 },
            "chains" => Family::Chains { max_t: get("t", 2) as usize, max_p: get("p", 3) as u32 },
            "composites" => Family::Composites,
            _ => Family::Random {
                count: get("count", 200) as usize,
                seed: get("seed", 0),
                max_atoms: get("atoms", 4) as usize,
            },
        })
    }
}

fn usage(msg: String) -> HarnessError {
    HarnessError::Usage(msg)
}

/// Partitions of `s` into non-increasing positive parts, in lexicographically decreasing order.
fn partitions(s: usize, max_part: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=s.min(max_part)).rev() {
        for mut rest in partitions(s - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn all_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=max).map(move |h| {
                    let mut w = v.clone();
                    w.push(h);
                    w
                })
            })
            .collect();
    }
    out
}

/// Fan specs up to the symmetry of `K_n`: `W = {1, ..., s}` split into consecutive blocks of
/// non-increasing size.
pub fn fan_specs(max_n: u32, max_w: usize, max_h: u32, pure_only: bool) -> Vec<FanSpec> {
    let mut out = Vec::new();
    let max_h = if pure_only { 1 } else { max_h };
    for n in 2..=max_n {
        for s in 0..=max_w.min(n as usize) {
            for shape in partitions(s, s) {
                let mut next: Label = 1;
                let parts: Vec<Vec<Label>> = shape
                    .iter()
                    .map(|&len| {
                        let p = (next..next + len as Label).collect();
                        next += len as Label;
                        p
                    })
                    .collect();
                for hs in all_vectors(s, max_h) {
                    let mut it = hs.iter();
                    let sizes = parts
                        .iter()
                        .map(|p| (1..=p.len() as u32).map(|j| j + it.next().unwrap()).collect())
                        .collect();
                    if let Ok(spec) = FanSpec::new(n, parts.clone(), sizes) {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

fn glue(op: Op, left: GraphExpr, lmark: MarkRef, right: GraphExpr, rmark: MarkRef) -> GraphExpr {
    GraphExpr::Node { op, left: Box::new(left), lmark, right: Box::new(right), rmark }
}

/// Left-deep `∘` chain of `F_p` atoms, each glued at its leaf `2p` to leaf `1` of the next.
pub fn fp_chain(ps: &[u32]) -> GraphExpr {
    let mut e = GraphExpr::atom(Atom::Fp(ps[0]));
    for (i, w) in ps.windows(2).enumerate() {
        e = glue(Op::Circ, e, MarkRef { atom: i, label: 2 * w[0] }, GraphExpr::atom(Atom::Fp(w[1])), MarkRef::local(1));
    }
    e
}

const COMPOSITES: [&str; 20] = [
    "star(star(Fp(2)@4, Fp(1)@1)@2.2, Fp(1)@1)",
    "star(star(Fp(2)@4, Fp(2)@1)@2.4, Fp(1)@1)",
    "circ(circ(Fp(2)@4, Fp(2)@1)@2.4, Fp(2)@1)",
    "circ(circ(Fp(3)@6, Fp(2)@1)@2.4, Fp(2)@1)",
    "star(circ(Fp(2)@4, Fp(2)@1)@2.4, Fp(2)@1)",
    "circ(star(Fp(2)@4, Fp(1)@1)@2.2, Fp(2)@1)",
    "star(star(Fp(1)@2, Fp(2)@1)@2.4, Fp(2)@1)",
    "circ(Fp(2)@4, circ(Fp(2)@1, Fp(2)@4)@2.1)",
    "star(Fp(3)@6, star(Fp(1)@1, Fp(1)@2)@1.2)",
    "circ(star(Fp(3)@6, Fp(1)@1)@2.2, Fp(2)@1)",
    "star(star(fan(3; W=[[1]]; a=[[2]])@4, Fp(1)@1)@2.2, Fp(2)@1)",
    "circ(circ(fan(3; W=[[1]]; a=[[2]])@4, Fp(2)@1)@2.4, Fp(2)@1)",
    "circ(circ(fan(3; W=[[1],[2]]; a=[[2],[2]])@4, Fp(2)@1)@1.5, fan(3; W=[[1]]; a=[[2]])@4)",
    "star(star(fan(3; W=[[1],[2]]; a=[[2],[2]])@4, Fp(1)@1)@1.5, Fp(1)@1)",
    "star(circ(fan(3; W=[[1],[2]]; a=[[2],[2]])@4, Fp(2)@1)@2.4, fan(3; W=[[1]]; a=[[2]])@4)",
    "circ(star(Fp(2)@4, fan(3; W=[[1]]; a=[[2]])@4)@1.1, Fp(2)@4)",
    "star(Fp(2)@1, star(Fp(2)@1, Fp(1)@1)@1.4)",
    "circ(Fp(3)@6, circ(Fp(2)@1, Fp(2)@1)@1.4)",
    "star(star(Fp(1)@2, Fp(1)@1)@2.2, Fp(2)@1)",
    "star(circ(fan(3; W=[[1]]; a=[[2]])@4, Fp(2)@1)@2.4, Fp(1)@1)",
];

/// Twenty depth-2 compositions of `F_p` and pure fan atoms on at most nine vertices.
pub fn composites() -> Vec<GraphExpr> {
    COMPOSITES.iter().map(|s| parse_expr(s).expect("built-in composites parse")).collect()
}

fn random_atom(rng: &mut StdRng) -> Atom {
    match rng.gen_range(0..4) {
        0 => Atom::Path(rng.gen_range(2..=5)),
        1 => Atom::Fp(rng.gen_range(1..=4)),
        2 => {
            let n = rng.gen_range(3..=5);
            let k = rng.gen_range(1..=2usize);
            let mut labels: Vec<Label> = (1..=n).collect();
            for i in (1..labels.len()).rev() {
                labels.swap(i, rng.gen_range(0..=i));
            }
            let mut parts = Vec::new();
            let mut at = 0;
            for i in 0..k {
                let left = k - i - 1;
                let len = rng.gen_range(1..=(n as usize - at - left).min(2));
                parts.push(labels[at..at + len].to_vec());
                at += len;
            }
            Atom::Fan(FanSpec::pure(n, parts).expect("valid partition"))
        }
        _ => {
            let n = rng.gen_range(2..=4);
            let len = rng.gen_range(1..=2usize.min(n as usize));
            let sizes = (1..=len as u32).map(|j| j + rng.gen_range(1..=3)).collect();
            Atom::Fan(FanSpec::new(n, vec![(1..=len as Label).collect()], vec![sizes]).expect("valid spec"))
        }
    }
}

/// Free marks of an expression as operand-relative references.
fn free_marks(e: &GraphExpr) -> Vec<MarkRef> {
    let Ok(real) = e.realize() else { return Vec::new() };
    real.marked
        .marks
        .iter()
        .filter_map(|&g| {
            real.atoms
                .iter()
                .position(|p| g > p.offset && g <= p.offset + p.width)
                .map(|i| MarkRef { atom: i, label: g - real.atoms[i].offset })
        })
        .collect()
}

/// A random composition of up to `max_atoms` atoms; every step glues a free mark of the
/// expression so far to a mark of a fresh atom, on either side.
pub fn random_expr(rng: &mut StdRng, max_atoms: usize) -> GraphExpr {
    let mut e = GraphExpr::atom(random_atom(rng));
    for _ in 1..rng.gen_range(1..=max_atoms.max(1)) {
        let marks = free_marks(&e);
        if marks.is_empty() {
            break;
        }
        let atom = GraphExpr::atom(random_atom(rng));
        let atom_marks = free_marks(&atom);
        if atom_marks.is_empty() {
            continue;
        }
        let em = marks[rng.gen_range(0..marks.len())];
        let am = atom_marks[rng.gen_range(0..atom_marks.len())];
        let op = if rng.gen_bool(0.5) { Op::Circ } else { Op::Star };
        let candidate = if rng.gen_bool(0.5) {
            glue(op, e.clone(), em, atom.clone(), am)
        } else {
            glue(op, atom.clone(), am, e.clone(), em)
        };
        e = if candidate.realize().is_ok() {
            candidate
        } else {
            glue(Op::Star, e, em, atom, am)
        };
    }
    e
}

pub fn random_exprs(count: usize, seed: u64, max_atoms: usize) -> Vec<GraphExpr> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_expr(&mut rng, max_atoms)).collect()
}

impl Family {
    /// Members in a fixed order.
    pub fn enumerate(&self) -> Vec<GraphExpr> {
        match self {
            Family::Fans { max_n, max_w, max_h, pure_only } => fan_specs(*max_n, *max_w, *max_h, *pure_only)
                .into_iter()
                .map(|s| GraphExpr::atom(Atom::Fan(s)))
                .collect(),
            Family::Fp { max_p } => (1..=*max_p).map(|p| GraphExpr::atom(Atom::Fp(p))).collect(),
            Family::Paths { max_t } => (2..=*max_t).map(|t| GraphExpr::atom(Atom::Path(t))).collect(),
            Family::Complete { max_n } => (2..=*max_n).map(|n| GraphExpr::atom(Atom::Complete(n))).collect(),
            Family::Chains { max_t, max_p } => {
                let mut out = Vec::new();
                for t in 1..=*max_t {
                    let heads = (0..t).fold(vec![Vec::new()], |acc: Vec<Vec<u32>>, _| {
                        acc.into_iter()
                            .flat_map(|v| {
                                (3..=*max_p).map(move |p| {
                                    let mut w = v.clone();
                                    w.push(p);
                                    w
                                })
                            })
                            .collect()
                    });
                    for head in heads {
                        for last in 2..=*max_p {
                            let mut ps = head.clone();
                            ps.push(last);
                            out.push(fp_chain(&ps));
                        }
                    }
                }
                out
            }
            Family::Composites => composites(),
            Family::Random { count, seed, max_atoms } => random_exprs(*count, *seed, *max_atoms),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub exact_match: usize,
    pub within_interval: usize,
    pub violations: usize,
    pub oracle_unavailable: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceError {
    pub expr: String,
    pub m: u32,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub kernel_version: String,
    pub family: String,
    pub m_values: Vec<u32>,
    pub settings: Settings,
    pub summary: Summary,
    pub cache: Option<CacheStats>,
    pub wall_ms: f64,
    /// Sorted by canonical graph, then `m`, then expression text.
    pub reports: Vec<VerdictReport>,
    pub errors: Vec<InstanceError>,
}

impl SuiteReport {
    pub fn violations(&self) -> usize {
        self.summary.violations
    }

    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "family {}  m {:?}  char {}\ninstances {}  exact-match {}  within-interval {}  VIOLATION {}  oracle-unavailable {}  errors {}\n",
            self.family,
            self.m_values,
            self.settings.characteristic,
            s.instances,
            s.exact_match,
            s.within_interval,
            s.violations,
            s.oracle_unavailable,
            s.errors
        );
        for r in &self.reports {
            if r.violations() > 0 {
                out += &format!("VIOLATION: {} at m = {}\n", r.expr, r.m);
            }
        }
        for e in &self.errors {
            out += &format!("error: {} at m = {}: {}\n", e.expr, e.m, e.message);
        }
        if let Some(c) = &self.cache {
            out += &format!(
                "cache hits {}  misses {}  audits {}  audit failures {}\n",
                c.hits, c.misses, c.audits, c.audit_failures
            );
        }
        out += &format!("wall {:.1} s\n", self.wall_ms / 1e3);
        out
    }
}

/// Runs `verify` on every member at every `m`, on a pool of `jobs` threads (0 = one per core).
pub fn cmd_suite(family: &Family, ms: &[u32], settings: &Settings, cache: Option<&Cache>, jobs: usize) -> Result<SuiteReport> {
    let start = std::time::Instant::now();
    let exprs = family.enumerate();
    let instances: Vec<(GraphExpr, u32)> = exprs.iter().flat_map(|e| ms.iter().map(move |&m| (e.clone(), m))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(format!("thread pool: {e}")))?;
    let results: Vec<(GraphExpr, u32, Result<VerdictReport>)> = pool.install(|| {
        instances
            .into_par_iter()
            .map(|(e, m)| {
                let r = cmd_verify(&e, &settings.clone().with_m(m), cache);
                (e, m, r)
            })
            .collect()
    });
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (e, m, r) in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(err) => errors.push(InstanceError { expr: emit(&e), m, message: err.to_string() }),
        }
    }
    reports.sort_by(|a, b| (&a.canonical, a.m, &a.expr).cmp(&(&b.canonical, b.m, &b.expr)));
    errors.sort_by(|a, b| (&a.expr, a.m).cmp(&(&b.expr, b.m)));
    let mut summary = Summary { instances: reports.len() + errors.len(), errors: errors.len(), ..Summary::default() };
    for r in &reports {
        for v in r.verdicts() {
            match v {
                Verdict::ExactMatch => summary.exact_match += 1,
                Verdict::WithinInterval => summary.within_interval += 1,
                Verdict::Violation => summary.violations += 1,
                Verdict::OracleUnavailable => summary.oracle_unavailable += 1,
            }
        }
        summary.violations += usize::from(r.prediction_error.is_some());
    }
    Ok(SuiteReport {
        schema: SCHEMA,
        kernel_version: KERNEL_VERSION.into(),
        family: family.to_string(),
        m_values: ms.to_vec(),
        settings: settings.clone(),
        summary,
        cache: cache.map(Cache::stats),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        reports,
        errors,
    })
}

/// `2`, `2,3` or `2..4` (inclusive).
pub fn parse_m_range(s: &str) -> Result<Vec<u32>> {
    let bad = || usage(format!("bad m range `{s}`; use 3, 2,3 or 2..4"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        if let Some((a, b)) = item.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.iter().any(|&m| m < 2) {
        return Err(usage(format!("m range `{s}` must be nonempty with every m >= 2")));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_patterns() {
        let f: Family = "fans:n=4,w=2,h=2,pure".parse().unwrap();
        assert_eq!(f, Family::Fans { max_n: 4, max_w: 2, max_h: 2, pure_only: true });
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        assert!("fans:q=1".parse::<Family>().is_err());
        assert!("fp:pure".parse::<Family>().is_err());
        assert!("nope".parse::<Family>().is_err());
        assert_eq!(parse_m_range("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_m_range("3,2").unwrap(), vec![2, 3]);
        assert!(parse_m_range("1").is_err());
    }

    #[test]
    fn fan_enumeration() {
        assert_eq!(partitions(2, 2), vec![vec![2], vec![1, 1]]);
        // Per n: one K_n, 2 one-vertex fans, 4 + 4 two-vertex fans.
        let all = fan_specs(4, 2, 2, false);
        assert_eq!(all.len(), 3 * 11);
        assert_eq!(fan_specs(4, 2, 2, true).len(), 3 * 4);
        assert_eq!(all, fan_specs(4, 2, 2, false));
    }

    #[test]
    fn chains_and_composites() {
        let chains = Family::Chains { max_t: 2, max_p: 3 }.enumerate();
        let text: Vec<String> = chains.iter().map(emit).collect();
        assert_eq!(
            text,
            [
                "circ(Fp(3)@6, Fp(2)@1)",
                "circ(Fp(3)@6, Fp(3)@1)",
                "circ(circ(Fp(3)@6, Fp(3)@1)@2.6, Fp(2)@1)",
                "circ(circ(Fp(3)@6, Fp(3)@1)@2.6, Fp(3)@1)",
            ]
        );
        let cs = composites();
        assert_eq!(cs.len(), 20);
        for e in &cs {
            assert_eq!(e.depth(), 2, "{e}");
            assert!(e.realize().unwrap().graph().num_vertices() <= 9, "{e}");
            assert!(e.is_ffan());
        }
    }

    #[test]
    fn random_expressions_are_deterministic() {
        let a = random_exprs(50, 7, 4);
        assert_eq!(a, random_exprs(50, 7, 4));
        assert!(a.iter().all(|e| e.realize().is_ok()));
        assert!(a.iter().any(|e| e.num_atoms() >= 3));
    }
}
