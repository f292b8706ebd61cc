//! Closed-form dimension, depth and regularity of `S/J_{K_m,G}`.
//!
//! Every rule checks its own hypotheses and either fires a [`Firing`] or stays silent.
//! [`predict`] runs all rules, intersects their intervals and reports contradictions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cutsets::{self, CutSetFamily, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::families::{fan_graph, fp_graph, Atom, FanSpec, GraphExpr, Op};
use crate::graph::{Graph, Label, VertexSet};

/// What a single rule asserts about an invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Exact(u32),
    AtMost(u32),
    AtLeast(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Firing {
    pub rule: String,
    pub claim: Claim,
    /// The hypotheses as checked.
    pub note: String,
}

impl Firing {
    fn new(rule: &str, claim: Claim, note: impl Into<String>) -> Self {
        Firing { rule: rule.to_string(), claim, note: note.into() }
    }
}

impl fmt::Display for Firing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.claim {
            Claim::Exact(v) => format!("= {v}"),
            Claim::AtMost(v) => format!("<= {v}"),
            Claim::AtLeast(v) => format!(">= {v}"),
        };
        write!(f, "{} {c} [{}]", self.rule, self.note)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    Exact { value: u32 },
    Interval { lo: u32, hi: u32 },
}

impl Bound {
    pub fn lo(&self) -> u32 {
        match *self {
            Bound::Exact { value } => value,
            Bound::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u32 {
        match *self {
            Bound::Exact { value } => value,
            Bound::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<u32> {
        match *self {
            Bound::Exact { value } => Some(value),
            Bound::Interval { .. } => None,
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Bound::Exact { value } => write!(f, "{value}"),
            Bound::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// The intersection of all fired claims, with the claims themselves as provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub bound: Bound,
    pub firings: Vec<Firing>,
}

impl InvariantValue {
    /// Fails with `Contradiction` when the claims have empty intersection, and with
    /// `ShapeNotCovered` when no claim bounds the value from above.
    pub fn from_firings(invariant: &'static str, firings: Vec<Firing>) -> Result<Self> {
        let mut lo = 0u32;
        let mut hi: Option<u32> = None;
        let mut exact: Option<u32> = None;
        for f in &firings {
            match f.claim {
                Claim::Exact(v) => {
                    if exact.is_some_and(|e| e != v) {
                        return Err(contradiction(invariant, &firings));
                    }
                    exact = Some(v);
                    lo = lo.max(v);
                    hi = Some(hi.map_or(v, |h| h.min(v)));
                }
                Claim::AtMost(v) => hi = Some(hi.map_or(v, |h| h.min(v))),
                Claim::AtLeast(v) => lo = lo.max(v),
            }
        }
        let hi = hi.ok_or_else(|| Error::ShapeNotCovered(format!("no upper bound for {invariant}")))?;
        if lo > hi {
            return Err(contradiction(invariant, &firings));
        }
        let bound = match exact {
            Some(value) => Bound::Exact { value },
            None => Bound::Interval { lo, hi },
        };
        Ok(InvariantValue { bound, firings })
    }

    pub fn lo(&self) -> u32 {
        self.bound.lo()
    }

    pub fn hi(&self) -> u32 {
        self.bound.hi()
    }

    pub fn exact(&self) -> Option<u32> {
        self.bound.exact()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.bound.contains(v)
    }

    pub fn rules(&self) -> Vec<&str> {
        self.firings.iter().map(|f| f.rule.as_str()).collect()
    }
}

fn contradiction(invariant: &'static str, firings: &[Firing]) -> Error {
    let detail: Vec<String> = firings.iter().map(|f| f.to_string()).collect();
    Error::Contradiction { invariant, detail: detail.join("; ") }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimWitness {
    pub dim: u32,
    pub witness: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub m: u32,
    pub expr: GraphExpr,
    pub num_vertices: usize,
    pub dim: InvariantValue,
    pub depth: InvariantValue,
    pub reg: InvariantValue,
    pub cm: Option<bool>,
    pub unmixed: Option<bool>,
    /// Maximum of `c(T)(m-1) + |V| - |T|` over the cut point sets, when enumerated.
    pub combinatorial_dim: Option<DimWitness>,
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidSpec(format!("m = {m}, need m >= 2")))
    } else {
        Ok(())
    }
}

/// `reg S/J_{K_m,K_n} = min{m-1, n-1}`.
pub fn complete_reg(n: u32, m: u32) -> u32 {
    (m - 1).min(n.saturating_sub(1))
}

/// `min{|V|-1, m+k-1}` for a `k`-pure pseudo fan on `nv` vertices; the empty graph gives 0.
pub fn pseudo_fan_reg(nv: u32, k: u32, m: u32) -> u32 {
    if nv == 0 {
        0
    } else {
        (nv - 1).min(m + k - 1)
    }
}

pub fn fan_dim(spec: &FanSpec, m: u32) -> u32 {
    let s = (spec.w_size() as u32).min(spec.n - 1);
    m + spec.num_vertices() as u32 - 1 + s * (m - 2)
}

pub fn fp_dim(p: u32, m: u32) -> u32 {
    m + 2 * p - 1 + (p - 1) * (m - 2)
}

pub fn fp_reg(p: u32, m: u32) -> u32 {
    (2 * p - 1).min(m + 1)
}

/// Rule outputs for one atom, keyed by invariant.
#[derive(Default)]
struct Fired {
    dim: Vec<Firing>,
    depth: Vec<Firing>,
    reg: Vec<Firing>,
    cm: Option<(bool, &'static str)>,
}

fn fan_rules(spec: &FanSpec, m: u32, out: &mut Fired) {
    let nv = spec.num_vertices() as u32;
    let k = spec.k() as u32;
    let w = spec.w_size() as u32;
    let n = spec.n;
    out.dim.push(Firing::new(
        "fan_Dimension",
        Claim::Exact(fan_dim(spec, m)),
        format!("s = min{{|W|, n-1}} = {}", w.min(n - 1)),
    ));
    out.depth.push(Firing::new("fan_general(a)", Claim::Exact(nv + m - 1), format!("|V| = {nv}")));
    if m >= nv {
        out.reg.push(Firing::new("fan_general(b)", Claim::Exact(nv - 1), format!("m = {m} >= |V| = {nv}")));
    } else {
        let delta = spec.delta() as u32;
        out.reg.push(Firing::new(
            "fan_general(c)",
            Claim::AtMost(k + (delta + 1) * (m - 1)),
            format!("m < |V|, k = {k}, delta = {delta}"),
        ));
    }
    let cl = spec.cl() as u32;
    out.reg.push(Firing::new("fan_general(d)", Claim::AtMost(cl * (m - 1)), format!("cl = {cl}")));
    if n > 1 + w && spec.hs().all(|h| h >= m) {
        out.reg.push(Firing::new(
            "fan_general(e)",
            Claim::Exact((cl - 1) * (m - 1) + (m - 1).min(n - w - 1)),
            format!("n = {n} > 1 + |W| and every h >= m"),
        ));
    }
    if spec.is_pure() {
        out.reg.push(Firing::new(
            "FkW_pure_reg",
            Claim::Exact(pseudo_fan_reg(nv, k, m)),
            format!("pure, |V| = {nv}, k = {k}"),
        ));
        out.reg.push(Firing::new("cor:FkW_pure", Claim::AtMost(k + m - 1), "pure"));
        if (0..spec.k()).all(|i| spec.r(i) == 1) {
            out.reg.push(Firing::new(
                "prop:FkW_pure",
                Claim::Exact(m.min(n) + k - 1),
                "pure with every r_i = 1",
            ));
        }
    }
    out.cm = Some((m == 2 || w == 0, "CM iff"));
}

fn fp_rules(p: u32, m: u32, out: &mut Fired) {
    out.dim.push(Firing::new("fp_dim_depth(a)", Claim::Exact(fp_dim(p, m)), format!("p = {p}")));
    out.depth.push(Firing::new("fp_dim_depth(b)", Claim::Exact(m + 2 * p - 1), format!("p = {p}")));
    out.reg.push(Firing::new("reg_Fp", Claim::Exact(fp_reg(p, m)), format!("p = {p}")));
    out.cm = Some((p == 1 || m == 2, "fp_dim_depth"));
}

fn path_rules(t: u32, m: u32, out: &mut Fired) {
    if t >= 2 {
        out.depth.push(Firing::new("reg_path", Claim::Exact(m + t - 1), format!("t = {t}")));
        out.reg.push(Firing::new("reg_path", Claim::Exact(t - 1), format!("t = {t}")));
    } else {
        polynomial_ring_rules(m, out);
    }
}

fn polynomial_ring_rules(m: u32, out: &mut Fired) {
    for v in [&mut out.dim, &mut out.depth] {
        v.push(Firing::new("single vertex", Claim::Exact(m), "J = 0"));
    }
    out.reg.push(Firing::new("single vertex", Claim::Exact(0), "J = 0"));
    out.cm = Some((true, "single vertex"));
}

fn complete_rules(n: u32, m: u32, out: &mut Fired) {
    if n == 1 {
        return polynomial_ring_rules(m, out);
    }
    out.dim.push(Firing::new("generic_CM", Claim::Exact(m + n - 1), format!("n = {n}")));
    out.depth.push(Firing::new("generic_CM", Claim::Exact(m + n - 1), format!("n = {n}")));
    out.reg.push(Firing::new("reg_min_equal", Claim::Exact(complete_reg(n, m)), format!("n = {n}")));
    out.cm = Some((true, "generic_CM"));
}

fn atom_rules(atom: &Atom, m: u32, out: &mut Fired) -> Result<()> {
    match atom {
        Atom::Complete(n) => complete_rules(*n, m, out),
        Atom::Path(t) => path_rules(*t, m, out),
        Atom::Fp(p) => fp_rules(*p, m, out),
        Atom::Fan(spec) => {
            spec.validate()?;
            fan_rules(spec, m, out)
        }
    }
    Ok(())
}

/// One atom of a linear composition, with the atom-local leaves glued towards its
/// predecessor and successor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub atom: Atom,
    pub left: Option<Label>,
    pub right: Option<Label>,
}

/// `G_1 ⊛ G_2 ⊛ ... ⊛ G_N` read off an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub links: Vec<ChainLink>,
    pub ops: Vec<Op>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn reversed(&self) -> Chain {
        let links = self
            .links
            .iter()
            .rev()
            .map(|l| ChainLink { atom: l.atom.clone(), left: l.right, right: l.left })
            .collect();
        Chain { links, ops: self.ops.iter().rev().copied().collect() }
    }

    /// Leaves of link `i` used by the gluing steps.
    fn used(&self, i: usize) -> Vec<Label> {
        let l = &self.links[i];
        l.left.into_iter().chain(l.right).collect()
    }
}

/// Every atom carries at most two marks, so the gluing steps always form a path.
pub fn chain(expr: &GraphExpr) -> Result<Chain> {
    let real = expr.realize()?;
    let n = real.atoms.len();
    let owner = |g: Label| -> usize {
        real.atoms
            .iter()
            .position(|p| g > p.offset && g <= p.offset + p.width)
            .expect("every leaf belongs to an atom")
    };
    // (neighbour atom, own local leaf, op)
    let mut adj: Vec<Vec<(usize, Label, Op)>> = vec![Vec::new(); n];
    for s in &real.steps {
        let (a, b) = (owner(s.left_leaf), owner(s.right_leaf));
        adj[a].push((b, s.left_leaf - real.atoms[a].offset, s.op));
        adj[b].push((a, s.right_leaf - real.atoms[b].offset, s.op));
    }
    if adj.iter().any(|v| v.len() > 2) {
        return Err(Error::ShapeNotCovered("an atom is glued more than twice".into()));
    }
    let start = (0..n).find(|&i| adj[i].len() <= 1).unwrap_or(0);
    let mut links = Vec::with_capacity(n);
    let mut ops = Vec::new();
    let (mut prev, mut cur, mut left) = (usize::MAX, start, None);
    loop {
        let next = adj[cur].iter().find(|e| e.0 != prev).copied();
        links.push(ChainLink { atom: real.atoms[cur].atom.clone(), left, right: next.map(|e| e.1) });
        match next {
            Some((nb, _, op)) => {
                let back = adj[nb].iter().find(|e| e.0 == cur).unwrap().1;
                ops.push(op);
                left = Some(back);
                prev = cur;
                cur = nb;
            }
            None => break,
        }
    }
    Ok(Chain { links, ops })
}

/// A `k`-pure pseudo fan: a pure fan with `k >= 1`, or `F_p` with `k = 2`.
#[derive(Clone, Copy, Debug)]
struct PseudoFan<'a> {
    atom: &'a Atom,
    k: u32,
    nv: u32,
}

fn pseudo_fan(atom: &Atom) -> Option<PseudoFan<'_>> {
    atom.pseudo_fan_k()
        .map(|k| PseudoFan { atom, k: k as u32, nv: atom.num_vertices() as u32 })
}

impl PseudoFan<'_> {
    fn reg(&self, m: u32) -> u32 {
        pseudo_fan_reg(self.nv, self.k, m)
    }

    /// Vertex count and `q` of `G \ {v, f}` over the given leaves `f`, computed from the spec.
    fn delete(&self, leaves: &[Label]) -> Option<(u32, u32)> {
        let d = leaves.len() as u32;
        match self.atom {
            Atom::Fp(p) => {
                if !leaves.iter().all(|&f| f == 1 || f == 2 * p) || d > *p {
                    return None;
                }
                let rest = p - d;
                Some(if rest == 0 { (0, 0) } else { (2 * rest, 2) })
            }
            Atom::Fan(spec) => {
                let mut parts: Vec<usize> = leaves.iter().map(|&f| spec.part_of_leaf(f)).collect::<Option<_>>()?;
                parts.sort_unstable();
                parts.dedup();
                if parts.len() != leaves.len() {
                    return None;
                }
                let lost = parts.iter().filter(|&&i| spec.r(i) == 1).count() as u32;
                Some((self.nv - 2 * d, self.k - lost))
            }
            _ => None,
        }
    }

    fn base_n(&self) -> Option<u32> {
        match self.atom {
            Atom::Fan(spec) => Some(spec.n),
            _ => None,
        }
    }
}

fn pair(chain: &Chain, op: Op) -> Result<(&ChainLink, &ChainLink)> {
    if chain.len() != 2 || chain.ops[0] != op {
        return Err(Error::OperandShapeUnsupported(format!("expected a single {op:?} of two atoms")));
    }
    Ok((&chain.links[0], &chain.links[1]))
}

fn unsupported(a: &Atom, b: &Atom) -> Error {
    Error::OperandShapeUnsupported(format!("{a} with {b}"))
}

fn circ_firings(chain: &Chain, m: u32) -> Result<Vec<Firing>> {
    let (l1, l2) = pair(chain, Op::Circ)?;
    let mut out = Vec::new();
    for (x, y) in [(l1, l2), (l2, l1)] {
        if let (Atom::Fan(spec), Atom::Path(t)) = (&x.atom, &y.atom) {
            if spec.n >= 3 && spec.is_pure() {
                let s = if *t == 2 { 1 } else { 2 };
                let base = pseudo_fan_reg(spec.num_vertices() as u32, spec.k() as u32, m);
                out.push(Firing::new(
                    "fan_path_circ_reg",
                    Claim::AtMost(base + t - 1 - s),
                    format!("pure fan on K_{} with P_{t}", spec.n),
                ));
                return Ok(out);
            }
        }
    }
    let (g1, g2) = match (pseudo_fan(&l1.atom), pseudo_fan(&l2.atom)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(unsupported(&l1.atom, &l2.atom)),
    };
    if [g1, g2].iter().any(|g| g.nv < g.k + 3 || g.base_n().is_some_and(|n| n < 3)) {
        return Err(unsupported(&l1.atom, &l2.atom));
    }
    let (Some(d1), Some(d2)) = (g1.delete(&[l1.right.unwrap()]), g2.delete(&[l2.left.unwrap()])) else {
        return Err(unsupported(&l1.atom, &l2.atom));
    };
    let ((n1, k1, q1), (n2, k2, q2)) = ((g1.nv, g1.k, d1.1), (g2.nv, g2.k, d2.1));
    let nv = n1 + n2 - 3;
    let note = format!("k = ({k1}, {k2}), q = ({q1}, {q2}), |V_i| = ({n1}, {n2})");
    let lower = pseudo_fan_reg(d1.0, q1, m) + pseudo_fan_reg(d2.0, q2, m);
    out.push(Firing::new("circ_lower_upper_bound", Claim::AtLeast(lower), note.clone()));
    out.push(Firing::new("circ_lower_upper_bound", Claim::AtMost(g1.reg(m) + g2.reg(m)), note.clone()));
    let three_way = ((n1 - 3).min(m + q1 - 1) + (n2 - 3).min(m + q2 - 1))
        .max((nv - 1).min(m + k1 + k2 - 3))
        .max((nv - 1).min(m + k1 + k2 - 2));
    let same_q = q1 == k1 && q2 == k2;
    let claim = if same_q { Claim::Exact(three_way) } else { Claim::AtMost(three_way) };
    out.push(Firing::new("reg_Fan_Fan_circ", claim, note.clone()));
    let coarse = (m + q1 - 1) + (m + q2 - 1);
    let sharp = (m as i64) <= (n1 as i64 - q1 as i64 - 2).min(n2 as i64 - q2 as i64 - 2);
    out.push(Firing::new(
        "reg_Fan_fan_upper_bound",
        if sharp { Claim::Exact(coarse) } else { Claim::AtMost(coarse) },
        note.clone(),
    ));
    if same_q && ((n2 - k2 >= 4 && m <= n1 - k1) || (n1 - k1 >= 4 && m <= n2 - k2)) {
        out.push(Firing::new("rem:reg_fan_fan", Claim::Exact(lower), note));
    }
    Ok(out)
}

fn star_firings(chain: &Chain, m: u32) -> Result<Vec<Firing>> {
    let (l1, l2) = pair(chain, Op::Star)?;
    let mut out = Vec::new();
    match (&l1.atom, &l2.atom) {
        (Atom::Path(a), Atom::Path(b)) => {
            out.push(Firing::new("reg_path", Claim::Exact(a + b - 2), format!("P_{a} * P_{b} is a path")));
            return Ok(out);
        }
        (Atom::Fp(p), Atom::Path(t)) | (Atom::Path(t), Atom::Fp(p)) => {
            out.push(Firing::new(
                "fp_path_star_reg",
                Claim::Exact(fp_reg(*p, m) + t - 1),
                format!("p = {p}, t = {t}"),
            ));
            return Ok(out);
        }
        _ => {}
    }
    for (x, y) in [(l1, l2), (l2, l1)] {
        if let (Some(g), Atom::Path(t)) = (pseudo_fan(&x.atom), &y.atom) {
            if g.nv >= g.k + 3 {
                let v = g.reg(m) + t - 1;
                let claim = if m >= g.k { Claim::Exact(v) } else { Claim::AtMost(v) };
                out.push(Firing::new("fan_path_star_reg", claim, format!("k = {}, t = {t}", g.k)));
                return Ok(out);
            }
            return Err(unsupported(&l1.atom, &l2.atom));
        }
    }
    let (g1, g2) = match (pseudo_fan(&l1.atom), pseudo_fan(&l2.atom)) {
        (Some(a), Some(b)) if a.nv >= a.k + 3 && b.nv >= b.k + 3 => (a, b),
        _ => return Err(unsupported(&l1.atom, &l2.atom)),
    };
    let (Some(d1), Some(d2)) = (g1.delete(&[l1.right.unwrap()]), g2.delete(&[l2.left.unwrap()])) else {
        return Err(unsupported(&l1.atom, &l2.atom));
    };
    let ((n1, k1), (n2, k2)) = ((g1.nv, g1.k), (g2.nv, g2.k));
    let nv = n1 + n2 - 1;
    let note = format!("k = ({k1}, {k2}), q = ({}, {}), |V_i| = ({n1}, {n2})", d1.1, d2.1);
    let (r1, r2) = (pseudo_fan_reg(d1.0, d1.1, m), pseudo_fan_reg(d2.0, d2.1, m));
    out.push(Firing::new("*_lower_upper_bound", Claim::AtLeast(r1 + r2), note.clone()));
    out.push(Firing::new(
        "induced_graph",
        Claim::AtLeast((g1.reg(m) + r2).max(g2.reg(m) + r1)),
        "G minus the neighbour of the shared leaf in either operand",
    ));
    out.push(Firing::new(
        "*_lower_upper_bound",
        Claim::AtMost((2 * m + k1 + k2 - 2).min(nv - 1)),
        note.clone(),
    ));
    let (a, b) = (n1 - k1, n2 - k2);
    let (lo_side, hi_side) = if a <= b { (g1, g2) } else { (g2, g1) };
    if a.min(b) < m && m <= a.max(b) {
        out.push(Firing::new(
            "*_lower_upper_bound",
            Claim::AtMost(m + hi_side.k + lo_side.nv - 2),
            format!("A + 1 <= m <= B with A = {}, B = {}", a.min(b), a.max(b)),
        ));
    }
    let rule = match (&l1.atom, &l2.atom) {
        (Atom::Fp(_), Atom::Fp(_)) => "F*F(c)",
        (Atom::Fp(_), _) | (_, Atom::Fp(_)) => "F*F(b)",
        _ => "F*F(a)",
    };
    out.push(Firing::new(rule, Claim::AtMost(2 * m + k1 + k2 - 2), note));
    if let (Atom::Fp(p1), Atom::Fp(p2)) = (&l1.atom, &l2.atom) {
        let (p1, p2) = (*p1, *p2);
        let fits = |x: u32, y: u32| m <= (2 * x - 2).min(2 * y - 4);
        if p1 >= 3 && p2 >= 3 && (fits(p1, p2) || fits(p2, p1)) {
            out.push(Firing::new("*_add", Claim::Exact(2 * m + 2), format!("n = ({p1}, {p2})")));
        }
        if p1 == 3 && p2 == 3 && (m == 3 || m == 4) {
            out.push(Firing::new("exam:333_star", Claim::AtMost(8), format!("m = {m}")));
        }
    }
    Ok(out)
}

/// `ℓ_i` for the composite bound: `n_i - 1` for paths, `m + k_i - 1` for pseudo fans.
fn ell(atom: &Atom, m: u32) -> Option<u32> {
    match atom {
        Atom::Fp(1) => Some(1),
        Atom::Fp(2) => Some(3u32.min(m + 1)),
        Atom::Fan(s) if s.num_vertices() < 3 => None,
        _ => atom.ell(m),
    }
}

fn composite_firings(chain: &Chain, m: u32) -> Result<Vec<Firing>> {
    let ells: Vec<u32> = chain
        .links
        .iter()
        .map(|l| ell(&l.atom, m).ok_or_else(|| Error::OperandShapeUnsupported(l.atom.to_string())))
        .collect::<Result<_>>()?;
    let mut out = vec![Firing::new(
        "full_reg_star_circ_path",
        Claim::AtMost(ells.iter().sum()),
        format!("l = {ells:?}"),
    )];
    out.extend(multiple_circ_firings(chain, m));
    Ok(out)
}

/// Lower and upper bounds for all-∘ chains of pseudo fans, exact under the size conditions.
fn multiple_circ_firings(chain: &Chain, m: u32) -> Vec<Firing> {
    let t = chain.len();
    if t < 2 || chain.ops.iter().any(|&o| o != Op::Circ) {
        return Vec::new();
    }
    let Some(pfs) = chain.links.iter().map(|l| pseudo_fan(&l.atom)).collect::<Option<Vec<_>>>() else {
        return Vec::new();
    };
    let Some(tilde) = (0..t).map(|i| pfs[i].delete(&chain.used(i))).collect::<Option<Vec<_>>>() else {
        return Vec::new();
    };
    let lower: u32 = tilde.iter().map(|&(nv, q)| pseudo_fan_reg(nv, q, m)).sum();
    let upper: u32 = pfs.iter().map(|g| m + g.k - 1).sum();
    let note = format!("t = {t}, (|V~_i|, q_i) = {tilde:?}");
    let mut out = vec![
        Firing::new("multiple_fan_circ(A)", Claim::AtLeast(lower), note.clone()),
        Firing::new("multiple_fan_circ(A)", Claim::AtMost(upper), note.clone()),
    ];
    let conditions = |order: &[usize]| {
        order.iter().enumerate().all(|(pos, &i)| {
            let g = pfs[i];
            let end = pos == 0 || pos == t - 1;
            let size_ok = match g.atom {
                Atom::Fp(p) => *p >= if pos == 0 { 2 } else if pos == t - 1 { 3 } else { 4 },
                _ => g.nv >= g.k + if end { 4 } else { 6 },
            };
            let r = if end { g.nv as i64 - g.k as i64 } else { g.nv as i64 - g.k as i64 - 4 };
            size_ok && tilde[i].1 == g.k && m as i64 <= r
        })
    };
    let forward: Vec<usize> = (0..t).collect();
    let backward: Vec<usize> = (0..t).rev().collect();
    if conditions(&forward) || conditions(&backward) {
        out.push(Firing::new("multiple_fan_circ(B)", Claim::Exact(lower), note));
    }
    out
}

/// `F_{p_1} ∘ ... ∘ F_{p_t} ∘ G_{t+1}` with every `p_i >= 3`.
fn chain_dim_firing(chain: &Chain, m: u32) -> Result<Firing> {
    let n = chain.len();
    let uncovered = || Error::ShapeNotCovered(format!("chain of {n} atoms"));
    if n < 2 || chain.ops.iter().any(|&o| o != Op::Circ) {
        return Err(uncovered());
    }
    for c in [chain.clone(), chain.reversed()] {
        let head_ok = c.links[..n - 1].iter().all(|l| matches!(l.atom, Atom::Fp(p) if p >= 3));
        if !head_ok {
            continue;
        }
        let tail = &c.links[n - 1];
        let t = (n - 1) as u32;
        let head: u32 = c.links[..n - 1]
            .iter()
            .map(|l| match l.atom {
                Atom::Fp(p) => fp_dim(p, m),
                _ => unreachable!(),
            })
            .sum();
        let (tail_dim, s, kind) = match &tail.atom {
            Atom::Fp(p) if *p >= 2 => (fp_dim(*p, m), 2 * m * (t / 2) + (m + 2) * t.div_ceil(2), "F_p tail"),
            Atom::Fan(spec) => {
                let Some(part) = tail.left.and_then(|f| spec.part_of_leaf(f)) else { continue };
                let w = spec.w_size() as u32;
                if !(w < spec.n || (w == spec.n && spec.r(part) >= 2)) {
                    continue;
                }
                (fan_dim(spec, m), 2 * m * t.div_ceil(2) + (m + 2) * (t / 2), "fan tail")
            }
            _ => continue,
        };
        let rule = if t == 1 { "dim" } else { "dimension" };
        return Ok(Firing::new(rule, Claim::Exact(head + tail_dim - s), format!("t = {t}, {kind}, s = {s}")));
    }
    Err(uncovered())
}

fn ffan_depth_value(expr: &GraphExpr, nv: u32, m: u32) -> Result<u32> {
    let ok = expr.atoms().iter().all(|a| a.is_ffan_atom() || matches!(a, Atom::Path(t) if *t >= 2));
    if !ok {
        return Err(Error::NotAnFfan(expr.to_string()));
    }
    Ok(m + nv - 1)
}

/// `depth = m + |V| - 1` for graphs glued from `F_p`, marked fans and paths.
pub fn ffan_depth(expr: &GraphExpr, m: u32) -> Result<InvariantValue> {
    check_m(m)?;
    let nv = expr.realize()?.graph().num_vertices() as u32;
    let v = ffan_depth_value(expr, nv, m)?;
    InvariantValue::from_firings(
        "depth",
        vec![Firing::new("full_depth_star_circ", Claim::Exact(v), format!("|V| = {nv}"))],
    )
}

pub fn circ_reg_bounds(expr: &GraphExpr, m: u32) -> Result<InvariantValue> {
    check_m(m)?;
    InvariantValue::from_firings("reg", circ_firings(&chain(expr)?, m)?)
}

pub fn star_reg_bounds(expr: &GraphExpr, m: u32) -> Result<InvariantValue> {
    check_m(m)?;
    InvariantValue::from_firings("reg", star_firings(&chain(expr)?, m)?)
}

pub fn composite_reg_upper(expr: &GraphExpr, m: u32) -> Result<InvariantValue> {
    check_m(m)?;
    InvariantValue::from_firings("reg", composite_firings(&chain(expr)?, m)?)
}

pub fn chain_dim(expr: &GraphExpr, m: u32) -> Result<InvariantValue> {
    check_m(m)?;
    InvariantValue::from_firings("dim", vec![chain_dim_firing(&chain(expr)?, m)?])
}

/// `Σ_C min{m-1, ω(C)-1}` over the components of `G \ T`, maximised over the given sets.
fn clique_lower_bound(g: &Graph, sets: &[VertexSet], m: u32) -> (u32, VertexSet) {
    let mut best = (0, VertexSet::new());
    for t in sets {
        let rest = g.delete_vertices(t).expect("sets are vertex subsets");
        let v: u32 = rest
            .connected_components()
            .iter()
            .map(|c| complete_reg(rest.induced(c).unwrap().clique_number() as u32, m))
            .sum();
        if v > best.0 {
            best = (v, t.clone());
        }
    }
    best
}

fn generic_reg(g: &Graph, family: Option<&CutSetFamily>, m: u32, scope: Scope) -> Vec<Firing> {
    let mut out = Vec::new();
    if scope == Scope::Full {
        let comps = g.connected_components();
        let upper: u32 = comps.iter().map(|c| c.len() as u32 - 1).sum();
        let saturated = comps.iter().all(|c| c.len() == 1 || m as usize >= c.len());
        out.push(Firing::new(
            "reg_min_equal",
            if saturated { Claim::Exact(upper) } else { Claim::AtMost(upper) },
            format!("component sizes {:?}", comps.iter().map(|c| c.len()).collect::<Vec<_>>()),
        ));
    }
    let sets: Vec<VertexSet> = match family {
        Some(f) => f.sets.iter().map(|c| c.set.clone()).collect(),
        None => vec![VertexSet::new()],
    };
    let (lo, t) = clique_lower_bound(g, &sets, m);
    out.push(Firing::new("induced_graph", Claim::AtLeast(lo), format!("cliques of G minus {t:?}")));
    out
}

/// `Catalog` reports the family formulas alone; `Full` adds cut point enumeration and the
/// generic `|V| - 1` bound.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    Catalog,
    Full,
}

fn combine(mut fired: Fired, expr: &GraphExpr, g: &Graph, m: u32, scope: Scope) -> Result<InvariantReport> {
    let nv = g.num_vertices() as u32;
    let family = if scope == Scope::Full && g.num_vertices() <= ENUMERATION_CAP {
        Some(cutsets::cut_point_sets(g)?)
    } else {
        None
    };
    let combinatorial = family.as_ref().map(|f| {
        let (d, w) = cutsets::dim_over_family(f, m);
        DimWitness { dim: d as u32, witness: w }
    });
    if let Some(c) = &combinatorial {
        fired.dim.push(Firing::new(
            "decompo",
            Claim::Exact(c.dim),
            format!("{} cut point sets, witness {:?}", family.as_ref().unwrap().len(), c.witness),
        ));
    }
    let c0 = g.num_components() as u32;
    fired.dim.push(Firing::new("variable count", Claim::AtMost(m * nv), ""));
    fired.dim.push(Firing::new("decompo", Claim::AtLeast(c0 * (m - 1) + nv), "the prime of T = {}"));
    fired.reg.extend(generic_reg(g, family.as_ref(), m, scope));
    let dim = InvariantValue::from_firings("dim", fired.dim)?;
    fired.depth.push(Firing::new("depth <= dim", Claim::AtMost(dim.hi()), ""));
    let depth = InvariantValue::from_firings("depth", fired.depth)?;
    let reg = InvariantValue::from_firings("reg", fired.reg)?;
    let mut cm = match (depth.exact(), dim.exact()) {
        (Some(a), Some(b)) => Some(a == b),
        _ if depth.hi() < dim.lo() => Some(false),
        _ => None,
    };
    if let Some((flag, rule)) = fired.cm {
        if cm.is_some_and(|c| c != flag) {
            return Err(Error::Contradiction {
                invariant: "cm",
                detail: format!("{rule} says {flag}, depth {} vs dim {}", depth.bound, dim.bound),
            });
        }
        cm = Some(flag);
    }
    let unmixed = family.as_ref().map(|f| {
        let first = f.sets[0].prime_dim(f.num_vertices, m);
        f.sets.iter().all(|c| c.prime_dim(f.num_vertices, m) == first)
    });
    if let (Some(true), Some(false)) = (cm, unmixed) {
        return Err(Error::Contradiction { invariant: "cm", detail: "Cohen-Macaulay but not unmixed".into() });
    }
    Ok(InvariantReport {
        m,
        expr: expr.clone(),
        num_vertices: nv as usize,
        dim,
        depth,
        reg,
        cm,
        unmixed,
        combinatorial_dim: combinatorial,
    })
}

pub fn fan_invariants(spec: &FanSpec, m: u32) -> Result<InvariantReport> {
    check_m(m)?;
    let g = fan_graph(spec)?;
    let mut fired = Fired::default();
    fan_rules(spec, m, &mut fired);
    combine(fired, &GraphExpr::atom(Atom::Fan(spec.clone())), &g, m, Scope::Catalog)
}

pub fn fp_invariants(p: u32, m: u32) -> Result<InvariantReport> {
    check_m(m)?;
    if p == 0 {
        return Err(Error::NonpositiveSize("Fp(p) needs p >= 1"));
    }
    let mut fired = Fired::default();
    fp_rules(p, m, &mut fired);
    combine(fired, &GraphExpr::atom(Atom::Fp(p)), &fp_graph(p), m, Scope::Catalog)
}

pub fn path_invariants(t: u32, m: u32) -> Result<InvariantReport> {
    check_m(m)?;
    if t < 2 {
        return Err(Error::NonpositiveSize("path invariants need t >= 2"));
    }
    let mut fired = Fired::default();
    path_rules(t, m, &mut fired);
    combine(fired, &GraphExpr::atom(Atom::Path(t)), &Graph::path(t), m, Scope::Full)
}

/// Fires every applicable rule, including the cut point enumeration when `|V|` is within the cap.
pub fn predict(expr: &GraphExpr, m: u32) -> Result<InvariantReport> {
    check_m(m)?;
    let real = expr.realize()?;
    let g = real.graph();
    let nv = g.num_vertices() as u32;
    let mut fired = Fired::default();
    if let Some(a) = expr.as_atom() {
        atom_rules(a, m, &mut fired)?;
    }
    if let Ok(v) = ffan_depth_value(expr, nv, m) {
        fired.depth.push(Firing::new("full_depth_star_circ", Claim::Exact(v), format!("|V| = {nv}")));
    }
    let ch = chain(expr)?;
    if let Ok(f) = chain_dim_firing(&ch, m) {
        fired.dim.push(f);
    }
    for rule in [circ_firings, star_firings, composite_firings] {
        if let Ok(fs) = rule(&ch, m) {
            fired.reg.extend(fs);
        }
    }
    combine(fired, expr, g, m, Scope::Full)
}
