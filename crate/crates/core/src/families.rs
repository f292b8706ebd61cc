//! Constructors for `K_n`, `P_t`, `F_p`, fan graphs, and the marked-leaf `∘` / `*` algebra.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Label};

/// A fan graph `F_k^W(K_n)`: branches are listed per part `W_i` in attachment order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FanSpec {
    pub n: u32,
    pub partition: Vec<Vec<Label>>,
    pub branch_sizes: Vec<Vec<u32>>,
    /// Overrides the default marked leaves.
    pub marks: Option<Vec<Label>>,
}

impl FanSpec {
    pub fn new(n: u32, partition: Vec<Vec<Label>>, branch_sizes: Vec<Vec<u32>>) -> Result<Self> {
        let spec = FanSpec { n, partition, branch_sizes, marks: None };
        spec.validate()?;
        Ok(spec)
    }

    /// Pure fan with the given parts.
    pub fn pure(n: u32, partition: Vec<Vec<Label>>) -> Result<Self> {
        let a = partition
            .iter()
            .map(|w| (1..=w.len() as u32).map(|j| j + 1).collect())
            .collect();
        FanSpec::new(n, partition, a)
    }

    pub fn with_marks(mut self, marks: Vec<Label>) -> Self {
        self.marks = Some(marks);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("base clique K_{} needs n >= 2", self.n)));
        }
        if self.partition.len() != self.branch_sizes.len() {
            return Err(Error::InvalidPartition(format!(
                "{} parts but {} branch lists",
                self.partition.len(),
                self.branch_sizes.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for (i, (w, a)) in self.partition.iter().zip(&self.branch_sizes).enumerate() {
            if w.is_empty() {
                return Err(Error::InvalidPartition(format!("part {} is empty", i + 1)));
            }
            if w.len() != a.len() {
                return Err(Error::InvalidPartition(format!(
                    "part {} has {} vertices but {} branch sizes",
                    i + 1,
                    w.len(),
                    a.len()
                )));
            }
            for &v in w {
                if v < 1 || v > self.n {
                    return Err(Error::InvalidPartition(format!("{v} is not in [{}]", self.n)));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidPartition(format!("{v} appears twice")));
                }
            }
            for (j, &aij) in a.iter().enumerate() {
                if aij as usize <= j + 1 {
                    return Err(Error::BranchSizeViolation { i: i + 1, j: j + 1, a: aij as usize });
                }
            }
        }
        if let Some(marks) = &self.marks {
            if marks.len() > 2 {
                return Err(Error::InvalidSpec(format!("{} marks given, at most 2 allowed", marks.len())));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.partition.len()
    }

    pub fn w_size(&self) -> usize {
        self.partition.iter().map(|w| w.len()).sum()
    }

    pub fn r(&self, i: usize) -> usize {
        self.partition[i].len()
    }

    /// `h_{i,j} = a_{i,j} - j`, zero-based indices.
    pub fn h(&self, i: usize, j: usize) -> u32 {
        self.branch_sizes[i][j] - (j as u32 + 1)
    }

    pub fn hs(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.k()).flat_map(move |i| (0..self.r(i)).map(move |j| self.h(i, j)))
    }

    pub fn is_pure(&self) -> bool {
        self.hs().all(|h| h == 1)
    }

    pub fn is_branch_pure(&self, i: usize) -> bool {
        (0..self.r(i)).all(|j| self.h(i, j) == 1)
    }

    pub fn delta(&self) -> usize {
        self.hs().filter(|&h| h >= 2).count()
    }

    pub fn num_vertices(&self) -> usize {
        self.n as usize + self.hs().map(|h| h as usize).sum::<usize>()
    }

    /// Number of maximal cliques.
    pub fn cl(&self) -> usize {
        if self.k() == 1 && self.w_size() == self.n as usize {
            self.w_size()
        } else {
            self.w_size() + 1
        }
    }

    /// Labels of the new vertices of branch `(i, j)`.
    pub fn branch_vertices(&self, i: usize, j: usize) -> Vec<Label> {
        let mut next = self.n + 1;
        for (ii, a) in self.branch_sizes.iter().enumerate() {
            for jj in 0..a.len() {
                let h = self.h(ii, jj);
                if (ii, jj) == (i, j) {
                    return (next..next + h).collect();
                }
                next += h;
            }
        }
        Vec::new()
    }

    /// The leaf hanging off `w_{i,1}` when the first clique of the branch is an edge.
    pub fn branch_leaf(&self, i: usize) -> Option<Label> {
        if self.h(i, 0) == 1 {
            self.branch_vertices(i, 0).first().copied()
        } else {
            None
        }
    }

    /// Index of the part whose first branch clique carries `leaf`.
    pub fn part_of_leaf(&self, leaf: Label) -> Option<usize> {
        (0..self.k()).find(|&i| self.branch_leaf(i) == Some(leaf))
    }

    pub fn default_marks(&self) -> Vec<Label> {
        match self.k() {
            0 => Vec::new(),
            1 => self.branch_leaf(0).into_iter().collect(),
            k => {
                let mut v: Vec<Label> = [0, k - 1].iter().filter_map(|&i| self.branch_leaf(i)).collect();
                v.dedup();
                v
            }
        }
    }
}

/// A graph together with its available marked leaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedGraph {
    pub graph: Graph,
    pub marks: Vec<Label>,
    pub consumed: Vec<Label>,
    /// Identified vertices, one per composition.
    pub joints: Vec<Label>,
}

impl MarkedGraph {
    pub fn new(graph: Graph, marks: Vec<Label>) -> Result<Self> {
        let leaves = graph.leaves();
        let bad: Vec<Label> = marks.iter().copied().filter(|v| !leaves.contains(v)).collect();
        if !bad.is_empty() {
            return Err(Error::MarksNotLeaves(bad));
        }
        Ok(MarkedGraph { graph, marks, consumed: Vec::new(), joints: Vec::new() })
    }

    fn shifted(&self, by: Label) -> MarkedGraph {
        MarkedGraph {
            graph: self.graph.relabel(|v| v + by),
            marks: self.marks.iter().map(|v| v + by).collect(),
            consumed: self.consumed.iter().map(|v| v + by).collect(),
            joints: self.joints.iter().map(|v| v + by).collect(),
        }
    }

    fn check_mark(&self, f: Label) -> Result<()> {
        if self.marks.contains(&f) {
            Ok(())
        } else if self.consumed.contains(&f) {
            Err(Error::MarkConsumed(f))
        } else {
            Err(Error::MarkNotLeaf(f))
        }
    }

    fn is_p2(&self) -> bool {
        self.graph.num_vertices() == 2 && self.graph.num_edges() == 1
    }
}

pub fn realize_complete(n: u32) -> Result<MarkedGraph> {
    if n == 0 {
        return Err(Error::NonpositiveSize("K(n) needs n >= 1"));
    }
    MarkedGraph::new(Graph::complete(n), Vec::new())
}

pub fn realize_path(t: u32) -> Result<MarkedGraph> {
    if t == 0 {
        return Err(Error::NonpositiveSize("path(t) needs t >= 1"));
    }
    let marks = if t >= 2 { vec![1, t] } else { Vec::new() };
    MarkedGraph::new(Graph::path(t), marks)
}

pub fn fp_graph(p: u32) -> Graph {
    let edges = (1..=p).flat_map(|i| (i..=p).map(move |j| (2 * i, 2 * j - 1)));
    Graph::new(1..=2 * p, edges).unwrap()
}

pub fn realize_fp(p: u32) -> Result<MarkedGraph> {
    if p == 0 {
        return Err(Error::NonpositiveSize("Fp(p) needs p >= 1"));
    }
    MarkedGraph::new(fp_graph(p), vec![1, 2 * p])
}

pub fn fan_graph(spec: &FanSpec) -> Result<Graph> {
    spec.validate()?;
    let total = spec.num_vertices() as u32;
    let mut edges: Vec<(Label, Label)> = Vec::new();
    for a in 1..=spec.n {
        for b in a + 1..=spec.n {
            edges.push((a, b));
        }
    }
    for (i, w) in spec.partition.iter().enumerate() {
        for j in 0..w.len() {
            let mut clique: Vec<Label> = w[..=j].to_vec();
            clique.extend(spec.branch_vertices(i, j));
            for (x, &a) in clique.iter().enumerate() {
                for &b in &clique[x + 1..] {
                    edges.push((a, b));
                }
            }
        }
    }
    Graph::new(1..=total, edges)
}

pub fn realize_fan(spec: &FanSpec) -> Result<MarkedGraph> {
    let g = fan_graph(spec)?;
    let marks = spec.marks.clone().unwrap_or_else(|| spec.default_marks());
    MarkedGraph::new(g, marks)
}

fn align(a: &MarkedGraph, b: &MarkedGraph) -> (MarkedGraph, Label) {
    let overlap = b.graph.vertices().any(|v| a.graph.has_vertex(v));
    if overlap {
        let by = a.graph.max_label().unwrap_or(0);
        (b.shifted(by), by)
    } else {
        (b.clone(), 0)
    }
}

fn merge_marks(a: &MarkedGraph, fa: Label, b: &MarkedGraph, fb: Label) -> (Vec<Label>, Vec<Label>) {
    let marks = a
        .marks
        .iter()
        .chain(&b.marks)
        .copied()
        .filter(|&v| v != fa && v != fb)
        .collect();
    let mut consumed: Vec<Label> = a.consumed.iter().chain(&b.consumed).copied().collect();
    consumed.extend([fa, fb]);
    (marks, consumed)
}

/// `(a, fa) ∘ (b, fb)`; `b` is shifted past `a` when their labels overlap (`fb` is given before the shift).
pub fn compose_circ(a: &MarkedGraph, fa: Label, b: &MarkedGraph, fb: Label) -> Result<MarkedGraph> {
    a.check_mark(fa)?;
    b.check_mark(fb)?;
    if a.is_p2() || b.is_p2() {
        return Err(Error::OperandIsP2);
    }
    let (b, by) = align(a, b);
    let fb = fb + by;
    let va = *a.graph.neighbors(fa, false)?.iter().next().unwrap();
    let vb = *b.graph.neighbors(fb, false)?.iter().next().unwrap();
    let g = a
        .graph
        .delete_vertex(fa)?
        .disjoint_union(&b.graph.delete_vertex(fb)?)?
        .identify(va, vb)?;
    let (marks, consumed) = merge_marks(a, fa, &b, fb);
    let mut joints: Vec<Label> = a.joints.iter().chain(&b.joints).copied().collect();
    joints.push(va);
    Ok(MarkedGraph { graph: g, marks, consumed, joints })
}

/// `(a, fa) * (b, fb)`; the identified leaf keeps the label `fa`.
pub fn compose_star(a: &MarkedGraph, fa: Label, b: &MarkedGraph, fb: Label) -> Result<MarkedGraph> {
    a.check_mark(fa)?;
    b.check_mark(fb)?;
    let (b, by) = align(a, b);
    let fb = fb + by;
    let g = a.graph.disjoint_union(&b.graph)?.identify(fa, fb)?;
    let (marks, consumed) = merge_marks(a, fa, &b, fb);
    let mut joints: Vec<Label> = a.joints.iter().chain(&b.joints).copied().collect();
    joints.push(fa);
    Ok(MarkedGraph { graph: g, marks, consumed, joints })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Atom {
    Complete(u32),
    Path(u32),
    Fp(u32),
    Fan(FanSpec),
}

impl Atom {
    pub fn realize(&self) -> Result<MarkedGraph> {
        match self {
            Atom::Complete(n) => realize_complete(*n),
            Atom::Path(t) => realize_path(*t),
            Atom::Fp(p) => realize_fp(*p),
            Atom::Fan(spec) => realize_fan(spec),
        }
    }

    pub fn num_vertices(&self) -> usize {
        match self {
            Atom::Complete(n) | Atom::Path(n) => *n as usize,
            Atom::Fp(p) => 2 * *p as usize,
            Atom::Fan(s) => s.num_vertices(),
        }
    }

    /// `F_p` or a marked fan with at least one branch.
    pub fn is_ffan_atom(&self) -> bool {
        match self {
            Atom::Fp(_) => true,
            Atom::Fan(s) => s.k() >= 1,
            _ => false,
        }
    }

    /// Pseudo fans: pure fans with `k >= 1`, and `F_p` counted with `k = 2`.
    pub fn pseudo_fan_k(&self) -> Option<usize> {
        match self {
            Atom::Fp(_) => Some(2),
            Atom::Fan(s) if s.k() >= 1 && s.is_pure() => Some(s.k()),
            _ => None,
        }
    }

    /// Summand of the composite regularity bound, when defined.
    pub fn ell(&self, m: u32) -> Option<u32> {
        match self {
            Atom::Path(t) if *t >= 2 => Some(t - 1),
            _ => self.pseudo_fan_k().map(|k| m + k as u32 - 1),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Vec<u32>]| {
            let parts: Vec<String> = v
                .iter()
                .map(|p| {
                    let items: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    format!("[{}]", items.join(","))
                })
                .collect();
            format!("[{}]", parts.join(","))
        };
        match self {
            Atom::Complete(n) => write!(f, "K({n})"),
            Atom::Path(t) => write!(f, "path({t})"),
            Atom::Fp(p) => write!(f, "Fp({p})"),
            Atom::Fan(s) => {
                write!(f, "fan({}; W={}; a={}", s.n, list(&s.partition), list(&s.branch_sizes))?;
                if let Some(m) = &s.marks {
                    let items: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                    write!(f, "; marks=[{}]", items.join(","))?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A leaf named by the index of its atom inside the operand and the atom-local label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkRef {
    pub atom: usize,
    pub label: Label,
}

impl MarkRef {
    pub fn local(label: Label) -> Self {
        MarkRef { atom: 0, label }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    Circ,
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphExpr {
    Atom(Atom),
    Node { op: Op, left: Box<GraphExpr>, lmark: MarkRef, right: Box<GraphExpr>, rmark: MarkRef },
}

impl GraphExpr {
    pub fn atom(a: Atom) -> Self {
        GraphExpr::Atom(a)
    }

    pub fn circ(left: GraphExpr, lmark: MarkRef, right: GraphExpr, rmark: MarkRef) -> Self {
        GraphExpr::Node { op: Op::Circ, left: Box::new(left), lmark, right: Box::new(right), rmark }
    }

    pub fn star(left: GraphExpr, lmark: MarkRef, right: GraphExpr, rmark: MarkRef) -> Self {
        GraphExpr::Node { op: Op::Star, left: Box::new(left), lmark, right: Box::new(right), rmark }
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        match self {
            GraphExpr::Atom(a) => vec![a],
            GraphExpr::Node { left, right, .. } => {
                let mut v = left.atoms();
                v.extend(right.atoms());
                v
            }
        }
    }

    pub fn num_atoms(&self) -> usize {
        match self {
            GraphExpr::Atom(_) => 1,
            GraphExpr::Node { left, right, .. } => left.num_atoms() + right.num_atoms(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GraphExpr::Atom(_) => 0,
            GraphExpr::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Upper bound for the number of FFan components: the count of `F_p` and fan atoms.
    pub fn ffc_upper(&self) -> usize {
        self.atoms().iter().filter(|a| a.is_ffan_atom()).count()
    }

    /// Every atom is `F_p` or a marked fan.
    pub fn is_ffan(&self) -> bool {
        self.atoms().iter().all(|a| a.is_ffan_atom())
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            GraphExpr::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn realize(&self) -> Result<Realization> {
        let mut offset = 0;
        let mut atoms = Vec::new();
        let (marked, steps) = self.realize_from(&mut offset, &mut atoms)?;
        Ok(Realization { marked, atoms, steps })
    }

    fn realize_from(
        &self,
        offset: &mut Label,
        atoms: &mut Vec<AtomPlacement>,
    ) -> Result<(MarkedGraph, Vec<Step>)> {
        match self {
            GraphExpr::Atom(a) => {
                let mg = a.realize()?;
                let shift = *offset;
                let width = mg.graph.max_label().unwrap_or(0);
                *offset += width;
                atoms.push(AtomPlacement { atom: a.clone(), offset: shift, width });
                Ok((mg.shifted(shift), Vec::new()))
            }
            GraphExpr::Node { op, left, lmark, right, rmark } => {
                let first_left = atoms.len();
                let (lg, mut steps) = left.realize_from(offset, atoms)?;
                let first_right = atoms.len();
                let (rg, rsteps) = right.realize_from(offset, atoms)?;
                let global = |mr: &MarkRef, first: usize, count: usize| -> Result<Label> {
                    if mr.atom >= count {
                        return Err(Error::MarkNotLeaf(mr.label));
                    }
                    let p = &atoms[first + mr.atom];
                    if mr.label == 0 || mr.label > p.width {
                        return Err(Error::MarkNotLeaf(mr.label));
                    }
                    Ok(p.offset + mr.label)
                };
                let fa = global(lmark, first_left, first_right - first_left)?;
                let fb = global(rmark, first_right, atoms.len() - first_right)?;
                let (neighbor_a, neighbor_b) = (
                    lg.graph.neighbors(fa, false).ok().and_then(|s| s.into_iter().next()),
                    rg.graph.neighbors(fb, false).ok().and_then(|s| s.into_iter().next()),
                );
                let composed = match op {
                    Op::Circ => compose_circ(&lg, fa, &rg, fb)?,
                    Op::Star => compose_star(&lg, fa, &rg, fb)?,
                };
                steps.extend(rsteps);
                steps.push(Step {
                    op: *op,
                    left_atoms: first_left..first_right,
                    right_atoms: first_right..atoms.len(),
                    left_leaf: fa,
                    right_leaf: fb,
                    left_neighbor: neighbor_a.unwrap(),
                    right_neighbor: neighbor_b.unwrap(),
                    joint: *composed.joints.last().unwrap(),
                });
                Ok((composed, steps))
            }
        }
    }
}

impl fmt::Display for GraphExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphExpr::Atom(a) => write!(f, "{a}"),
            GraphExpr::Node { op, left, lmark, right, rmark } => {
                let name = match op {
                    Op::Circ => "circ",
                    Op::Star => "star",
                };
                let mark = |e: &GraphExpr, m: &MarkRef| match e {
                    GraphExpr::Atom(_) => format!("@{}", m.label),
                    _ => format!("@{}.{}", m.atom + 1, m.label),
                };
                write!(f, "{name}({left}{}, {right}{})", mark(left, lmark), mark(right, rmark))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomPlacement {
    pub atom: Atom,
    /// Global label = offset + atom-local label.
    pub offset: Label,
    pub width: Label,
}

impl AtomPlacement {
    pub fn global(&self, local: Label) -> Label {
        self.offset + local
    }
}

/// One gluing step, in post-order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub op: Op,
    pub left_atoms: std::ops::Range<usize>,
    pub right_atoms: std::ops::Range<usize>,
    pub left_leaf: Label,
    pub right_leaf: Label,
    pub left_neighbor: Label,
    pub right_neighbor: Label,
    pub joint: Label,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub marked: MarkedGraph,
    pub atoms: Vec<AtomPlacement>,
    pub steps: Vec<Step>,
}

impl Realization {
    pub fn graph(&self) -> &Graph {
        &self.marked.graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whisker_spec() -> FanSpec {
        FanSpec::new(3, vec![vec![1]], vec![vec![2]]).unwrap()
    }

    fn atom(a: Atom) -> GraphExpr {
        GraphExpr::atom(a)
    }

    #[test]
    fn paths_and_cliques() {
        let p2 = realize_path(2).unwrap();
        assert_eq!(p2.graph.edges(), vec![(1, 2)]);
        assert_eq!(p2.marks, vec![1, 2]);
        assert_eq!(realize_complete(3).unwrap().graph, Graph::complete(3));
        assert!(realize_complete(0).is_err());
        assert_eq!(realize_path(4).unwrap().graph, realize_fp(2).unwrap().graph);
    }

    #[test]
    fn fp_edges() {
        assert_eq!(realize_fp(1).unwrap().graph.edges(), vec![(1, 2)]);
        assert_eq!(realize_fp(1).unwrap().marks, vec![1, 2]);
        assert_eq!(realize_fp(2).unwrap().graph.edges(), vec![(1, 2), (2, 3), (3, 4)]);
        let f3 = realize_fp(3).unwrap();
        assert_eq!(
            f3.graph.edges(),
            vec![(1, 2), (2, 3), (2, 5), (3, 4), (4, 5), (5, 6)]
        );
        assert_eq!(f3.graph.leaves(), BTreeSet::from([1, 6]));
        assert!(realize_fp(0).is_err());
    }

    #[test]
    fn fans() {
        let w = realize_fan(&whisker_spec()).unwrap();
        assert_eq!(w.graph.to_string(), "V:1,2,3,4;E:(1,2),(1,3),(1,4),(2,3)");
        assert_eq!(w.marks, vec![4]);
        let s = FanSpec::new(3, vec![vec![1, 2]], vec![vec![2, 3]]).unwrap();
        assert_eq!(s.num_vertices(), 5);
        assert!(s.is_pure());
        let g = realize_fan(&s).unwrap().graph;
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.neighbors(5, false).unwrap(), BTreeSet::from([1, 2]));
        let s = FanSpec::new(2, vec![vec![1]], vec![vec![3]]).unwrap();
        assert_eq!(s.h(0, 0), 2);
        assert_eq!(s.delta(), 1);
        assert!(!s.is_pure());
    }

    #[test]
    fn fan_errors() {
        assert!(matches!(
            FanSpec::new(3, vec![vec![1, 2]], vec![vec![2, 2]]),
            Err(Error::BranchSizeViolation { i: 1, j: 2, a: 2 })
        ));
        assert!(matches!(
            FanSpec::new(3, vec![vec![1], vec![1]], vec![vec![2], vec![2]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            FanSpec::new(3, vec![vec![4]], vec![vec![2]]),
            Err(Error::InvalidPartition(_))
        ));
        let s = whisker_spec().with_marks(vec![2]);
        assert!(matches!(realize_fan(&s), Err(Error::MarksNotLeaves(_))));
    }

    #[test]
    fn default_marks_two_parts() {
        let s = FanSpec::pure(4, vec![vec![1, 2], vec![3]]).unwrap();
        let mg = realize_fan(&s).unwrap();
        assert_eq!(mg.marks, vec![5, 7]);
        assert_eq!(s.cl(), 4);
        let full = FanSpec::pure(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(full.cl(), 2);
    }

    #[test]
    fn circ_counts() {
        let p4 = realize_path(4).unwrap();
        let g = compose_circ(&p4, 4, &p4, 1).unwrap();
        assert_eq!(g.graph.num_vertices(), 5);
        assert_eq!(g.graph.relabel_dense().0, Graph::path(5));
        let f3 = realize_fp(3).unwrap();
        assert_eq!(compose_circ(&f3, 6, &f3, 1).unwrap().graph.num_vertices(), 9);
        let w = realize_fan(&whisker_spec()).unwrap();
        let p3 = realize_path(3).unwrap();
        let g = compose_circ(&w, 4, &p3, 1).unwrap();
        assert_eq!(g.graph.num_vertices(), 4);
        let p2 = realize_path(2).unwrap();
        assert_eq!(compose_circ(&p4, 4, &p2, 1), Err(Error::OperandIsP2));
        assert_eq!(compose_circ(&p4, 2, &p4, 1), Err(Error::MarkNotLeaf(2)));
    }

    #[test]
    fn star_counts() {
        let p2 = realize_path(2).unwrap();
        let g = compose_star(&p2, 2, &p2, 1).unwrap();
        assert_eq!(g.graph.relabel_dense().0, Graph::path(3));
        let g = compose_star(&g, 5, &p2, 1);
        assert!(g.is_err());
        let g = compose_star(&compose_star(&p2, 2, &p2, 1).unwrap(), 4, &p2, 1).unwrap();
        assert_eq!(g.graph.relabel_dense().0, Graph::path(4));
        let f3 = realize_fp(3).unwrap();
        assert_eq!(compose_star(&f3, 6, &f3, 1).unwrap().graph.num_vertices(), 11);
        let once = compose_star(&p2, 2, &p2, 1).unwrap();
        assert_eq!(compose_star(&once, 2, &p2, 1), Err(Error::MarkConsumed(2)));
    }

    #[test]
    fn expressions() {
        let e = GraphExpr::circ(
            atom(Atom::Fp(2)),
            MarkRef::local(4),
            atom(Atom::Fp(2)),
            MarkRef::local(1),
        );
        let r = e.realize().unwrap();
        assert_eq!(r.graph().relabel_dense().0, Graph::path(5));
        assert_eq!(e.to_string(), "circ(Fp(2)@4, Fp(2)@1)");
        let e = GraphExpr::star(
            atom(Atom::Fan(whisker_spec())),
            MarkRef::local(4),
            atom(Atom::Path(3)),
            MarkRef::local(1),
        );
        assert_eq!(e.realize().unwrap().graph().num_vertices(), 6);
        let r = atom(Atom::Fp(3)).realize().unwrap();
        assert_eq!(r.graph(), &fp_graph(3));
        assert_eq!(r.atoms[0].offset, 0);
    }

    #[test]
    fn nested_marks() {
        let inner = GraphExpr::circ(
            atom(Atom::Fp(3)),
            MarkRef::local(6),
            atom(Atom::Fp(3)),
            MarkRef::local(1),
        );
        let e = GraphExpr::circ(
            inner,
            MarkRef { atom: 1, label: 6 },
            atom(Atom::Fp(2)),
            MarkRef::local(1),
        );
        let r = e.realize().unwrap();
        assert_eq!(r.graph().num_vertices(), 9 + 4 - 3);
        assert_eq!(r.steps.len(), 2);
        assert_eq!(e.to_string(), "circ(circ(Fp(3)@6, Fp(3)@1)@2.6, Fp(2)@1)");
        assert_eq!(e.ffc_upper(), 3);
        let bad = GraphExpr::circ(
            e.clone(),
            MarkRef { atom: 0, label: 6 },
            atom(Atom::Fp(2)),
            MarkRef::local(1),
        );
        assert!(matches!(bad.realize(), Err(Error::MarkConsumed(_))));
    }
}
