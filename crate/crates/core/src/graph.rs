//! Immutable simple graphs on integer labels and the surgeries used by the recursions:
//! induced subgraphs, neighbourhood saturation, components, leaves and cut vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Label = u32;
pub type VertexSet = BTreeSet<Label>;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    adj: BTreeMap<Label, BTreeSet<Label>>,
}

impl Graph {
    pub fn empty() -> Self {
        Graph { adj: BTreeMap::new() }
    }

    /// Builds a graph; loops are rejected and duplicate edges collapse.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let mut adj: BTreeMap<Label, BTreeSet<Label>> =
            vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Parse(format!("loop at vertex {a}")));
            }
            if !adj.contains_key(&a) {
                return Err(Error::UnknownVertex(a));
            }
            if !adj.contains_key(&b) {
                return Err(Error::UnknownVertex(b));
            }
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        Ok(Graph { adj })
    }

    /// Vertex set is the set of edge endpoints.
    pub fn from_edges(edges: &[(Label, Label)]) -> Result<Self> {
        let vs: VertexSet = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        Graph::new(vs, edges.iter().copied())
    }

    pub fn complete(n: u32) -> Self {
        let edges = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b)));
        Graph::new(1..=n, edges).unwrap()
    }

    pub fn path(t: u32) -> Self {
        Graph::new(1..=t, (1..t).map(|a| (a, a + 1))).unwrap()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Label> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::new();
        for (&a, nb) in &self.adj {
            for &b in nb.range(a + 1..) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn has_vertex(&self, v: Label) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn degree(&self, v: Label) -> Result<usize> {
        self.adj.get(&v).map(|s| s.len()).ok_or(Error::UnknownVertex(v))
    }

    pub fn max_label(&self) -> Option<Label> {
        self.adj.keys().next_back().copied()
    }

    fn check(&self, v: Label) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn neighbors(&self, v: Label, closed: bool) -> Result<VertexSet> {
        let mut out = self.adj.get(&v).ok_or(Error::UnknownVertex(v))?.clone();
        if closed {
            out.insert(v);
        }
        Ok(out)
    }

    /// Induced subgraph on `V \ a`; labels are kept.
    pub fn delete_vertices(&self, a: &VertexSet) -> Result<Graph> {
        for &v in a {
            self.check(v)?;
        }
        Ok(self.delete_unchecked(a))
    }

    fn delete_unchecked(&self, a: &VertexSet) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| !a.contains(v))
            .map(|(&v, nb)| (v, nb.difference(a).copied().collect()))
            .collect();
        Graph { adj }
    }

    pub fn delete_vertex(&self, v: Label) -> Result<Graph> {
        self.delete_vertices(&BTreeSet::from([v]))
    }

    /// Induced subgraph on `keep`.
    pub fn induced(&self, keep: &VertexSet) -> Result<Graph> {
        for &v in keep {
            self.check(v)?;
        }
        let drop: VertexSet = self.vertices().filter(|v| !keep.contains(v)).collect();
        Ok(self.delete_unchecked(&drop))
    }

    /// `G_v`: the neighbourhood of `v` becomes a clique.
    pub fn saturate_neighborhood(&self, v: Label) -> Result<Graph> {
        let nb: Vec<Label> = self.neighbors(v, false)?.into_iter().collect();
        let mut g = self.clone();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                g.adj.get_mut(&a).unwrap().insert(b);
                g.adj.get_mut(&b).unwrap().insert(a);
            }
        }
        Ok(g)
    }

    /// Components ordered by their minimal label.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &s in self.adj.keys() {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = BTreeSet::from([s]);
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[&u] {
                    if seen.insert(w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn num_components(&self) -> usize {
        self.connected_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    pub fn leaves(&self) -> VertexSet {
        self.adj
            .iter()
            .filter(|(_, nb)| nb.len() == 1)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_leaf(&self, v: Label) -> Result<bool> {
        Ok(self.degree(v)? == 1)
    }

    pub fn is_internal(&self, v: Label) -> Result<bool> {
        Ok(self.degree(v)? >= 2)
    }

    pub fn is_cut_vertex(&self, v: Label) -> Result<bool> {
        self.check(v)?;
        let without = self.delete_unchecked(&BTreeSet::from([v]));
        Ok(without.num_components() > self.num_components())
    }

    /// Two-colouring with the minimal label of every component on the first side.
    pub fn is_bipartite(&self) -> Option<(VertexSet, VertexSet)> {
        let mut side: BTreeMap<Label, bool> = BTreeMap::new();
        for comp in self.connected_components() {
            let root = *comp.iter().next().unwrap();
            side.insert(root, false);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                let su = side[&u];
                for &w in &self.adj[&u] {
                    match side.get(&w) {
                        Some(&sw) if sw == su => return None,
                        Some(_) => {}
                        None => {
                            side.insert(w, !su);
                            stack.push(w);
                        }
                    }
                }
            }
        }
        let (a, b): (Vec<_>, Vec<_>) = side.into_iter().partition(|&(_, s)| !s);
        Some((
            a.into_iter().map(|(v, _)| v).collect(),
            b.into_iter().map(|(v, _)| v).collect(),
        ))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.num_vertices();
        self.adj.values().all(|nb| nb.len() + 1 == n)
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let v: Vec<Label> = s.iter().copied().collect();
        v.iter()
            .enumerate()
            .all(|(i, &a)| v[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// Size of a largest clique (Bron-Kerbosch with pivoting).
    pub fn clique_number(&self) -> usize {
        fn bk(g: &Graph, r: usize, mut p: VertexSet, mut x: VertexSet, best: &mut usize) {
            if p.is_empty() {
                if x.is_empty() {
                    *best = (*best).max(r);
                }
                return;
            }
            if r + p.len() <= *best {
                return;
            }
            let pivot = *p.union(&x).max_by_key(|u| g.adj[u].len()).unwrap();
            let cand: Vec<Label> = p.difference(&g.adj[&pivot]).copied().collect();
            for v in cand {
                let nb = &g.adj[&v];
                bk(
                    g,
                    r + 1,
                    p.intersection(nb).copied().collect(),
                    x.intersection(nb).copied().collect(),
                    best,
                );
                p.remove(&v);
                x.insert(v);
            }
        }
        let mut best = 0;
        bk(self, 0, self.vertex_set(), BTreeSet::new(), &mut best);
        best
    }

    /// Edge union with the given pairs; new endpoints must already be vertices.
    pub fn with_edges(&self, edges: &[(Label, Label)]) -> Result<Graph> {
        let mut g = self.clone();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Parse(format!("loop at vertex {a}")));
            }
            g.check(a)?;
            g.check(b)?;
            g.adj.get_mut(&a).unwrap().insert(b);
            g.adj.get_mut(&b).unwrap().insert(a);
        }
        Ok(g)
    }

    /// Completes every component into a clique.
    pub fn complete_components(&self) -> Graph {
        let mut g = self.clone();
        for comp in self.connected_components() {
            for &a in &comp {
                let others = comp.iter().copied().filter(|&b| b != a);
                g.adj.get_mut(&a).unwrap().extend(others);
            }
        }
        g
    }

    /// Applies an injective relabelling.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Graph {
        let adj = self
            .adj
            .iter()
            .map(|(&v, nb)| (f(v), nb.iter().map(|&w| f(w)).collect()))
            .collect();
        Graph { adj }
    }

    /// Packs labels into `1..=n` in increasing order; returns the old labels by new index.
    pub fn relabel_dense(&self) -> (Graph, Vec<Label>) {
        let old: Vec<Label> = self.vertices().collect();
        let pos: BTreeMap<Label, Label> = old
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as Label + 1))
            .collect();
        (self.relabel(|v| pos[&v]), old)
    }

    /// Disjoint union; the label sets must not overlap.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = self.clone();
        for (&v, nb) in &other.adj {
            if g.adj.insert(v, nb.clone()).is_some() {
                return Err(Error::InvalidPartition(format!("label {v} used twice")));
            }
        }
        Ok(g)
    }

    /// Merges vertex `b` into vertex `a`.
    pub fn identify(&self, a: Label, b: Label) -> Result<Graph> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Ok(self.clone());
        }
        let nb_b = self.adj[&b].clone();
        let mut g = self.delete_unchecked(&BTreeSet::from([b]));
        for w in nb_b {
            if w != a {
                g.adj.get_mut(&a).unwrap().insert(w);
                g.adj.get_mut(&w).unwrap().insert(a);
            }
        }
        Ok(g)
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V:")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ";E:")?;
        for (i, (a, b)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Graph {
    type Err = Error;

    /// Parses the canonical form `V:1,2,3;E:(1,2),(2,3)`.
    fn from_str(s: &str) -> Result<Graph> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in graph text {s:?}"));
        let rest = s.strip_prefix("V:").ok_or_else(|| bad("missing V:"))?;
        let (vs, es) = rest.split_once(";E:").ok_or_else(|| bad("missing ;E:"))?;
        let num = |t: &str| t.trim().parse::<Label>().map_err(|_| bad("bad label"));
        let vertices = if vs.is_empty() {
            Vec::new()
        } else {
            vs.split(',').map(num).collect::<Result<Vec<_>>>()?
        };
        let mut edges = Vec::new();
        let mut rest = es;
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected ("))?;
            let (pair, tail) = body.split_once(')').ok_or_else(|| bad("expected )"))?;
            let (a, b) = pair.split_once(',').ok_or_else(|| bad("expected a,b"))?;
            edges.push((num(a)?, num(b)?));
            rest = tail.strip_prefix(',').unwrap_or(tail);
            if tail.starts_with(',') && rest.is_empty() {
                return Err(bad("trailing comma"));
            }
        }
        Graph::new(vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[Label]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn f3() -> Graph {
        Graph::from_edges(&[(2, 1), (2, 3), (2, 5), (4, 3), (4, 5), (6, 5)]).unwrap()
    }

    fn whisker() -> Graph {
        Graph::from_edges(&[(1, 2), (1, 3), (2, 3), (1, 4)]).unwrap()
    }

    #[test]
    fn neighbourhoods() {
        let p = Graph::path(3);
        assert_eq!(p.neighbors(2, false).unwrap(), set(&[1, 3]));
        assert_eq!(p.neighbors(1, true).unwrap(), set(&[1, 2]));
        assert_eq!(f3().neighbors(2, false).unwrap(), set(&[1, 3, 5]));
        assert_eq!(p.neighbors(9, false), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn deletion() {
        let p = Graph::path(3).delete_vertices(&set(&[2])).unwrap();
        assert_eq!(p.vertex_set(), set(&[1, 3]));
        assert_eq!(p.num_edges(), 0);
        assert_eq!(
            Graph::complete(4).delete_vertices(&set(&[4])).unwrap(),
            Graph::complete(3)
        );
        let p4 = Graph::path(4).delete_vertices(&set(&[3])).unwrap();
        assert_eq!(p4.to_string(), "V:1,2,4;E:(1,2)");
        assert!(Graph::path(3).delete_vertices(&set(&[7])).is_err());
    }

    #[test]
    fn saturation() {
        assert_eq!(
            Graph::path(3).saturate_neighborhood(2).unwrap(),
            Graph::complete(3)
        );
        assert_eq!(
            Graph::complete(5).saturate_neighborhood(3).unwrap(),
            Graph::complete(5)
        );
        let g = Graph::path(4).saturate_neighborhood(3).unwrap();
        assert_eq!(g.to_string(), "V:1,2,3,4;E:(1,2),(2,3),(2,4),(3,4)");
    }

    #[test]
    fn components() {
        assert_eq!(Graph::path(3).connected_components(), vec![set(&[1, 2, 3])]);
        let g = Graph::path(3).delete_vertex(2).unwrap();
        assert_eq!(g.connected_components(), vec![set(&[1]), set(&[3])]);
        let g = f3().delete_vertex(5).unwrap();
        assert_eq!(
            g.connected_components(),
            vec![set(&[1, 2, 3, 4]), set(&[6])]
        );
    }

    #[test]
    fn leaves_and_cut_vertices() {
        assert_eq!(Graph::path(3).leaves(), set(&[1, 3]));
        assert_eq!(f3().leaves(), set(&[1, 6]));
        assert!(Graph::complete(3).leaves().is_empty());
        assert!(Graph::path(3).is_internal(2).unwrap());
        assert!(!Graph::path(3).is_internal(1).unwrap());
        assert!(Graph::path(3).is_cut_vertex(2).unwrap());
        assert!(!Graph::complete(3).is_cut_vertex(1).unwrap());
        assert!(whisker().is_cut_vertex(1).unwrap());
    }

    #[test]
    fn bipartition() {
        assert_eq!(f3().is_bipartite(), Some((set(&[1, 3, 5]), set(&[2, 4, 6]))));
        assert_eq!(Graph::complete(3).is_bipartite(), None);
        assert_eq!(Graph::path(2).is_bipartite(), Some((set(&[1]), set(&[2]))));
    }

    #[test]
    fn cliques() {
        assert_eq!(Graph::complete(5).clique_number(), 5);
        assert_eq!(f3().clique_number(), 2);
        assert_eq!(whisker().clique_number(), 3);
        assert_eq!(Graph::empty().clique_number(), 0);
    }

    #[test]
    fn canonical_text() {
        let g = whisker();
        assert_eq!(g.to_string(), "V:1,2,3,4;E:(1,2),(1,3),(1,4),(2,3)");
        assert_eq!(g.to_string().parse::<Graph>().unwrap(), g);
        let e = Graph::new([5], []).unwrap();
        assert_eq!(e.to_string(), "V:5;E:");
        assert_eq!("V:5;E:".parse::<Graph>().unwrap(), e);
        assert!("V:1,2;E:(1,3)".parse::<Graph>().is_err());
        assert!("V:1;E:(1,1)".parse::<Graph>().is_err());
    }

    #[test]
    fn identify_and_union() {
        let a = Graph::path(3);
        let b = Graph::path(3).relabel(|v| v + 10);
        let u = a.disjoint_union(&b).unwrap().identify(3, 11).unwrap();
        assert_eq!(u.to_string(), "V:1,2,3,12,13;E:(1,2),(2,3),(3,12),(12,13)");
        assert!(a.disjoint_union(&a).is_err());
    }
}
