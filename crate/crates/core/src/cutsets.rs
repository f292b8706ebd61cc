//! Sets with the cut point property, the minimal primes `P_T` they index, and the
//! combinatorial Krull dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{fan_graph, FanSpec};
use crate::graph::{Graph, Label, VertexSet};

pub const ENUMERATION_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSet {
    pub set: VertexSet,
    /// Components of `G \ T`, by minimal label.
    pub components: Vec<VertexSet>,
}

impl CutSet {
    pub fn c(&self) -> usize {
        self.components.len()
    }

    /// `c(T)(m-1) + |V| - |T|`.
    pub fn prime_dim(&self, num_vertices: usize, m: u32) -> usize {
        self.c() * (m as usize - 1) + num_vertices - self.set.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSetFamily {
    pub num_vertices: usize,
    pub sets: Vec<CutSet>,
}

impl CutSetFamily {
    pub fn contains(&self, t: &VertexSet) -> bool {
        self.sets.iter().any(|c| &c.set == t)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    fn sorted(mut sets: Vec<CutSet>, num_vertices: usize) -> Self {
        sets.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
        CutSetFamily { num_vertices, sets }
    }
}

/// Bitmask view of a graph on at most 32 vertices.
struct Dense {
    labels: Vec<Label>,
    adj: Vec<u32>,
}

impl Dense {
    fn new(g: &Graph) -> Self {
        let labels: Vec<Label> = g.vertices().collect();
        let adj = labels
            .iter()
            .map(|&v| {
                g.neighbors(v, false)
                    .unwrap()
                    .iter()
                    .map(|w| 1u32 << labels.binary_search(w).unwrap())
                    .fold(0, |a, b| a | b)
            })
            .collect();
        Dense { labels, adj }
    }

    fn all(&self) -> u32 {
        if self.labels.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.labels.len()) - 1
        }
    }

    fn components(&self, alive: u32) -> Vec<u32> {
        let mut rest = alive;
        let mut out = Vec::new();
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let i = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[i] & alive & !comp;
                comp |= new;
                frontier |= new;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    fn count_components(&self, alive: u32) -> usize {
        self.components(alive).len()
    }

    fn has_cut_point_property(&self, t: u32) -> bool {
        let full = self.all();
        let mut bits = t;
        while bits != 0 {
            let v = bits & bits.wrapping_neg();
            bits &= bits - 1;
            let host = full & !(t & !v);
            if self.count_components(host & !v) <= self.count_components(host) {
                return false;
            }
        }
        true
    }

    fn is_simplicial(&self, i: usize) -> bool {
        let nb = self.adj[i];
        let mut bits = nb;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if (nb & !(1 << j)) & !self.adj[j] != 0 {
                return false;
            }
        }
        true
    }

    fn to_set(&self, mask: u32) -> VertexSet {
        (0..self.labels.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.labels[i])
            .collect()
    }

    fn to_mask(&self, s: &VertexSet) -> Result<u32> {
        s.iter().try_fold(0u32, |acc, v| {
            self.labels
                .binary_search(v)
                .map(|i| acc | 1 << i)
                .map_err(|_| Error::UnknownVertex(*v))
        })
    }

    fn cut_set(&self, t: u32) -> CutSet {
        let comps = self.components(self.all() & !t);
        CutSet {
            set: self.to_set(t),
            components: comps.into_iter().map(|c| self.to_set(c)).collect(),
        }
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    let n = g.num_vertices();
    if n > cap.min(32) {
        Err(Error::GraphTooLarge { got: n, cap: cap.min(32) })
    } else {
        Ok(())
    }
}

/// `T` is empty or every `v ∈ T` is a cut vertex of `G \ (T \ {v})`.
pub fn has_cut_point_property(g: &Graph, t: &VertexSet) -> Result<bool> {
    check_cap(g, 32)?;
    let d = Dense::new(g);
    Ok(d.has_cut_point_property(d.to_mask(t)?))
}

pub fn cut_point_sets(g: &Graph) -> Result<CutSetFamily> {
    cut_point_sets_capped(g, ENUMERATION_CAP)
}

/// Brute force over subsets of the non-simplicial vertices; ordered by size, then lex.
pub fn cut_point_sets_capped(g: &Graph, cap: usize) -> Result<CutSetFamily> {
    check_cap(g, cap)?;
    let d = Dense::new(g);
    let candidates: Vec<usize> = (0..d.labels.len()).filter(|&i| !d.is_simplicial(i)).collect();
    let mut sets = Vec::new();
    for sub in 0u64..(1u64 << candidates.len()) {
        let t = candidates
            .iter()
            .enumerate()
            .filter(|(b, _)| sub >> b & 1 == 1)
            .fold(0u32, |acc, (_, &i)| acc | 1 << i);
        if d.has_cut_point_property(t) {
            sets.push(d.cut_set(t));
        }
    }
    Ok(CutSetFamily::sorted(sets, g.num_vertices()))
}

/// Products of the prefix families of the parts, minus those covering all of `[n]`.
pub fn fan_cut_point_sets(spec: &FanSpec) -> Result<CutSetFamily> {
    let g = fan_graph(spec)?;
    let d = Dense::new(&g);
    let mut choices: Vec<VertexSet> = vec![VertexSet::new()];
    for w in &spec.partition {
        let mut next = Vec::new();
        for base in &choices {
            for j in 0..=w.len() {
                let mut t = base.clone();
                t.extend(&w[..j]);
                next.push(t);
            }
        }
        choices = next;
    }
    let sets = choices
        .into_iter()
        .filter(|t| t.len() < spec.n as usize)
        .map(|t| d.cut_set(d.to_mask(&t).unwrap()))
        .collect();
    Ok(CutSetFamily::sorted(sets, g.num_vertices()))
}

/// Components of `G \ T` feeding `P_T = (x_{ij} : j ∈ T) + Σ J_{K_m, complete(G_i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecipe {
    pub m: u32,
    pub set: VertexSet,
    pub components: Vec<VertexSet>,
    pub dim: usize,
}

pub fn minimal_prime_components(g: &Graph, t: &VertexSet, m: u32) -> Result<PrimeRecipe> {
    check_cap(g, 32)?;
    let d = Dense::new(g);
    let mask = d.to_mask(t)?;
    if !d.has_cut_point_property(mask) {
        return Err(Error::NotInFamily(t.iter().copied().collect()));
    }
    let cs = d.cut_set(mask);
    Ok(PrimeRecipe {
        m,
        dim: cs.prime_dim(g.num_vertices(), m),
        set: cs.set,
        components: cs.components,
    })
}

/// Maximum of `c(T)(m-1) + |V| - |T|` over the family, with the first maximiser as witness.
pub fn dim_over_family(family: &CutSetFamily, m: u32) -> (usize, VertexSet) {
    let mut best: Option<(usize, &VertexSet)> = None;
    for cs in &family.sets {
        let d = cs.prime_dim(family.num_vertices, m);
        if best.is_none_or(|(b, _)| d > b) {
            best = Some((d, &cs.set));
        }
    }
    best.map(|(d, s)| (d, s.clone())).unwrap_or((0, VertexSet::new()))
}

pub fn combinatorial_dim(g: &Graph, m: u32) -> Result<(usize, VertexSet)> {
    Ok(dim_over_family(&cut_point_sets(g)?, m))
}
