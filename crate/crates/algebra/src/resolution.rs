//! Minimal graded Betti numbers of `S/I` from a Schreyer resolution.
//!
//! The frame (leading terms of all syzygies) is built from the monomial data of a Gröbner
//! basis. Differentials are filled in level by level by reducing `μ·d(e_k)` against the
//! previous level, and the Betti numbers are the ranks of `F ⊗ K` after cancelling the
//! constant entries of the differentials.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::groebner::{groebner_basis, GbCaps};
use crate::ideal::Ideal;
use crate::monomial::{Drl, Monomial, MonomialOrder};
use crate::ring::RingContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResCaps {
    pub max_vars: usize,
    /// Total number of Schreyer frame elements over all levels.
    pub max_frame: usize,
    pub gb: GbCaps,
}

impl Default for ResCaps {
    fn default() -> Self {
        ResCaps { max_vars: 18, max_frame: 4_000_000, gb: GbCaps::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BettiEntry {
    pub i: usize,
    pub j: u32,
    pub beta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub nvars: usize,
    /// Nonzero entries sorted by `(i, j)`.
    pub entries: Vec<BettiEntry>,
}

impl BettiTable {
    pub fn from_map(nvars: usize, map: &BTreeMap<(usize, u32), u64>) -> Self {
        let entries = map.iter().filter(|(_, &b)| b > 0).map(|(&(i, j), &beta)| BettiEntry { i, j, beta }).collect();
        BettiTable { nvars, entries }
    }

    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.entries.iter().find(|e| e.i == i && e.j == j).map_or(0, |e| e.beta)
    }

    pub fn total(&self, i: usize) -> u64 {
        self.entries.iter().filter(|e| e.i == i).map(|e| e.beta).sum()
    }

    pub fn pd(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.i).max()
    }

    pub fn reg(&self) -> Option<u32> {
        self.entries.iter().map(|e| e.j - e.i as u32).max()
    }

    /// Auslander–Buchsbaum.
    pub fn depth(&self) -> Option<usize> {
        self.pd().map(|p| self.nvars - p)
    }

    /// `Σ (-1)^i β_{i,j} t^j`.
    pub fn hilbert_numerator(&self) -> Vec<i64> {
        let top = self.entries.iter().map(|e| e.j as usize).max().unwrap_or(0);
        let mut out = vec![0i64; top + 1];
        for e in &self.entries {
            let sign = if e.i % 2 == 0 { 1 } else { -1 };
            out[e.j as usize] += sign * e.beta as i64;
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        out
    }

    /// Macaulay2-style grid: rows `j - i`, columns `i`.
    pub fn grid(&self) -> String {
        let (Some(pd), Some(reg)) = (self.pd(), self.reg()) else {
            return String::from("(zero module)\n");
        };
        let width = self.entries.iter().map(|e| e.beta.to_string().len()).max().unwrap_or(1).max(pd.to_string().len());
        let mut out = String::new();
        let cell = |s: String| format!("{s:>width$}");
        let label_w = (reg.to_string().len() + 1).max(6);
        write!(out, "{:>label_w$}", "").unwrap();
        for i in 0..=pd {
            write!(out, " {}", cell(i.to_string())).unwrap();
        }
        out.push('\n');
        write!(out, "{:>label_w$}", "total:").unwrap();
        for i in 0..=pd {
            write!(out, " {}", cell(self.total(i).to_string())).unwrap();
        }
        out.push('\n');
        for r in 0..=reg {
            write!(out, "{:>label_w$}", format!("{r}:")).unwrap();
            for i in 0..=pd {
                let b = self.get(i, r + i as u32);
                write!(out, " {}", cell(if b == 0 { ".".into() } else { b.to_string() })).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionInvariants {
    pub depth: usize,
    pub reg: u32,
    pub pd: usize,
    /// `depth == dim`, when a dimension is supplied.
    pub cm: Option<bool>,
}

pub fn invariants_from_betti(t: &BettiTable, dim: Option<u32>) -> Option<ResolutionInvariants> {
    let (pd, reg, depth) = (t.pd()?, t.reg()?, t.depth()?);
    Some(ResolutionInvariants { depth, reg, pd, cm: dim.map(|d| d as usize == depth) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub betti: BettiTable,
    /// Ranks of the non-minimal Schreyer resolution, by level.
    pub frame_sizes: Vec<usize>,
    pub gb_size: usize,
}

#[derive(Clone, Copy)]
struct Elem {
    comp: u32,
    mult: Monomial,
    tot: Monomial,
    deg: u32,
}

#[derive(Clone, Copy)]
struct VTerm<F> {
    mono: Monomial,
    idx: u32,
    coeff: F,
}

struct Level<F> {
    elems: Vec<Elem>,
    /// Elements with component `c` occupy `groups[c]`.
    groups: Vec<std::ops::Range<u32>>,
    diffs: Vec<Vec<VTerm<F>>>,
}

/// Minimal graded Betti numbers of `S/I` for a homogeneous ideal.
pub fn minimal_graded_resolution<F: PrimeField>(ideal: &Ideal<F>, caps: &ResCaps) -> Result<BettiTable> {
    resolve(ideal, caps).map(|r| r.betti)
}

pub fn resolve<F: PrimeField>(ideal: &Ideal<F>, caps: &ResCaps) -> Result<Resolution> {
    let nvars = ideal.ring.nvars();
    if nvars > caps.max_vars {
        return Err(AlgebraError::ResourceCap { what: "resolution variables", limit: caps.max_vars });
    }
    if !ideal.is_homogeneous() {
        return Err(AlgebraError::NotHomogeneous);
    }
    let ring = ideal.ring.with_order(MonomialOrder::Degrevlex);
    let mut gb = groebner_basis(&ideal.in_ring(ring)?, &caps.gb)?.generators;
    let gb_size = gb.len();
    let mut betti = BTreeMap::new();
    if gb.iter().any(|g| g.lm().is_one()) {
        return Ok(Resolution { betti: BettiTable::from_map(nvars, &betti), frame_sizes: vec![0], gb_size });
    }
    betti.insert((0, 0), 1);
    if gb.is_empty() {
        return Ok(Resolution { betti: BettiTable::from_map(nvars, &betti), frame_sizes: vec![1], gb_size });
    }
    gb.sort_by(|a, b| Drl(a.lm()).cmp(&Drl(b.lm())));
    let grading = Grading::new(&ring, &gb);

    let base = vec![Elem { comp: 0, mult: Monomial::one(), tot: Monomial::one(), deg: 0 }];
    let level1 = Level {
        elems: gb.iter().map(|g| Elem { comp: 0, mult: g.lm(), tot: g.lm(), deg: g.lm().degree() }).collect(),
        groups: vec![0..gb.len() as u32],
        diffs: gb
            .iter()
            .map(|g| g.terms().iter().map(|&(mono, coeff)| VTerm { mono, idx: 0, coeff }).collect())
            .collect(),
    };
    let mut frame_sizes = vec![1, level1.elems.len()];
    let mut total = 1 + level1.elems.len();
    // f[L][deg], rank[L][deg] of the constant part of d_L
    let mut counts: Vec<HashMap<u32, u64>> = vec![HashMap::from([(0, 1)])];
    let mut ranks: Vec<HashMap<u32, u64>> = vec![HashMap::new()];
    counts.push(degree_counts(&level1.elems));
    ranks.push(constant_ranks(&level1, &grading));
    let mut prev_elems = base;
    let mut cur = level1;
    loop {
        let next_elems = frame_step(&cur);
        if next_elems.elems.is_empty() {
            break;
        }
        total += next_elems.elems.len();
        if total > caps.max_frame {
            return Err(AlgebraError::ResourceCap { what: "Schreyer frame", limit: caps.max_frame });
        }
        frame_sizes.push(next_elems.elems.len());
        let next = fill_differentials(next_elems, &cur, &prev_elems)?;
        counts.push(degree_counts(&next.elems));
        ranks.push(constant_ranks(&next, &grading));
        prev_elems = std::mem::take(&mut cur.elems);
        cur = next;
    }
    ranks.push(HashMap::new());
    for (l, c) in counts.iter().enumerate() {
        for (&j, &f) in c {
            let r = ranks[l].get(&j).copied().unwrap_or(0) + ranks[l + 1].get(&j).copied().unwrap_or(0);
            if f > r {
                betti.insert((l, j), f - r);
            }
        }
    }
    Ok(Resolution { betti: BettiTable::from_map(nvars, &betti), frame_sizes, gb_size })
}

fn degree_counts(elems: &[Elem]) -> HashMap<u32, u64> {
    let mut out = HashMap::new();
    for e in elems {
        *out.entry(e.deg).or_insert(0) += 1;
    }
    out
}

/// Leading terms of the next level: for each element, the minimal generators of
/// `(n_l : l > k in the same component) : n_k`.
fn frame_step<F>(cur: &Level<F>) -> Level<F> {
    let mut elems = Vec::new();
    let mut groups = Vec::with_capacity(cur.elems.len());
    for group in &cur.groups {
        for k in group.clone() {
            let ek = cur.elems[k as usize];
            let start = elems.len() as u32;
            let mut gens: Vec<Monomial> = (k + 1..group.end)
                .map(|l| {
                    let nl = cur.elems[l as usize].mult;
                    nl.div(&nl.gcd(&ek.mult))
                })
                .collect();
            gens.sort_by(|a, b| Drl(*a).cmp(&Drl(*b)));
            let mut minimal: Vec<Monomial> = Vec::new();
            for g in gens {
                if !minimal.iter().any(|h| h.divides(&g)) {
                    minimal.push(g);
                }
            }
            for mult in minimal {
                elems.push(Elem { comp: k, mult, tot: mult.mul(&ek.tot), deg: mult.degree() + ek.deg });
            }
            groups.push(start..elems.len() as u32);
        }
    }
    Level { elems, groups, diffs: Vec::new() }
}

type Key = (Drl, Reverse<u32>);

/// `d(ε) = μ e_k - Σ c q e_l`, where the sum records the reduction of `μ·d(e_k)` to zero.
fn fill_differentials<F: PrimeField>(mut next: Level<F>, cur: &Level<F>, below: &[Elem]) -> Result<Level<F>> {
    let mut diffs = Vec::with_capacity(next.elems.len());
    let mut map: BTreeMap<Key, (F, Monomial)> = BTreeMap::new();
    for eps in &next.elems {
        let k = eps.comp;
        map.clear();
        for t in &cur.diffs[k as usize] {
            let mono = t.mono.mul(&eps.mult);
            map.insert((Drl(mono.mul(&below[t.idx as usize].tot)), Reverse(t.idx)), (t.coeff, mono));
        }
        let mut d = vec![VTerm { mono: eps.mult, idx: k, coeff: F::one() }];
        let mut first = true;
        while let Some(((_, Reverse(c)), (coeff, a))) = map.pop_last() {
            let range = cur.groups[c as usize].clone();
            let lo = if first { k + 1 } else { range.start };
            let l = (lo.max(range.start)..range.end)
                .find(|&l| cur.elems[l as usize].mult.divides(&a))
                .ok_or(AlgebraError::ResourceCap { what: "Schreyer reduction (no reducer)", limit: 0 })?;
            first = false;
            let q = a.div(&cur.elems[l as usize].mult);
            d.push(VTerm { mono: q, idx: l, coeff: -coeff });
            for t in &cur.diffs[l as usize][1..] {
                let mono = t.mono.mul(&q);
                let key = (Drl(mono.mul(&below[t.idx as usize].tot)), Reverse(t.idx));
                let delta = -(coeff * t.coeff);
                match map.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let v = o.get().0 + delta;
                        if v.is_zero() {
                            o.remove();
                        } else {
                            o.get_mut().0 = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert((delta, mono));
                    }
                }
            }
        }
        diffs.push(d);
    }
    next.diffs = diffs;
    Ok(next)
}

/// Block key for the constant parts: multidegree in `Z^m × Z^n` when the basis is
/// multihomogeneous, total degree otherwise.
struct Grading {
    rows_cols: Option<Vec<(u32, u32)>>,
    m: usize,
}

impl Grading {
    fn new<F: PrimeField>(ring: &RingContext, gb: &[crate::poly::Polynomial<F>]) -> Self {
        let rc: Vec<(u32, u32)> = (0..ring.grid_vars()).map(|v| ring.row_col(v).unwrap()).collect();
        let mut g = Grading { rows_cols: Some(rc), m: ring.m as usize };
        let multi = ring.extra == 0
            && gb.iter().all(|p| {
                let k = g.key(&p.lm());
                p.terms().iter().all(|t| g.key(&t.0) == k)
            });
        if !multi {
            g.rows_cols = None;
        }
        g
    }

    fn key(&self, tot: &Monomial) -> Vec<u16> {
        match &self.rows_cols {
            None => vec![tot.degree() as u16],
            Some(rc) => {
                let n = rc.len() / self.m.max(1);
                let mut k = vec![0u16; self.m + n];
                for (v, &(r, c)) in rc.iter().enumerate() {
                    let e = tot.exp(v) as u16;
                    if e > 0 {
                        k[r as usize] += e;
                        k[self.m + c as usize] += e;
                    }
                }
                k
            }
        }
    }
}

/// Rank of the constant part of `d: F_L → F_{L-1}` per internal degree.
fn constant_ranks<F: PrimeField>(level: &Level<F>, grading: &Grading) -> HashMap<u32, u64> {
    let mut blocks: HashMap<Vec<u16>, Vec<Vec<(u32, F)>>> = HashMap::new();
    for (i, d) in level.diffs.iter().enumerate() {
        let row: Vec<(u32, F)> = d.iter().filter(|t| t.mono.is_one()).map(|t| (t.idx, t.coeff)).collect();
        if !row.is_empty() {
            blocks.entry(grading.key(&level.elems[i].tot)).or_default().push(row);
        }
    }
    let mut out = HashMap::new();
    for (key, rows) in blocks {
        let r = sparse_rank(rows);
        if r > 0 {
            let deg = match grading.rows_cols {
                None => key[0] as u32,
                Some(_) => key[..grading.m].iter().map(|&x| x as u32).sum(),
            };
            *out.entry(deg).or_insert(0) += r;
        }
    }
    out
}

fn sparse_rank<F: PrimeField>(rows: Vec<Vec<(u32, F)>>) -> u64 {
    let mut pivots: HashMap<u32, Vec<(u32, F)>> = HashMap::new();
    let mut rank = 0;
    for mut row in rows {
        row.sort_by_key(|t| t.0);
        loop {
            let Some(&(col, c)) = row.first() else { break };
            match pivots.get(&col) {
                None => {
                    let inv = c.inv();
                    pivots.insert(col, row.iter().map(|&(j, v)| (j, v * inv)).collect());
                    rank += 1;
                    break;
                }
                Some(p) => row = axpy(&row, c, p),
            }
        }
    }
    rank
}

/// `row - c·p`, both sorted by column.
fn axpy<F: PrimeField>(row: &[(u32, F)], c: F, p: &[(u32, F)]) -> Vec<(u32, F)> {
    let mut out = Vec::with_capacity(row.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < p.len() {
        match (row.get(i), p.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                let v = a.1 - c * b.1;
                if !v.is_zero() {
                    out.push((a.0, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                out.push(*a);
                i += 1;
            }
            (Some(a), None) => {
                out.push(*a);
                i += 1;
            }
            (_, Some(b)) => {
                out.push((b.0, -(c * b.1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::hilbert_numerator;
    use crate::field::Fp;
    use crate::groebner::initial_ideal;
    use crate::ideal::build_ideal_generators;
    use bei_core::families::fp_graph;
    use bei_core::Graph;

    type F = Fp<32003>;

    fn ring(m: u32, n: u32) -> RingContext {
        RingContext::new(m, n, 32003).unwrap()
    }

    fn betti_of(g: &Graph, m: u32) -> BettiTable {
        let i: Ideal<F> = build_ideal_generators(g, &ring(m, g.num_vertices() as u32)).unwrap();
        minimal_graded_resolution(&i, &ResCaps::default()).unwrap()
    }

    #[test]
    fn single_minor() {
        let t = betti_of(&Graph::complete(2), 2);
        assert_eq!(t.entries, vec![BettiEntry { i: 0, j: 0, beta: 1 }, BettiEntry { i: 1, j: 2, beta: 1 }]);
        let inv = invariants_from_betti(&t, Some(3)).unwrap();
        assert_eq!((inv.depth, inv.reg, inv.pd, inv.cm), (3, 1, 1, Some(true)));
    }

    #[test]
    fn koszul() {
        let i: Ideal<F> = Ideal::from_text(ring(1, 2), "1*x[1,1]\n1*x[1,2]").unwrap();
        let t = minimal_graded_resolution(&i, &ResCaps::default()).unwrap();
        assert_eq!((t.get(1, 1), t.get(2, 2)), (2, 1));
        let inv = invariants_from_betti(&t, Some(0)).unwrap();
        assert_eq!((inv.depth, inv.reg, inv.pd, inv.cm), (0, 0, 2, Some(true)));
    }

    #[test]
    fn twisted_cubic() {
        // 2-minors of a generic 2x3 matrix: Eagon–Northcott
        let t = betti_of(&Graph::complete(3), 2);
        assert_eq!((t.get(1, 2), t.get(2, 3)), (3, 2));
        assert_eq!(t.entries.len(), 3);
    }

    #[test]
    fn path_and_fp() {
        let t = betti_of(&Graph::path(3), 2);
        assert_eq!((t.depth(), t.reg()), (Some(4), Some(2)));
        let t = betti_of(&fp_graph(3), 2);
        assert_eq!((t.depth(), t.reg()), (Some(7), Some(3)));
    }

    #[test]
    fn hilbert_series_agrees() {
        for (g, m) in [(Graph::path(4), 2), (fp_graph(2), 3), (Graph::complete(3), 3)] {
            let r = ring(m, g.num_vertices() as u32);
            let i: Ideal<F> = build_ideal_generators(&g, &r).unwrap();
            let t = minimal_graded_resolution(&i, &ResCaps::default()).unwrap();
            let gb = crate::groebner::groebner_basis(&i, &GbCaps::default()).unwrap();
            let leads: Vec<Monomial> = initial_ideal(&gb).generators.iter().map(|p| p.lm()).collect();
            assert_eq!(t.hilbert_numerator(), hilbert_numerator(&leads));
            assert!(t.entries.iter().all(|e| e.j as usize >= e.i));
        }
    }

    #[test]
    fn grid_text() {
        let t = betti_of(&Graph::complete(3), 2);
        assert_eq!(t.grid(), "       0 1 2\ntotal: 1 3 2\n    0: 1 . .\n    1: . 3 2\n");
    }

    #[test]
    fn caps() {
        let i: Ideal<F> = build_ideal_generators(&Graph::path(10), &ring(2, 10)).unwrap();
        assert!(matches!(
            minimal_graded_resolution(&i, &ResCaps::default()),
            Err(AlgebraError::ResourceCap { .. })
        ));
        let i: Ideal<F> = Ideal::from_text(ring(1, 2), "1*x[1,1] + 1*x[1,2]^2").unwrap();
        assert_eq!(minimal_graded_resolution(&i, &ResCaps::default()), Err(AlgebraError::NotHomogeneous));
    }
}
