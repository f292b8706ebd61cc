//! Ideals of `S = K[x_{ij}]`, the generalized binomial edge ideal and the primes `P_T`.

use std::fmt::Write as _;

use bei_core::cutsets::has_cut_point_property;
use bei_core::{Graph, VertexSet};
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::monomial::{Monomial, MAX_VARS};
use crate::poly::Polynomial;
use crate::ring::RingContext;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal<F> {
    pub ring: RingContext,
    pub generators: Vec<Polynomial<F>>,
}

impl<F: PrimeField> Ideal<F> {
    /// Drops zero generators and re-sorts terms for the ring's order.
    pub fn new(ring: RingContext, generators: Vec<Polynomial<F>>) -> Result<Self> {
        if ring.characteristic != F::CHARACTERISTIC {
            return Err(AlgebraError::CharacteristicMismatch { ring: ring.characteristic, field: F::CHARACTERISTIC });
        }
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.reorder(&ring.order))
            .collect();
        Ok(Ideal { ring, generators })
    }

    pub fn zero(ring: RingContext) -> Result<Self> {
        Self::new(ring, Vec::new())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    pub fn is_monomial(&self) -> bool {
        self.generators.iter().all(|g| g.is_monomial())
    }

    /// The same generators in another ring with identical variables.
    pub fn in_ring(&self, ring: RingContext) -> Result<Self> {
        if ring.m != self.ring.m || ring.n != self.ring.n {
            return Err(AlgebraError::RingMismatch);
        }
        Self::new(ring, self.generators.clone())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch);
        }
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Self::new(self.ring, g)
    }

    /// One polynomial per line, terms `c*x[i,j]^e*...` joined by ` + `.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&format_poly(g, &self.ring));
            out.push('\n');
        }
        out
    }

    pub fn from_text(ring: RingContext, text: &str) -> Result<Self> {
        let gens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| parse_poly(l, &ring))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }
}

pub fn format_poly<F: PrimeField>(p: &Polynomial<F>, ring: &RingContext) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        write!(out, "{}", c.residue()).unwrap();
        for v in 0..ring.nvars() {
            match m.exp(v) {
                0 => {}
                1 => write!(out, "*{}", ring.var_name(v)).unwrap(),
                e => write!(out, "*{}^{e}", ring.var_name(v)).unwrap(),
            }
        }
    }
    out
}

pub fn parse_poly<F: PrimeField>(line: &str, ring: &RingContext) -> Result<Polynomial<F>> {
    let bad = |what: &str| AlgebraError::Parse(format!("{what} in {line:?}"));
    if line.trim() == "0" {
        return Ok(Polynomial::zero());
    }
    let mut terms = Vec::new();
    for term in line.split(" + ") {
        let mut factors = term.trim().split('*');
        let coeff: i64 = factors.next().unwrap_or("").trim().parse().map_err(|_| bad("bad coefficient"))?;
        let mut exps = [0u8; MAX_VARS];
        for f in factors {
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<u8>().map_err(|_| bad("bad exponent"))?),
                None => (f, 1),
            };
            let v = parse_var(name.trim(), ring).ok_or_else(|| bad("unknown variable"))?;
            exps[v] += e;
        }
        terms.push((Monomial::from_exponents(&exps[..ring.nvars()]), F::from_i64(coeff)));
    }
    Ok(Polynomial::from_terms(terms, &ring.order))
}

fn parse_var(name: &str, ring: &RingContext) -> Option<usize> {
    if let Some(inner) = name.strip_prefix("x[").and_then(|s| s.strip_suffix(']')) {
        let (i, j) = inner.split_once(',')?;
        let (i, j): (u32, u32) = (i.trim().parse().ok()?, j.trim().parse().ok()?);
        ((1..=ring.m).contains(&i) && (1..=ring.n).contains(&j)).then(|| ring.var(i, j))
    } else {
        let k: usize = name.strip_prefix("t[")?.strip_suffix(']')?.parse().ok()?;
        (1..=ring.extra as usize).contains(&k).then(|| ring.grid_vars() + k - 1)
    }
}

/// The 2-minor `[i,j | t,l] = x_{it} x_{jl} - x_{il} x_{jt}`.
pub fn minor<F: PrimeField>(ring: &RingContext, i: u32, j: u32, t: u32, l: u32) -> Polynomial<F> {
    let mono = |a: usize, b: usize| Monomial::var(a).mul(&Monomial::var(b));
    Polynomial::from_terms(
        vec![
            (mono(ring.var(i, t), ring.var(j, l)), F::one()),
            (mono(ring.var(i, l), ring.var(j, t)), -F::one()),
        ],
        &ring.order,
    )
}

fn check_labels(g: &Graph, ring: &RingContext) -> Result<()> {
    match g.max_label() {
        Some(label) if label > ring.n => Err(AlgebraError::LabelOverflow { label, n: ring.n }),
        _ => Ok(()),
    }
}

fn minors_of<F: PrimeField>(ring: &RingContext, edges: &[(u32, u32)]) -> Vec<Polynomial<F>> {
    let mut out = Vec::new();
    for i in 1..=ring.m {
        for j in i + 1..=ring.m {
            for &(t, l) in edges {
                let (t, l) = (t.min(l), t.max(l));
                out.push(minor(ring, i, j, t, l));
            }
        }
    }
    out
}

/// `J_{K_m,G}`: one minor per row pair and edge. Labels must lie in `1..=n`.
pub fn build_ideal_generators<F: PrimeField>(g: &Graph, ring: &RingContext) -> Result<Ideal<F>> {
    check_labels(g, ring)?;
    Ideal::new(*ring, minors_of(ring, &g.edges()))
}

/// `P_T = (x_{ij} : j ∈ T) + Σ J_{K_m, complete(G_i)}` over the components `G_i` of `G \ T`.
pub fn build_pt_ideal<F: PrimeField>(g: &Graph, t: &VertexSet, ring: &RingContext) -> Result<Ideal<F>> {
    check_labels(g, ring)?;
    if !has_cut_point_property(g, t)? {
        return Err(bei_core::Error::NotInFamily(t.iter().copied().collect()).into());
    }
    let mut gens: Vec<Polynomial<F>> = Vec::new();
    for &j in t {
        for i in 1..=ring.m {
            gens.push(Polynomial::monomial(Monomial::var(ring.var(i, j)), F::one()));
        }
    }
    let rest = g.delete_vertices(t)?;
    for comp in rest.connected_components() {
        let vs: Vec<u32> = comp.into_iter().collect();
        let edges: Vec<(u32, u32)> =
            vs.iter().enumerate().flat_map(|(a, &x)| vs[a + 1..].iter().map(move |&y| (x, y))).collect();
        gens.extend(minors_of(ring, &edges));
    }
    Ideal::new(*ring, gens)
}

/// Relabels to `1..=|V|` and builds the ring; the map sends new labels (minus one) to old ones.
pub fn dense_ring(g: &Graph, m: u32, characteristic: u32) -> Result<(Graph, Vec<u32>, RingContext)> {
    let (dense, map) = g.relabel_dense();
    let ring = RingContext::new(m, dense.num_vertices() as u32, characteristic)?;
    Ok((dense, map, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;

    fn ring(m: u32, n: u32) -> RingContext {
        RingContext::new(m, n, 32003).unwrap()
    }

    #[test]
    fn generator_counts() {
        let i: Ideal<F> = build_ideal_generators(&Graph::complete(2), &ring(2, 2)).unwrap();
        assert_eq!(i.to_text(), "32002*x[1,2]*x[2,1] + 1*x[1,1]*x[2,2]\n");
        let i: Ideal<F> = build_ideal_generators(&Graph::path(3), &ring(2, 3)).unwrap();
        assert_eq!(i.generators.len(), 2);
        let i: Ideal<F> = build_ideal_generators(&Graph::complete(2), &ring(3, 2)).unwrap();
        assert_eq!(i.generators.len(), 3);
        assert!(i.is_homogeneous());
        assert!(matches!(
            build_ideal_generators::<F>(&Graph::path(3), &ring(2, 2)),
            Err(AlgebraError::LabelOverflow { label: 3, n: 2 })
        ));
    }

    #[test]
    fn pt_ideals() {
        let t: VertexSet = [2].into();
        let p: Ideal<F> = build_pt_ideal(&Graph::path(3), &t, &ring(2, 3)).unwrap();
        assert_eq!(p.to_text(), "1*x[1,2]\n1*x[2,2]\n");
        let whisker = Graph::from_edges(&[(1, 2), (1, 3), (2, 3), (1, 4)]).unwrap();
        let p: Ideal<F> = build_pt_ideal(&whisker, &[1].into(), &ring(2, 4)).unwrap();
        assert_eq!(p.generators.len(), 3);
        let j: Ideal<F> = build_ideal_generators(&Graph::complete(2), &ring(2, 2)).unwrap();
        let p: Ideal<F> = build_pt_ideal(&Graph::complete(2), &VertexSet::new(), &ring(2, 2)).unwrap();
        assert_eq!(p, j);
        assert!(build_pt_ideal::<F>(&Graph::path(3), &[1].into(), &ring(2, 3)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = ring(3, 3).with_extra(1).unwrap();
        let text = "5*x[1,1]^2*t[1] + 32002*x[3,3]\n1\n";
        let i: Ideal<F> = Ideal::from_text(r, text).unwrap();
        assert_eq!(i.to_text(), text);
        assert!(Ideal::<F>::from_text(r, "1*y[1]").is_err());
        assert!(Ideal::<F>::from_text(r, "1*x[4,1]").is_err());
    }
}
