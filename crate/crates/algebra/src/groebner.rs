//! Buchberger's algorithm with the Gebauer–Möller criteria and the normal selection strategy.

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::ideal::Ideal;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::RingContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbCaps {
    /// S-polynomials reduced.
    pub max_pairs: usize,
    pub max_basis: usize,
}

impl Default for GbCaps {
    fn default() -> Self {
        GbCaps { max_pairs: 500_000, max_basis: 20_000 }
    }
}

/// Full reduction of `p` by polynomials with monic leading terms.
pub fn reduce<F: PrimeField>(p: &Polynomial<F>, basis: &[&Polynomial<F>], order: &MonomialOrder) -> Polynomial<F> {
    let mut p = p.clone();
    let mut k = 0;
    while k < p.len() {
        let (m, c) = p.terms()[k];
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => p = p.sub_mul(c / g.lc(), &m.div(&g.lm()), g, order),
            None => k += 1,
        }
    }
    p
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Buchberger<'a, F> {
    order: &'a MonomialOrder,
    polys: Vec<Polynomial<F>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<F: PrimeField> Buchberger<'_, F> {
    fn active_polys(&self) -> Vec<&Polynomial<F>> {
        self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect()
    }

    fn insert(&mut self, h: Polynomial<F>) {
        let lh = h.lm();
        let hi = self.polys.len();
        let fresh: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, self.polys[g].lm().lcm(&lh)))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (idx, &(g, l)) in fresh.iter().enumerate() {
            let coprime = self.polys[g].lm().is_coprime(&lh);
            let dominated = fresh[idx + 1..].iter().chain(&kept).any(|(_, l2)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((g, l));
            }
        }
        kept.retain(|(g, _)| !self.polys[*g].lm().is_coprime(&lh));
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm) && polys[p.i].lm().lcm(&lh) != p.lcm && polys[p.j].lm().lcm(&lh) != p.lcm)
        });
        self.pairs.extend(kept.into_iter().map(|(g, lcm)| Pair { i: g, j: hi, lcm }));
        for g in 0..hi {
            if self.active[g] && lh.divides(&self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
        self.polys.push(h);
        self.active.push(true);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.lcm
                .degree()
                .cmp(&pb.lcm.degree())
                .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
        })?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Polynomial<F> {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let a = f.mul_term(&p.lcm.div(&f.lm()), F::one());
        a.sub_mul(F::one(), &p.lcm.div(&g.lm()), g, self.order)
    }
}

/// Reduced Gröbner basis in the ring's order, sorted by decreasing leading monomial.
pub fn groebner_basis<F: PrimeField>(ideal: &Ideal<F>, caps: &GbCaps) -> Result<Ideal<F>> {
    let order = &ideal.ring.order;
    let mut bb = Buchberger { order, polys: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    let mut input: Vec<Polynomial<F>> = ideal.generators.clone();
    input.sort_by(|a, b| order.cmp(&a.lm(), &b.lm()));
    for f in input {
        let h = reduce(&f, &bb.active_polys(), order);
        if !h.is_zero() {
            bb.insert(h.monic());
        }
    }
    let mut processed = 0;
    while let Some(pair) = bb.next_pair() {
        processed += 1;
        if processed > caps.max_pairs {
            return Err(AlgebraError::ResourceCap { what: "S-pairs", limit: caps.max_pairs });
        }
        let s = bb.spoly(&pair);
        let h = reduce(&s, &bb.active_polys(), order);
        if !h.is_zero() {
            bb.insert(h.monic());
            if bb.polys.len() > caps.max_basis {
                return Err(AlgebraError::ResourceCap { what: "basis size", limit: caps.max_basis });
            }
        }
    }
    let mut basis: Vec<Polynomial<F>> = bb
        .polys
        .into_iter()
        .zip(bb.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    basis.sort_by(|a, b| order.cmp(&b.lm(), &a.lm()));
    Ok(Ideal { ring: ideal.ring, generators: interreduce(basis, order) })
}

/// Tail-reduces a minimal basis; leading terms are unchanged.
fn interreduce<F: PrimeField>(basis: Vec<Polynomial<F>>, order: &MonomialOrder) -> Vec<Polynomial<F>> {
    let mut out = basis.clone();
    for i in 0..basis.len() {
        let others: Vec<&Polynomial<F>> = basis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        let lead = Polynomial::monomial(basis[i].lm(), F::one());
        let tail = basis[i].sub(&lead, order);
        out[i] = lead.add(&reduce(&tail, &others, order), order);
    }
    out
}

pub fn normal_form<F: PrimeField>(p: &Polynomial<F>, gb: &Ideal<F>) -> Polynomial<F> {
    let basis: Vec<&Polynomial<F>> = gb.generators.iter().collect();
    reduce(&p.reorder(&gb.ring.order), &basis, &gb.ring.order)
}

pub fn contains<F: PrimeField>(gb: &Ideal<F>, p: &Polynomial<F>) -> bool {
    normal_form(p, gb).is_zero()
}

pub fn initial_ideal<F: PrimeField>(gb: &Ideal<F>) -> Ideal<F> {
    let gens = gb.generators.iter().map(|g| Polynomial::monomial(g.lm(), F::one())).collect();
    Ideal { ring: gb.ring, generators: gens }
}

pub fn ideal_equal<F: PrimeField>(a: &Ideal<F>, b: &Ideal<F>, caps: &GbCaps) -> Result<bool> {
    if a.ring != b.ring {
        return Err(AlgebraError::RingMismatch);
    }
    Ok(groebner_basis(a, caps)?.generators == groebner_basis(b, caps)?.generators)
}

/// `I ∩ J` by eliminating `t` from `t·I + (1-t)·J`; returns a reduced Gröbner basis.
pub fn ideal_intersection<F: PrimeField>(a: &Ideal<F>, b: &Ideal<F>, caps: &GbCaps) -> Result<Ideal<F>> {
    if a.ring != b.ring {
        return Err(AlgebraError::RingMismatch);
    }
    let split = a.ring.nvars();
    let big: RingContext =
        a.ring.with_extra(a.ring.extra + 1)?.with_order(MonomialOrder::Elimination { split });
    let o = &big.order;
    let t = Polynomial::monomial(Monomial::var(split), F::one());
    let one_minus_t = Polynomial::constant(F::one()).sub(&t, o);
    let mut gens: Vec<Polynomial<F>> = a.generators.iter().map(|f| f.reorder(o).mul(&t, o)).collect();
    gens.extend(b.generators.iter().map(|g| g.reorder(o).mul(&one_minus_t, o)));
    let gb = groebner_basis(&Ideal::new(big, gens)?, caps)?;
    let kept = gb.generators.into_iter().filter(|g| !g.uses_vars_from(split)).collect();
    groebner_basis(&Ideal::new(a.ring, kept)?, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ideal::build_ideal_generators;
    use bei_core::Graph;

    type F = Fp<32003>;

    fn ring(m: u32, n: u32) -> RingContext {
        RingContext::new(m, n, 32003).unwrap()
    }

    fn ideal(r: RingContext, text: &str) -> Ideal<F> {
        Ideal::from_text(r, text).unwrap()
    }

    #[test]
    fn small_bases() {
        let caps = GbCaps::default();
        let r = ring(1, 2);
        let gb = groebner_basis(&ideal(r, "1*x[1,1]\n1*x[1,1] + 1*x[1,2]"), &caps).unwrap();
        assert_eq!(gb.to_text(), "1*x[1,1]\n1*x[1,2]\n");
        let j: Ideal<F> = build_ideal_generators(&Graph::complete(2), &ring(2, 2)).unwrap();
        let gb = groebner_basis(&j, &caps).unwrap();
        assert_eq!(gb.generators, vec![j.generators[0].monic()]);
        assert_eq!(initial_ideal(&j).to_text(), "1*x[1,2]*x[2,1]\n");
    }

    #[test]
    fn idempotent_and_sound() {
        let caps = GbCaps::default();
        let j: Ideal<F> = build_ideal_generators(&Graph::path(3), &ring(3, 3)).unwrap();
        let gb = groebner_basis(&j, &caps).unwrap();
        assert_eq!(groebner_basis(&gb, &caps).unwrap(), gb);
        assert!(j.generators.iter().all(|g| contains(&gb, g)));
        assert!(initial_ideal(&gb).generators.iter().all(|g| g.lm().is_squarefree()));
    }

    #[test]
    fn equality_and_intersection() {
        let caps = GbCaps::default();
        let r = ring(1, 2);
        let x = ideal(r, "1*x[1,1]");
        let x2 = ideal(r, "1*x[1,1]^2");
        assert!(!ideal_equal(&x, &x2, &caps).unwrap());
        let both = ideal(r, "1*x[1,1]\n3*x[1,1]^2");
        assert!(ideal_equal(&x, &both, &caps).unwrap());
        let y = ideal(r, "1*x[1,2]");
        assert_eq!(ideal_intersection(&x, &y, &caps).unwrap().to_text(), "1*x[1,1]*x[1,2]\n");
        assert!(ideal_equal(&ideal_intersection(&x, &x, &caps).unwrap(), &x, &caps).unwrap());
    }

    #[test]
    fn caps_abort() {
        let j: Ideal<F> = build_ideal_generators(&Graph::path(4), &ring(3, 4)).unwrap();
        let tiny = GbCaps { max_pairs: 1, max_basis: 100 };
        assert!(matches!(groebner_basis(&j, &tiny), Err(AlgebraError::ResourceCap { .. })));
    }
}
