//! Sparse polynomials: terms sorted strictly decreasing in the ring's order, no zero coefficients.

use std::cmp::Ordering;

use crate::field::PrimeField;
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<F> {
    terms: Vec<(Monomial, F)>,
}

impl<F: PrimeField> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Sorts, merges equal monomials and drops zeros.
    pub fn from_terms(mut terms: Vec<(Monomial, F)>, order: &MonomialOrder) -> Self {
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, F)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = *lc + c,
                _ => out.push((m, c)),
            }
            if out.last().is_some_and(|t| t.1.is_zero()) {
                out.pop();
            }
        }
        Polynomial { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    pub fn lm(&self) -> Monomial {
        self.terms[0].0
    }

    pub fn lc(&self) -> F {
        self.terms[0].1
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn scale(&self, c: F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|&(m, a)| (m, a * c)).collect() }
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(&(_, c)) => self.scale(c.inv()),
            None => Self::zero(),
        }
    }

    /// `c · m · self`; multiplication by a monomial preserves the order.
    pub fn mul_term(&self, m: &Monomial, c: F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|&(t, a)| (t.mul(m), a * c)).collect() }
    }

    /// `self - c · m · other`.
    pub fn sub_mul(&self, c: F, m: &Monomial, other: &Self, order: &MonomialOrder) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => order.cmp(&a.0, &b.0.mul(m)),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let (t, a) = other.terms[j];
                    out.push((t.mul(m), -(a * c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = self.terms[i].1 - other.terms[j].1 * c;
                    if !v.is_zero() {
                        out.push((self.terms[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { terms: out }
    }

    pub fn add(&self, other: &Self, order: &MonomialOrder) -> Self {
        self.sub_mul(-F::one(), &Monomial::one(), other, order)
    }

    pub fn sub(&self, other: &Self, order: &MonomialOrder) -> Self {
        self.sub_mul(F::one(), &Monomial::one(), other, order)
    }

    pub fn mul(&self, other: &Self, order: &MonomialOrder) -> Self {
        let mut acc = Self::zero();
        for &(m, c) in &other.terms {
            acc = acc.sub_mul(-c, &m, self, order);
        }
        acc
    }

    /// Re-sorts the terms for another order.
    pub fn reorder(&self, order: &MonomialOrder) -> Self {
        Self::from_terms(self.terms.clone(), order)
    }

    pub fn uses_vars_from(&self, first: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[first..].iter().any(|&e| e > 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::One;

    type F = Fp<32003>;
    const O: MonomialOrder = MonomialOrder::Degrevlex;

    fn p(terms: &[(&[u8], i64)]) -> Polynomial<F> {
        Polynomial::from_terms(terms.iter().map(|(e, c)| (Monomial::from_exponents(e), F::from_i64(*c))).collect(), &O)
    }

    #[test]
    fn normalisation() {
        let a = p(&[(&[0, 1], 1), (&[1], 1), (&[0, 1], -1)]);
        assert_eq!(a, p(&[(&[1], 1)]));
        assert!(p(&[(&[1], 1), (&[1], -1)]).is_zero());
        let b = p(&[(&[0, 0, 1], 1), (&[1, 1], 1)]);
        assert_eq!(b.lm(), Monomial::from_exponents(&[1, 1]));
    }

    #[test]
    fn ring_operations() {
        let x = p(&[(&[1], 1)]);
        let y = p(&[(&[0, 1], 1)]);
        let s = x.add(&y, &O);
        let d = x.sub(&y, &O);
        assert_eq!(s.mul(&d, &O), p(&[(&[2], 1), (&[0, 2], -1)]));
        assert!(s.sub(&s, &O).is_zero());
        assert_eq!(s.scale(F::from_i64(2)).monic(), s);
        assert!(s.mul(&s, &O).is_homogeneous());
        assert!(!s.add(&Polynomial::constant(F::one()), &O).is_homogeneous());
    }
}
