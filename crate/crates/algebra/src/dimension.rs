//! Krull dimension and Hilbert series of monomial ideals.

use crate::field::PrimeField;
use crate::ideal::Ideal;
use crate::monomial::Monomial;

/// `dim S/I` for a monomial ideal: the number of variables minus a minimum transversal of the
/// generator supports. `None` for the unit ideal.
pub fn monomial_dim<F: PrimeField>(ideal: &Ideal<F>) -> Option<u32> {
    let leads: Vec<Monomial> = ideal.generators.iter().map(|g| g.lm()).collect();
    dim_of_supports(&leads, ideal.ring.nvars())
}

pub fn dim_of_supports(monomials: &[Monomial], nvars: usize) -> Option<u32> {
    let mut sets: Vec<u32> = monomials.iter().map(|m| m.support()).collect();
    if sets.contains(&0) {
        return None;
    }
    sets.sort_by_key(|s| s.count_ones());
    let mut minimal: Vec<u32> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|&t| t & s == t) {
            minimal.push(s);
        }
    }
    let mut best = nvars as u32;
    min_transversal(&minimal, 0, 0, &mut best);
    Some(nvars as u32 - best)
}

fn min_transversal(sets: &[u32], chosen: u32, size: u32, best: &mut u32) {
    if size >= *best {
        return;
    }
    let open: Vec<u32> = sets.iter().copied().filter(|&s| s & chosen == 0).collect();
    if open.is_empty() {
        *best = size;
        return;
    }
    // pairwise disjoint open sets each need their own variable
    let mut used = 0u32;
    let mut bound = 0;
    for &s in &open {
        if s & used == 0 {
            used |= s;
            bound += 1;
        }
    }
    if size + bound >= *best {
        return;
    }
    let pick = *open.iter().min_by_key(|s| s.count_ones()).unwrap();
    let mut bits = pick;
    while bits != 0 {
        let v = bits.trailing_zeros();
        bits &= bits - 1;
        min_transversal(&open, chosen | 1 << v, size + 1, best);
    }
}

/// Numerator `K(t)` of `HS(S/I) = K(t) / (1-t)^N`, by pivoting on the most frequent variable.
pub fn hilbert_numerator(monomials: &[Monomial]) -> Vec<i64> {
    let gens = minimalize(monomials.to_vec());
    if gens.is_empty() {
        return vec![1];
    }
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        return gens.iter().fold(vec![1], |acc, g| mul_one_minus(&acc, g.degree() as usize));
    }
    let mut counts = [0usize; crate::monomial::MAX_VARS];
    for g in &gens {
        for (v, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let v = (0..counts.len()).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
    let x = Monomial::var(v);
    let mut with_x = gens.clone();
    with_x.push(x);
    let colon: Vec<Monomial> = gens.iter().map(|g| g.div(&g.gcd(&x))).collect();
    let a = hilbert_numerator(&with_x);
    let b = hilbert_numerator(&colon);
    let mut out = a;
    if out.len() < b.len() + 1 {
        out.resize(b.len() + 1, 0);
    }
    for (i, c) in b.iter().enumerate() {
        out[i + 1] += c;
    }
    trim(out)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn mul_one_minus(p: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0; p.len() + d];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + d] -= c;
    }
    trim(out)
}

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ring::RingContext;

    type F = Fp<32003>;

    fn ideal(m: u32, n: u32, text: &str) -> Ideal<F> {
        Ideal::from_text(RingContext::new(m, n, 32003).unwrap(), text).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(monomial_dim(&ideal(2, 2, "1*x[1,1]*x[2,2]")), Some(3));
        assert_eq!(monomial_dim(&ideal(1, 2, "1*x[1,1]\n1*x[1,2]")), Some(0));
        assert_eq!(monomial_dim(&ideal(1, 3, "1*x[1,1]*x[1,2]\n1*x[1,2]*x[1,3]\n1*x[1,1]*x[1,3]")), Some(1));
        assert_eq!(monomial_dim(&ideal(1, 3, "1")), None);
        assert_eq!(monomial_dim(&ideal(1, 3, "")), Some(3));
    }

    #[test]
    fn numerators() {
        let m = |e: &[u8]| Monomial::from_exponents(e);
        assert_eq!(hilbert_numerator(&[]), vec![1]);
        assert_eq!(hilbert_numerator(&[m(&[1]), m(&[0, 1])]), vec![1, -2, 1]);
        // (xy, xz): 1 - 2t^2 + t^3
        assert_eq!(hilbert_numerator(&[m(&[1, 1]), m(&[1, 0, 1])]), vec![1, 0, -2, 1]);
        assert_eq!(hilbert_numerator(&[m(&[2])]), vec![1, 0, -1]);
    }
}
