//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const MAX_VARS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: [0; MAX_VARS], deg: 0 }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(e: &[u8]) -> Self {
        let mut m = Monomial::one();
        m.exps[..e.len()].copy_from_slice(e);
        m.deg = e.iter().map(|&x| x as u16).sum();
        m
    }

    pub fn exponents(&self) -> &[u8; MAX_VARS] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i] + other.exps[i];
        }
        Monomial { exps, deg: self.deg + other.deg }
    }

    /// `self / other`; the caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i] - other.exps[i];
        }
        Monomial { exps, deg: self.deg - other.deg }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i].max(other.exps[i]);
        }
        Monomial::from_exponents(&exps)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i].min(other.exps[i]);
        }
        Monomial::from_exponents(&exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> u32 {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.exps.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..n])
    }
}

/// Variables are ordered `x_0 > x_1 > ...`, i.e. row-major over the `m × n` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonomialOrder {
    Degrevlex,
    Lex,
    /// Variables with index `>= split` form a block compared first (degrevlex inside each block).
    Elimination { split: usize },
}

pub fn degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.deg.cmp(&b.deg).then_with(|| revlex_tail(&a.exps, &b.exps))
}

fn revlex_tail(a: &[u8], b: &[u8]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

fn block_degrevlex(a: &[u8], b: &[u8]) -> Ordering {
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    da.cmp(&db).then_with(|| revlex_tail(a, b))
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Degrevlex => degrevlex(a, b),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Elimination { split } => block_degrevlex(&a.exps[split..], &b.exps[split..])
                .then_with(|| block_degrevlex(&a.exps[..split], &b.exps[..split])),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Degrevlex => write!(f, "degrevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Elimination { split } => write!(f, "elim({split})"),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    /// `degrevlex` or `lex`; elimination orders are internal to intersections.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "degrevlex" | "grevlex" => Ok(MonomialOrder::Degrevlex),
            "lex" => Ok(MonomialOrder::Lex),
            _ => Err(format!("unknown monomial order {s:?}")),
        }
    }
}

/// `Ord` wrapper for degrevlex, used as a map key.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Drl(pub Monomial);

impl PartialOrd for Drl {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Drl {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(&self.0, &other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u8]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn orders() {
        let o = MonomialOrder::Degrevlex;
        assert_eq!(o.cmp(&m(&[1, 0, 0, 1]), &m(&[0, 1, 1, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[2]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1])), Ordering::Greater);
        let l = MonomialOrder::Lex;
        assert_eq!(l.cmp(&m(&[1]), &m(&[0, 5])), Ordering::Greater);
        let e = MonomialOrder::Elimination { split: 2 };
        assert_eq!(e.cmp(&m(&[0, 0, 1]), &m(&[3, 3])), Ordering::Greater);
        assert_eq!(e.cmp(&m(&[0, 1, 1]), &m(&[1, 0, 1])), Ordering::Less);
    }

    #[test]
    fn arithmetic() {
        let a = m(&[1, 2, 0]);
        let b = m(&[0, 1, 1]);
        assert_eq!(a.lcm(&b), m(&[1, 2, 1]));
        assert_eq!(a.gcd(&b), m(&[0, 1]));
        assert_eq!(a.mul(&b).div(&b), a);
        assert!(m(&[0, 1]).divides(&a));
        assert!(!b.divides(&a));
        assert!(m(&[1]).is_coprime(&b));
        assert_eq!(a.degree(), 3);
    }
}
