//! Prime fields `Z/p` with the prime fixed at compile time.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Inv, Num, One, Zero};

use crate::error::{AlgebraError, Result};

/// Coefficient field of the kernel. All arithmetic goes through num-traits.
pub trait PrimeField:
    Num + Copy + Neg<Output = Self> + Inv<Output = Self> + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const CHARACTERISTIC: u32;

    fn from_i64(v: i64) -> Self;

    /// Representative in `0..p`.
    fn residue(self) -> u32;
}

pub const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const PRIME: () = assert!(is_prime(P) && P < (1 << 31), "Fp needs a prime below 2^31");

    pub fn new(v: u32) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME;
        Fp(v % P)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u32> Inv for Fp<P> {
    type Output = Self;
    /// Panics on zero.
    fn inv(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F_{P}");
        self.pow(P as u64 - 2)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl<const P: u32> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, o: Self) -> Self {
        assert!(o.0 != 0, "remainder by zero in F_{P}");
        Fp(0)
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, Self::FromStrRadixErr> {
        let v = i64::from_str_radix(s, radix)?;
        Ok(Self::from_i64(v))
    }
}

impl<const P: u32> PrimeField for Fp<P> {
    const CHARACTERISTIC: u32 = P;

    fn from_i64(v: i64) -> Self {
        Fp::new(v.rem_euclid(P as i64) as u32)
    }

    fn residue(self) -> u32 {
        self.0
    }
}

/// Characteristics with a compiled field type, for [`with_field!`](crate::with_field).
pub const SUPPORTED_PRIMES: [u32; 8] = [2, 3, 5, 7, 101, 10007, 31991, 32003];

pub fn check_supported(p: u32) -> Result<u32> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(p)
    } else {
        Err(AlgebraError::UnsupportedCharacteristic(p))
    }
}

/// Runs a block with `$F` bound to the field of characteristic `$p`.
#[macro_export]
macro_rules! with_field {
    ($p:expr, $F:ident => $body:expr) => {{
        match $crate::field::check_supported($p) {
            Err(e) => Err(e),
            Ok(2) => { type $F = $crate::field::Fp<2>; $body }
            Ok(3) => { type $F = $crate::field::Fp<3>; $body }
            Ok(5) => { type $F = $crate::field::Fp<5>; $body }
            Ok(7) => { type $F = $crate::field::Fp<7>; $body }
            Ok(101) => { type $F = $crate::field::Fp<101>; $body }
            Ok(10007) => { type $F = $crate::field::Fp<10007>; $body }
            Ok(31991) => { type $F = $crate::field::Fp<31991>; $body }
            Ok(_) => { type $F = $crate::field::Fp<32003>; $body }
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F = Fp<32003>;

    #[test]
    fn basic_arithmetic() {
        assert_eq!(F::new(32002) + F::new(2), F::new(1));
        assert_eq!(F::new(1) - F::new(2), F::new(32002));
        assert_eq!(-F::new(0), F::zero());
        assert_eq!(F::from_i64(-1).residue(), 32002);
        assert_eq!(F::new(2).inv() * F::new(2), F::one());
        assert_eq!(Fp::<2>::one() + Fp::<2>::one(), Fp::<2>::zero());
        assert_eq!(F::from_str_radix("-3", 10).unwrap(), F::new(32000));
    }

    #[test]
    fn primes() {
        assert!(SUPPORTED_PRIMES.iter().all(|&p| is_prime(p)));
        assert!(!is_prime(1) && !is_prime(32001));
        assert!(check_supported(13).is_err());
        let c: Result<u32> = with_field!(31991, G => Ok(G::CHARACTERISTIC));
        assert_eq!(c.unwrap(), 31991);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u32..32003, b in 0u32..32003, c in 0u32..32003) {
            let (a, b, c) = (F::new(a), F::new(b), F::new(c));
            prop_assert_eq!((a + b) * c, a * c + b * c);
            prop_assert_eq!(a - b + b, a);
            if !b.is_zero() {
                prop_assert_eq!(a / b * b, a);
            }
        }
    }
}
