//! The coefficient rings Z/nZ and their ideals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring Z/nZ, identified by its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    modulus: u64,
}

impl Ring {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, r: u64) -> u64 {
        r % self.modulus
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    /// The ideal gZ/nZ; `g` is reduced to gcd(g, n).
    pub fn ideal(&self, g: u64) -> Ideal {
        let g = gcd(g, self.modulus);
        Ideal {
            modulus: self.modulus,
            generator: if g == 0 { self.modulus } else { g },
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

/// An ideal gZ/nZ stored by its canonical divisor generator `g | n`.
///
/// `g = n` is the zero ideal and `g = 1` the whole ring; for n = 1 these coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ideal {
    modulus: u64,
    generator: u64,
}

impl Ideal {
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, r: u64) -> bool {
        (r % self.modulus).is_multiple_of(self.generator)
    }

    /// Number of ring elements in the ideal, n / g.
    pub fn size(&self) -> u64 {
        self.modulus / self.generator
    }

    pub fn is_zero(&self) -> bool {
        self.generator == self.modulus
    }

    pub fn is_whole_ring(&self) -> bool {
        self.generator == 1
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.generator.is_multiple_of(other.generator)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Z/{}", self.generator, self.modulus)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_zero() {
        assert_eq!(Ring::new(0), Err(Error::ZeroModulus));
        assert_eq!(Ring::new(6).unwrap().modulus(), 6);
        assert_eq!(Ring::new(1).unwrap().modulus(), 1);
        assert_eq!(Ring::new(12).unwrap().modulus(), 12);
    }

    #[test]
    fn ideal_normal_form() {
        let r = Ring::new(6).unwrap();
        let i = r.ideal(4);
        assert_eq!(i.generator(), 2);
        assert_eq!(i.size(), 3);
        assert!(r.ideal(0).is_zero());
        assert!(r.ideal(5).is_whole_ring());
        let members: Vec<u64> = (0..6).filter(|&x| i.contains(x)).collect();
        assert_eq!(members, vec![0, 2, 4]);
        // trivial ring: zero ideal is the whole ring
        let t = Ring::new(1).unwrap().ideal(0);
        assert!(t.is_zero() && t.is_whole_ring());
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(lcm(4, 6), 12);
    }
}
