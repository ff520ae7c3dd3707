//! Finite modules over Z/nZ presented as products of cyclic groups.
//!
//! Elements are addressed by a mixed-radix index with the first coordinate most
//! significant, so index order agrees with lexicographic order on coordinate tuples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{lcm, Ring};

/// A residue tuple (x₁,…,xₖ) with 0 ≤ xᵢ < dᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub coords: Vec<u64>,
}

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Self { coords }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.as_slice() {
            [x] => write!(f, "{x}"),
            cs => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Z/d₁ × … × Z/dₖ over Z/n, every dᵢ dividing n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Module {
    ring: Ring,
    orders: Vec<u64>,
    order: usize,
    exponent: u64,
}

impl Module {
    pub fn new(ring: Ring, orders: Vec<u64>) -> Result<Self> {
        let n = ring.modulus();
        let mut order: usize = 1;
        let mut exponent = 1;
        for &d in &orders {
            if d == 0 || !n.is_multiple_of(d) {
                return Err(Error::OrderDoesNotDivide {
                    order: d,
                    modulus: n,
                });
            }
            order = usize::try_from(d)
                .ok()
                .and_then(|d| order.checked_mul(d))
                .ok_or(Error::ModuleTooLarge)?;
            exponent = lcm(exponent, d);
        }
        Ok(Self {
            ring,
            orders,
            order,
            exponent,
        })
    }

    pub fn from_spec(spec: &ModuleSpec) -> Result<Self> {
        Self::new(Ring::new(spec.ring)?, spec.orders.clone())
    }

    pub fn spec(&self) -> ModuleSpec {
        ModuleSpec {
            ring: self.ring.modulus(),
            orders: self.orders.clone(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the cyclic orders; the action of r depends only on r mod this.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn zero(&self) -> Element {
        Element::new(vec![0; self.rank()])
    }

    /// The i-th standard generator (0,…,1,…,0), reduced mod dᵢ.
    pub fn generator(&self, i: usize) -> Element {
        let mut c = vec![0; self.rank()];
        c[i] = 1 % self.orders[i];
        Element::new(c)
    }

    pub fn check(&self, m: &Element) -> Result<()> {
        let ok =
            m.coords.len() == self.rank() && m.coords.iter().zip(&self.orders).all(|(x, d)| x < d);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                coords: m.coords.clone(),
                orders: self.orders.clone(),
            })
        }
    }

    /// Validates after reducing each coordinate mod its order.
    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidElement {
                coords: coords.to_vec(),
                orders: self.orders.clone(),
            });
        }
        Ok(Element::new(
            coords
                .iter()
                .zip(&self.orders)
                .map(|(x, d)| x % d)
                .collect(),
        ))
    }

    pub fn index_of(&self, m: &Element) -> usize {
        m.coords
            .iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        for (c, &d) in coords.iter_mut().zip(&self.orders).rev() {
            *c = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        Element::new(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element::new(
            a.coords
                .iter()
                .zip(&self.orders)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    /// r·m computed componentwise, r·xᵢ mod dᵢ.
    pub fn scalar_mul(&self, r: u64, m: &Element) -> Element {
        Element::new(
            m.coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &d)| ((r % d) as u128 * x as u128 % d as u128) as u64)
                .collect(),
        )
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut acc = 0usize;
        let (mut a, mut b) = (a, b);
        let mut place = 1usize;
        for &d in self.orders.iter().rev() {
            let d = d as usize;
            acc += ((a % d + b % d) % d) * place;
            a /= d;
            b /= d;
            place *= d;
        }
        acc
    }

    pub fn scalar_idx(&self, r: u64, a: usize) -> usize {
        let mut acc = 0usize;
        let mut a = a;
        let mut place = 1usize;
        for &d in self.orders.iter().rev() {
            let du = d as usize;
            let x = (a % du) as u128;
            acc += (((r % d) as u128 * x) % d as u128) as usize * place;
            a /= du;
            place *= du;
        }
        acc
    }

    /// Additive order of the element at `idx`.
    pub fn element_order(&self, idx: usize) -> u64 {
        self.element_at(idx)
            .coords
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &d)| lcm(acc, d / crate::ring::gcd(x, d)))
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0 over {}", self.ring);
        }
        for (i, d) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(f, "Z/{d}")?;
        }
        write!(f, " over {}", self.ring)
    }
}

/// Serializable description of a module: ring modulus and cyclic orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub ring: u64,
    pub orders: Vec<u64>,
}

impl ModuleSpec {
    pub fn new(ring: u64, orders: Vec<u64>) -> Self {
        Self { ring, orders }
    }

    /// Z/n over Z/n.
    pub fn cyclic(n: u64) -> Self {
        Self::new(n, vec![n])
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.ring)?;
        for (i, d) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses `n:d1,d2,...` (the orders list may be empty).
impl FromStr for ModuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (ring, orders) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `n:d1,d2,...`, got `{s}`")))?;
        let ring = ring
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad ring modulus `{ring}`")))?;
        Ok(Self::new(ring, parse_u64_list(orders)?))
    }
}

/// Parses a comma-separated list of non-negative integers; blank input is the empty list.
pub fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
        })
        .collect()
}
