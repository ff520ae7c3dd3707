//! Membership predicates for the distinguished classes of proper submodules.
//!
//! Every predicate is decided by exhaustion, either over elements and scalars
//! (prime, primary) or over the submodule lattice (everything else). The submodule
//! M itself never belongs to any class.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::submodule::{SubId, Submodule, SubmoduleLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassName {
    Proper,
    Maximal,
    Prime,
    Semiprime,
    Extraordinary,
    Primary,
    Radical,
    StronglyIrreducible,
    Irreducible,
    CompletelyIrreducible,
    Minimal,
    MinimalPrime,
    Cyclic,
    FinitelyGenerated,
}

impl ClassName {
    pub const ALL: [ClassName; 14] = [
        ClassName::Proper,
        ClassName::Maximal,
        ClassName::Prime,
        ClassName::Semiprime,
        ClassName::Extraordinary,
        ClassName::Primary,
        ClassName::Radical,
        ClassName::StronglyIrreducible,
        ClassName::Irreducible,
        ClassName::CompletelyIrreducible,
        ClassName::Minimal,
        ClassName::MinimalPrime,
        ClassName::Cyclic,
        ClassName::FinitelyGenerated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::Proper => "proper",
            ClassName::Maximal => "maximal",
            ClassName::Prime => "prime",
            ClassName::Semiprime => "semiprime",
            ClassName::Extraordinary => "extraordinary",
            ClassName::Primary => "primary",
            ClassName::Radical => "radical",
            ClassName::StronglyIrreducible => "strongly-irreducible",
            ClassName::Irreducible => "irreducible",
            ClassName::CompletelyIrreducible => "completely-irreducible",
            ClassName::Minimal => "minimal",
            ClassName::MinimalPrime => "minimal-prime",
            ClassName::Cyclic => "cyclic",
            ClassName::FinitelyGenerated => "finitely-generated",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

/// Membership bitsets (over submodule ids) for every class, computed once per lattice.
#[derive(Debug)]
pub(crate) struct ClassTable {
    members: Vec<BitSet>,
}

impl ClassTable {
    pub(crate) fn members(&self, c: ClassName) -> &BitSet {
        &self.members[c.slot()]
    }

    pub(crate) fn compute(lat: &SubmoduleLattice) -> Self {
        let k = lat.len();
        let collect = |pred: &dyn Fn(SubId) -> bool| {
            BitSet::from_indices(k, lat.ids().filter(|&i| lat.is_proper(i) && pred(i)))
        };

        let proper = collect(&|_| true);
        let maximal = collect(&|i| is_maximal(lat, i));
        let prime = collect(&|i| is_prime(lat, i));
        let semiprime = semiprime_set(lat, &prime);
        let radical = collect(&|i| lat.radical_with(i, &prime) == i);
        let extraordinary = collect(&|i| pairs_condition(lat, i, &semiprime));
        let primary = collect(&|i| is_primary(lat, i));
        let all = BitSet::full(k);
        let strongly_irreducible = collect(&|i| pairs_condition(lat, i, &all));
        let irreducible = collect(&|i| is_irreducible(lat, i));
        let completely_irreducible = collect(&|i| is_completely_irreducible(lat, i));
        let minimal = collect(&|i| is_minimal(lat, i));
        let minimal_prime = minimal.intersection(&prime);
        let cyclic = collect(&|i| is_cyclic(lat, i));
        let finitely_generated = proper.clone();

        let mut members = vec![BitSet::new(k); ClassName::ALL.len()];
        for (c, set) in [
            (ClassName::Proper, proper),
            (ClassName::Maximal, maximal),
            (ClassName::Prime, prime),
            (ClassName::Semiprime, semiprime),
            (ClassName::Extraordinary, extraordinary),
            (ClassName::Primary, primary),
            (ClassName::Radical, radical),
            (ClassName::StronglyIrreducible, strongly_irreducible),
            (ClassName::Irreducible, irreducible),
            (ClassName::CompletelyIrreducible, completely_irreducible),
            (ClassName::Minimal, minimal),
            (ClassName::MinimalPrime, minimal_prime),
            (ClassName::Cyclic, cyclic),
            (ClassName::FinitelyGenerated, finitely_generated),
        ] {
            members[c.slot()] = set;
        }
        if let Some(Fault::FlipMembership { class, sub }) = lat.fault() {
            if sub < k {
                members[class.slot()].toggle(sub);
            }
        }
        Self { members }
    }
}

impl SubmoduleLattice {
    fn radical_with(&self, id: SubId, primes: &BitSet) -> SubId {
        self.meet_all(self.supersets(id).intersection(primes).iter())
    }

    pub fn is_in_class(&self, id: SubId, c: ClassName) -> bool {
        self.class_table().members(c).contains(id)
    }

    /// D(M): class members as a bitset over submodule ids.
    pub fn class_members(&self, c: ClassName) -> &BitSet {
        self.class_table().members(c)
    }
}

/// Decides membership of `n` in class `c`; N = M yields `false`.
pub fn is_in_class(n: &Submodule, lat: &SubmoduleLattice, c: ClassName) -> Result<bool> {
    let id = lat.id_of_submodule(n)?;
    Ok(lat.is_in_class(id, c))
}

/// Members of class `c` in enumeration order.
pub fn members_of_class(lat: &SubmoduleLattice, c: ClassName) -> Vec<Submodule> {
    lat.class_members(c)
        .iter()
        .map(|i| lat.submodule(i))
        .collect()
}

fn is_maximal(lat: &SubmoduleLattice, n: SubId) -> bool {
    lat.supersets(n).iter().all(|l| l == n || l == lat.top())
}

fn is_prime(lat: &SubmoduleLattice, n: SubId) -> bool {
    let m = lat.module();
    let set = lat.elements(n);
    let ann = lat.annihilator(n);
    let drop_ann = lat.fault() == Some(Fault::PrimeDropsAnnihilator);
    // r·m depends only on r mod the exponent, and so does membership in (N : M)
    (0..m.exponent()).all(|r| {
        let r_in_ann = !drop_ann && ann.contains(r);
        r_in_ann || (0..m.order()).all(|x| !set.contains(m.scalar_idx(r, x)) || set.contains(x))
    })
}

fn is_primary(lat: &SubmoduleLattice, n: SubId) -> bool {
    let m = lat.module();
    let set = lat.elements(n);
    let g = lat.annihilator(n).generator();
    let bound = m.ring().modulus().min(64);
    // g | r^k for some k iff it holds for k = ⌈log₂ g⌉ ≤ 64, well inside the n-step bound
    let nilpotent_mod_ann = |r: u64| {
        let mut pow = 1u64 % g;
        (1..=bound).any(|_| {
            pow = ((pow as u128 * r as u128) % g as u128) as u64;
            pow == 0
        })
    };
    (0..m.exponent()).all(|r| {
        nilpotent_mod_ann(r)
            || (0..m.order()).all(|x| !set.contains(m.scalar_idx(r, x)) || set.contains(x))
    })
}

/// Intersections of nonempty families of primes, found by closing the prime set under ∩.
fn semiprime_set(lat: &SubmoduleLattice, primes: &BitSet) -> BitSet {
    let mut found = primes.clone();
    let mut frontier: Vec<SubId> = primes.iter().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &a in &frontier {
            for b in primes.iter() {
                let c = lat.meet(a, b);
                if found.insert(c) {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    found
}

/// For all L, K in `family`: L ∩ K ⊆ N implies L ⊆ N or K ⊆ N.
fn pairs_condition(lat: &SubmoduleLattice, n: SubId, family: &BitSet) -> bool {
    let outside: Vec<SubId> = family.iter().filter(|&l| !lat.leq(l, n)).collect();
    outside
        .iter()
        .enumerate()
        .all(|(i, &l)| outside[i..].iter().all(|&k| !lat.leq(lat.meet(l, k), n)))
}

/// No two submodules N₁, N₂ ≠ N with N = N₁ ∩ N₂.
fn is_irreducible(lat: &SubmoduleLattice, n: SubId) -> bool {
    let strict: Vec<SubId> = lat.supersets(n).iter().filter(|&l| l != n).collect();
    strict
        .iter()
        .enumerate()
        .all(|(i, &a)| strict[i + 1..].iter().all(|&b| lat.meet(a, b) != n))
}

/// N differs from the intersection of all submodules strictly containing it.
fn is_completely_irreducible(lat: &SubmoduleLattice, n: SubId) -> bool {
    let mut acc = BitSet::full(lat.module().order());
    for l in lat.supersets(n).iter().filter(|&l| l != n) {
        acc.intersect_with(lat.elements(l));
    }
    &acc != lat.elements(n)
}

fn is_minimal(lat: &SubmoduleLattice, n: SubId) -> bool {
    n != lat.zero()
        && lat
            .ids()
            .all(|l| l == lat.zero() || l == n || !lat.leq(l, n))
}

fn is_cyclic(lat: &SubmoduleLattice, n: SubId) -> bool {
    lat.elements(n).iter().any(|x| lat.cyclic(x) == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{Element, Module};
    use crate::ring::Ring;
    use crate::submodule::all_submodules;

    fn lattice(n: u64, orders: &[u64]) -> SubmoduleLattice {
        all_submodules(&Module::new(Ring::new(n).unwrap(), orders.to_vec()).unwrap()).unwrap()
    }

    fn sub(l: &SubmoduleLattice, gens: &[&[u64]]) -> SubId {
        let gens: Vec<Element> = gens.iter().map(|g| Element::new(g.to_vec())).collect();
        l.generate(&gens).unwrap()
    }

    /// Verbatim prime definition over the full ring Z/n, independent of the exponent shortcut.
    fn prime_oracle(l: &SubmoduleLattice, n: SubId) -> bool {
        let m = l.module();
        let set = l.submodule(n);
        if !set.is_proper() {
            return false;
        }
        let ring_n = m.ring().modulus();
        let ann: Vec<u64> = (0..ring_n)
            .filter(|&r| m.elements().all(|x| set.contains(&m.scalar_mul(r, &x))))
            .collect();
        (0..ring_n).all(|r| {
            m.elements().all(|x| {
                !set.contains(&m.scalar_mul(r, &x)) || set.contains(&x) || ann.contains(&r)
            })
        })
    }

    fn primary_oracle(l: &SubmoduleLattice, n: SubId) -> bool {
        let m = l.module();
        let set = l.submodule(n);
        if !set.is_proper() {
            return false;
        }
        let ring = m.ring();
        let in_ann = |r: u64| m.elements().all(|x| set.contains(&m.scalar_mul(r, &x)));
        (0..ring.modulus()).all(|r| {
            let mut pow = 1 % ring.modulus();
            let nil = (1..=ring.modulus()).any(|_| {
                pow = ring.mul(pow, r);
                in_ann(pow)
            });
            nil || m
                .elements()
                .all(|x| !set.contains(&m.scalar_mul(r, &x)) || set.contains(&x))
        })
    }

    #[test]
    fn names_round_trip() {
        for c in ClassName::ALL {
            assert_eq!(c.as_str().parse::<ClassName>().unwrap(), c);
        }
        assert!("prim".parse::<ClassName>().is_err());
    }

    #[test]
    fn prime_examples() {
        let l1 = lattice(6, &[6]);
        assert!(l1.is_in_class(sub(&l1, &[&[2]]), ClassName::Prime));
        assert!(!l1.is_in_class(l1.zero(), ClassName::Prime));
        let l3 = lattice(2, &[2, 2]);
        assert!(l3.is_in_class(l3.zero(), ClassName::Prime));
        assert!(!l3.is_in_class(l3.top(), ClassName::Prime));
    }

    #[test]
    fn strongly_irreducible_primary_extraordinary_radical_examples() {
        let l1 = lattice(6, &[6]);
        let two = sub(&l1, &[&[2]]);
        assert!(!l1.is_in_class(l1.zero(), ClassName::StronglyIrreducible));
        assert!(l1.is_in_class(two, ClassName::StronglyIrreducible));
        assert!(l1.is_in_class(two, ClassName::Extraordinary));
        assert!(!l1.is_in_class(l1.zero(), ClassName::Extraordinary));
        assert!(l1.is_in_class(l1.zero(), ClassName::Radical));

        let l2 = lattice(4, &[4]);
        assert!(l2.is_in_class(l2.zero(), ClassName::Primary));
        assert!(!l2.is_in_class(l2.zero(), ClassName::Radical));
    }

    #[test]
    fn members_examples() {
        let l1 = lattice(6, &[6]);
        let primes: Vec<SubId> = l1.class_members(ClassName::Prime).iter().collect();
        let mut expected = vec![sub(&l1, &[&[2]]), sub(&l1, &[&[3]])];
        expected.sort();
        assert_eq!(primes, expected);

        let l3 = lattice(2, &[2, 2]);
        assert_eq!(l3.class_members(ClassName::Prime).len(), 4);
        assert!(l3.is_in_class(l3.zero(), ClassName::Prime));

        let l2 = lattice(4, &[4]);
        let max: Vec<SubId> = l2.class_members(ClassName::Maximal).iter().collect();
        assert_eq!(max, vec![sub(&l2, &[&[2]])]);
        assert_eq!(members_of_class(&l2, ClassName::Maximal).len(), 1);
    }

    #[test]
    fn top_is_in_no_class() {
        let l = lattice(12, &[2, 6]);
        for c in ClassName::ALL {
            assert!(!l.is_in_class(l.top(), c), "{c}");
        }
        let z = lattice(3, &[]);
        for c in ClassName::ALL {
            assert!(z.class_members(c).is_empty());
        }
    }

    #[test]
    fn prime_and_primary_agree_with_full_ring_oracles() {
        for (n, orders) in [
            (6, vec![6]),
            (12, vec![12]),
            (8, vec![8]),
            (4, vec![2, 4]),
            (12, vec![2, 6]),
            (3, vec![3, 3]),
            (12, vec![4]),
        ] {
            let l = lattice(n, &orders);
            for i in l.ids() {
                assert_eq!(l.is_in_class(i, ClassName::Prime), prime_oracle(&l, i));
                assert_eq!(l.is_in_class(i, ClassName::Primary), primary_oracle(&l, i));
            }
        }
    }

    #[test]
    fn class_implications_on_small_modules() {
        for (n, orders) in [
            (24, vec![24]),
            (4, vec![4, 4]),
            (2, vec![2, 2, 2]),
            (12, vec![2, 6]),
        ] {
            let l = lattice(n, &orders);
            let has = |i, c| l.is_in_class(i, c);
            for i in l.ids() {
                if has(i, ClassName::Maximal) {
                    assert!(has(i, ClassName::Prime));
                }
                if has(i, ClassName::Prime) {
                    assert!(has(i, ClassName::Semiprime));
                }
                assert_eq!(has(i, ClassName::Semiprime), has(i, ClassName::Radical));
                if has(i, ClassName::StronglyIrreducible) {
                    assert!(has(i, ClassName::Irreducible));
                }
                assert_eq!(
                    has(i, ClassName::Irreducible),
                    has(i, ClassName::CompletelyIrreducible)
                );
                assert_eq!(
                    has(i, ClassName::MinimalPrime),
                    has(i, ClassName::Minimal) && has(i, ClassName::Prime)
                );
                assert_eq!(has(i, ClassName::FinitelyGenerated), l.is_proper(i));
            }
        }
    }

    #[test]
    fn vector_space_subspaces_are_prime() {
        for (p, dim) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
            let l = lattice(p, &vec![p; dim]);
            assert_eq!(
                l.class_members(ClassName::Prime).len(),
                l.len() - 1,
                "F_{p}^{dim}"
            );
        }
    }

    #[test]
    fn semiprime_requires_a_prime_above() {
        let l = lattice(4, &[4]);
        for i in l.ids() {
            let primes_above = l
                .supersets(i)
                .intersection(l.class_members(ClassName::Prime));
            let expected = l.radical(i) == i && !primes_above.is_empty();
            assert_eq!(l.is_in_class(i, ClassName::Semiprime), expected);
        }
    }

    #[test]
    fn cyclic_versus_plane() {
        let l = lattice(2, &[2, 2, 2]);
        let plane = sub(&l, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(!l.is_in_class(plane, ClassName::Cyclic));
        assert!(l.is_in_class(l.zero(), ClassName::Cyclic));
        assert!(l.is_in_class(plane, ClassName::Maximal));
    }

    #[test]
    fn public_predicate_wrapper() {
        let l = lattice(6, &[6]);
        let m = l.module().clone();
        let two = crate::submodule::generate(&m, &[Element::new(vec![2])]).unwrap();
        assert!(is_in_class(&two, &l, ClassName::Prime).unwrap());
        assert!(!is_in_class(&Submodule::whole(&m), &l, ClassName::Proper).unwrap());
    }
}
