//! Submodules, the submodule lattice S(M), the radical √N and N^ω.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::classes::{ClassName, ClassTable};
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::module::{Element, Module};
use crate::ring::{prime_divisors, Ideal};
use crate::topology::StructureSpace;

/// Index of a submodule inside its [`SubmoduleLattice`].
pub type SubId = usize;

/// Resource caps applied during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_elements: usize,
    pub max_submodules: usize,
    /// Bound on explicit closed-set enumeration; above it the point-closure route is used.
    pub max_closed_sets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_elements: 256,
            max_submodules: 512,
            max_closed_sets: 1 << 16,
        }
    }
}

/// A submodule as a canonical element set of its parent module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    parent: Module,
    elements: BitSet,
}

impl Submodule {
    /// Validates that `elements` is a submodule of `parent`.
    pub fn from_elements(parent: &Module, elements: BitSet) -> Result<Self> {
        if elements.domain() != parent.order() {
            return Err(Error::NotASubmodule(format!(
                "set over {} indices, module has {} elements",
                elements.domain(),
                parent.order()
            )));
        }
        if !elements.contains(0) {
            return Err(Error::NotASubmodule("missing zero".into()));
        }
        for a in elements.iter() {
            for b in elements.iter() {
                if !elements.contains(parent.add_idx(a, b)) {
                    return Err(Error::NotASubmodule(format!(
                        "not closed under addition at {} + {}",
                        parent.element_at(a),
                        parent.element_at(b)
                    )));
                }
            }
            for r in 0..parent.exponent() {
                if !elements.contains(parent.scalar_idx(r, a)) {
                    return Err(Error::NotASubmodule(format!(
                        "not closed under scalar {r} at {}",
                        parent.element_at(a)
                    )));
                }
            }
        }
        Ok(Self {
            parent: parent.clone(),
            elements,
        })
    }

    pub(crate) fn from_trusted(parent: &Module, elements: BitSet) -> Self {
        Self {
            parent: parent.clone(),
            elements,
        }
    }

    pub fn zero(parent: &Module) -> Self {
        Self::from_trusted(parent, BitSet::from_indices(parent.order(), [0]))
    }

    pub fn whole(parent: &Module) -> Self {
        Self::from_trusted(parent, BitSet::full(parent.order()))
    }

    pub fn parent(&self) -> &Module {
        &self.parent
    }

    pub fn elements(&self) -> &BitSet {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: &Element) -> bool {
        self.elements.contains(self.parent.index_of(m))
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.parent == other.parent && self.elements.is_subset(&other.elements)
    }

    pub fn is_proper(&self) -> bool {
        self.elements.len() < self.parent.order()
    }

    pub fn members(&self) -> Vec<Element> {
        self.elements
            .iter()
            .map(|i| self.parent.element_at(i))
            .collect()
    }
}

/// Smallest submodule containing `gens`, by worklist saturation.
pub fn generate(module: &Module, gens: &[Element]) -> Result<Submodule> {
    let mut idx = Vec::with_capacity(gens.len());
    for g in gens {
        module.check(g)?;
        idx.push(module.index_of(g));
    }
    Ok(Submodule::from_trusted(module, saturate(module, idx)))
}

pub(crate) fn saturate(module: &Module, seeds: impl IntoIterator<Item = usize>) -> BitSet {
    let mut set = BitSet::from_indices(module.order(), [0]);
    let mut work: VecDeque<usize> = VecDeque::new();
    for s in seeds {
        if set.insert(s) {
            work.push_back(s);
        }
    }
    while let Some(x) = work.pop_front() {
        let current: Vec<usize> = set.iter().collect();
        for y in current {
            let z = module.add_idx(x, y);
            if set.insert(z) {
                work.push_back(z);
            }
        }
        for r in 2..module.exponent() {
            let z = module.scalar_idx(r, x);
            if set.insert(z) {
                work.push_back(z);
            }
        }
    }
    set
}

/// ⟨x⟩ = {r·x}.
pub(crate) fn cyclic_set(module: &Module, x: usize) -> BitSet {
    BitSet::from_indices(
        module.order(),
        (0..module.exponent().max(1)).map(|r| module.scalar_idx(r, x)),
    )
}

/// {a + b : a ∈ A, b ∈ B} for submodule element sets A, B.
pub(crate) fn sum_sets(module: &Module, a: &BitSet, b: &BitSet) -> BitSet {
    let mut out = BitSet::new(module.order());
    let bs: Vec<usize> = b.iter().collect();
    for x in a.iter() {
        for &y in &bs {
            out.insert(module.add_idx(x, y));
        }
    }
    out
}

pub fn sum(a: &Submodule, b: &Submodule) -> Result<Submodule> {
    if a.parent != b.parent {
        return Err(Error::ParentMismatch);
    }
    let seeds: Vec<usize> = a.elements.iter().chain(b.elements.iter()).collect();
    Ok(Submodule::from_trusted(
        &a.parent,
        saturate(&a.parent, seeds),
    ))
}

pub fn intersect(a: &Submodule, b: &Submodule) -> Result<Submodule> {
    if a.parent != b.parent {
        return Err(Error::ParentMismatch);
    }
    Ok(Submodule::from_trusted(
        &a.parent,
        a.elements.intersection(&b.elements),
    ))
}

/// (N : M) = {r | rM ⊆ N}, in canonical divisor form.
pub fn annihilator(n: &Submodule) -> Ideal {
    let m = &n.parent;
    let e = m.exponent();
    // the action of r depends only on r mod e, and e·M = 0 ⊆ N
    let g = (1..=e)
        .find(|&r| (0..m.order()).all(|x| n.elements.contains(m.scalar_idx(r, x))))
        .unwrap_or(e);
    m.ring().ideal(g)
}

/// Every submodule of a finite module, with precomputed order and lattice tables.
pub struct SubmoduleLattice {
    module: Module,
    subs: Vec<BitSet>,
    index: HashMap<BitSet, SubId>,
    supersets: Vec<BitSet>,
    meet: Vec<SubId>,
    join: Vec<SubId>,
    limits: Limits,
    fault: Option<Fault>,
    classes: OnceLock<ClassTable>,
    labels: OnceLock<Vec<String>>,
}

impl fmt::Debug for SubmoduleLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubmoduleLattice")
            .field("module", &self.module)
            .field("subs", &self.subs)
            .finish()
    }
}

/// Enumerates S(M) under the default caps.
pub fn all_submodules(module: &Module) -> Result<SubmoduleLattice> {
    SubmoduleLattice::build(module, Limits::default(), None)
}

impl SubmoduleLattice {
    pub fn build(module: &Module, limits: Limits, fault: Option<Fault>) -> Result<Self> {
        if module.order() > limits.max_elements {
            return Err(Error::CapExceeded {
                what: "module order",
                cap: limits.max_elements,
                flag: "max-elements",
            });
        }
        let order = module.order();

        // join-irreducible candidates: the cyclic submodules
        let mut cyclics: Vec<BitSet> = (0..order)
            .map(|x| cyclic_set(module, x))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        cyclics.sort();

        let zero = BitSet::from_indices(order, [0]);
        let mut seen: HashSet<BitSet> = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(s) = queue.pop_front() {
            for c in &cyclics {
                if c.is_subset(&s) {
                    continue;
                }
                let t = sum_sets(module, &s, c);
                if !seen.contains(&t) {
                    if seen.len() >= limits.max_submodules {
                        return Err(Error::CapExceeded {
                            what: "submodule count",
                            cap: limits.max_submodules,
                            flag: "max-submodules",
                        });
                    }
                    seen.insert(t.clone());
                    queue.push_back(t);
                }
            }
        }

        let mut subs: Vec<BitSet> = seen.into_iter().collect();
        subs.sort();
        let index: HashMap<BitSet, SubId> = subs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let k = subs.len();

        let supersets: Vec<BitSet> = subs
            .iter()
            .map(|s| BitSet::from_indices(k, (0..k).filter(|&j| s.is_subset(&subs[j]))))
            .collect();

        let mut meet = vec![0; k * k];
        let mut join = vec![0; k * k];
        for i in 0..k {
            for j in i..k {
                let m = index[&subs[i].intersection(&subs[j])];
                // the join is the smallest common upper bound
                let uppers = supersets[i].intersection(&supersets[j]);
                let jn = uppers
                    .iter()
                    .min_by_key(|&u| subs[u].len())
                    .expect("M is an upper bound of everything");
                meet[i * k + j] = m;
                meet[j * k + i] = m;
                join[i * k + j] = jn;
                join[j * k + i] = jn;
            }
        }

        Ok(Self {
            module: module.clone(),
            subs,
            index,
            supersets,
            meet,
            join,
            limits,
            fault,
            classes: OnceLock::new(),
            labels: OnceLock::new(),
        })
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn ids(&self) -> std::ops::Range<SubId> {
        0..self.subs.len()
    }

    pub fn elements(&self, id: SubId) -> &BitSet {
        &self.subs[id]
    }

    pub fn submodule(&self, id: SubId) -> Submodule {
        Submodule::from_trusted(&self.module, self.subs[id].clone())
    }

    pub fn id_of(&self, elements: &BitSet) -> Option<SubId> {
        self.index.get(elements).copied()
    }

    pub fn id_of_submodule(&self, n: &Submodule) -> Result<SubId> {
        if n.parent != self.module {
            return Err(Error::ParentMismatch);
        }
        self.id_of(&n.elements)
            .ok_or_else(|| Error::NotASubmodule("element set not in the lattice".into()))
    }

    pub fn zero(&self) -> SubId {
        0
    }

    pub fn top(&self) -> SubId {
        self.subs.len() - 1
    }

    pub fn is_proper(&self, id: SubId) -> bool {
        id != self.top()
    }

    pub fn size(&self, id: SubId) -> usize {
        self.subs[id].len()
    }

    /// a ⊆ b
    pub fn leq(&self, a: SubId, b: SubId) -> bool {
        self.supersets[a].contains(b)
    }

    /// All submodules containing `id` (including itself).
    pub fn supersets(&self, id: SubId) -> &BitSet {
        &self.supersets[id]
    }

    pub fn meet(&self, a: SubId, b: SubId) -> SubId {
        self.meet[a * self.subs.len() + b]
    }

    pub fn join(&self, a: SubId, b: SubId) -> SubId {
        self.join[a * self.subs.len() + b]
    }

    pub fn join_all(&self, ids: impl IntoIterator<Item = SubId>) -> SubId {
        ids.into_iter()
            .fold(self.zero(), |acc, i| self.join(acc, i))
    }

    /// Intersection of a family; the empty family gives M.
    pub fn meet_all(&self, ids: impl IntoIterator<Item = SubId>) -> SubId {
        ids.into_iter().fold(self.top(), |acc, i| self.meet(acc, i))
    }

    pub fn generate(&self, gens: &[Element]) -> Result<SubId> {
        let n = generate(&self.module, gens)?;
        Ok(self.index[&n.elements])
    }

    pub fn cyclic(&self, x: usize) -> SubId {
        self.index[&cyclic_set(&self.module, x)]
    }

    pub fn annihilator(&self, id: SubId) -> Ideal {
        annihilator(&self.submodule(id))
    }

    pub(crate) fn class_table(&self) -> &ClassTable {
        self.classes.get_or_init(|| ClassTable::compute(self))
    }

    /// √N: intersection of the primes containing N, or M when there are none.
    pub fn radical(&self, id: SubId) -> SubId {
        let primes = self.class_table().members(ClassName::Prime);
        self.meet_all(self.supersets[id].intersection(primes).iter())
    }

    /// N^ω: intersection of the points of `space` containing N, or M when C(N) is empty.
    pub fn omega(&self, id: SubId, space: &StructureSpace<'_>) -> Result<SubId> {
        if space.lattice().module() != &self.module {
            return Err(Error::ParentMismatch);
        }
        if self.fault == Some(Fault::OmegaIgnoresClass) {
            return Ok(self.meet_all(self.supersets[id].iter()));
        }
        Ok(self.meet_all(space.c_points(id).map(|p| space.point_sub(p))))
    }

    /// Canonical label: the lexicographically least minimum-size generating set.
    pub fn label(&self, id: SubId) -> &str {
        &self.labels.get_or_init(|| {
            (0..self.subs.len())
                .map(|i| {
                    let gens = self.min_generators(i);
                    let body: Vec<String> = gens
                        .iter()
                        .map(|&g| self.module.element_at(g).to_string())
                        .collect();
                    format!("⟨{}⟩", body.join(","))
                })
                .collect()
        })[id]
    }

    /// Looks a submodule up by its canonical label.
    pub fn id_of_label(&self, label: &str) -> Option<SubId> {
        self.ids().find(|&i| self.label(i) == label)
    }

    /// Element indices of the lexicographically least generating set of minimum size.
    pub fn min_generators(&self, id: SubId) -> Vec<usize> {
        let target = &self.subs[id];
        let zero = BitSet::from_indices(self.module.order(), [0]);
        let mut need = self.generator_deficit(target, &zero);
        let mut span = zero;
        let mut chosen: Vec<usize> = Vec::new();
        while need > 0 {
            let start = chosen.last().map_or(1, |&c| c + 1);
            let (x, next) = target
                .iter()
                .filter(|&x| x >= start)
                .find_map(|x| {
                    let next = sum_sets(&self.module, &span, &cyclic_set(&self.module, x));
                    (self.generator_deficit(target, &next) < need).then_some((x, next))
                })
                .expect("a generating completion always exists");
            chosen.push(x);
            span = next;
            need -= 1;
        }
        chosen
    }

    /// Minimum number of extra generators needed to span `target` from `span`:
    /// max over primes p of dim_p target/(span + p·target).
    fn generator_deficit(&self, target: &BitSet, span: &BitSet) -> u32 {
        let size = target.len();
        prime_divisors(size as u64)
            .into_iter()
            .map(|p| {
                let p_target = BitSet::from_indices(
                    target.domain(),
                    target.iter().map(|x| self.module.scalar_idx(p, x)),
                );
                let denom = sum_sets(&self.module, span, &p_target).len();
                let mut q = size / denom;
                let mut k = 0;
                while q > 1 {
                    q /= p as usize;
                    k += 1;
                }
                k
            })
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn module(n: u64, orders: &[u64]) -> Module {
        Module::new(Ring::new(n).unwrap(), orders.to_vec()).unwrap()
    }

    fn el(c: &[u64]) -> Element {
        Element::new(c.to_vec())
    }

    /// Brute-force closure oracle: repeatedly add sums and scalar multiples until stable.
    fn closure_oracle(m: &Module, gens: &[Element]) -> Vec<Element> {
        let mut set: Vec<Element> = vec![m.zero()];
        set.extend(gens.iter().cloned());
        loop {
            let mut next = set.clone();
            for a in &set {
                for b in &set {
                    next.push(m.add(a, b));
                }
                for r in 0..m.ring().modulus() {
                    next.push(m.scalar_mul(r, a));
                }
            }
            next.sort();
            next.dedup();
            if next == set {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn generate_examples() {
        let m1 = module(6, &[6]);
        let two = generate(&m1, &[el(&[2])]).unwrap();
        assert_eq!(two.members(), closure_oracle(&m1, &[el(&[2])]));
        assert_eq!(two.members(), vec![el(&[0]), el(&[2]), el(&[4])]);
        assert_eq!(generate(&m1, &[]).unwrap(), Submodule::zero(&m1));
        let m3 = module(2, &[2, 2]);
        assert_eq!(
            generate(&m3, &[el(&[1, 0]), el(&[0, 1])]).unwrap(),
            Submodule::whole(&m3)
        );
        assert!(generate(&m3, &[el(&[2, 0])]).is_err());
    }

    #[test]
    fn submodule_counts() {
        assert_eq!(all_submodules(&module(6, &[6])).unwrap().len(), 4);
        assert_eq!(all_submodules(&module(4, &[4])).unwrap().len(), 3);
        assert_eq!(all_submodules(&module(2, &[2, 2])).unwrap().len(), 5);
        assert_eq!(all_submodules(&module(5, &[])).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_matches_subset_brute_force_on_small_groups() {
        // all subsets of a ≤ 8 element group that happen to be submodules
        for (n, orders) in [
            (6, vec![6]),
            (4, vec![2, 4]),
            (2, vec![2, 2, 2]),
            (8, vec![8]),
        ] {
            let m = module(n, &orders);
            let lat = all_submodules(&m).unwrap();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << m.order()) {
                let set =
                    BitSet::from_indices(m.order(), (0..m.order()).filter(|i| mask >> i & 1 == 1));
                if Submodule::from_elements(&m, set.clone()).is_ok() {
                    brute.push(set);
                }
            }
            brute.sort();
            let ours: Vec<BitSet> = lat.ids().map(|i| lat.elements(i).clone()).collect();
            assert_eq!(ours, brute, "{m}");
        }
    }

    #[test]
    fn sum_and_intersection_examples() {
        let m1 = module(6, &[6]);
        let two = generate(&m1, &[el(&[2])]).unwrap();
        let three = generate(&m1, &[el(&[3])]).unwrap();
        assert_eq!(sum(&two, &three).unwrap(), Submodule::whole(&m1));
        assert_eq!(sum(&two, &Submodule::zero(&m1)).unwrap(), two);
        assert_eq!(intersect(&two, &three).unwrap(), Submodule::zero(&m1));
        assert_eq!(intersect(&two, &Submodule::whole(&m1)).unwrap(), two);
        assert_eq!(intersect(&two, &two).unwrap(), two);

        let m3 = module(2, &[2, 2]);
        let l1 = generate(&m3, &[el(&[1, 0])]).unwrap();
        let l2 = generate(&m3, &[el(&[0, 1])]).unwrap();
        assert_eq!(sum(&l1, &l2).unwrap(), Submodule::whole(&m3));

        let other = module(6, &[3]);
        assert_eq!(
            sum(&two, &Submodule::zero(&other)),
            Err(Error::ParentMismatch)
        );
    }

    #[test]
    fn annihilator_examples_against_brute_force() {
        let brute = |n: &Submodule| -> u64 {
            let m = n.parent();
            (0..m.ring().modulus())
                .filter(|&r| m.elements().all(|x| n.contains(&m.scalar_mul(r, &x))))
                .min_by_key(|&r| if r == 0 { u64::MAX } else { r })
                .map(|r| if r == 0 { m.ring().modulus() } else { r })
                .unwrap()
        };
        let m1 = module(6, &[6]);
        let two = generate(&m1, &[el(&[2])]).unwrap();
        assert_eq!(annihilator(&two).generator(), 2);
        assert_eq!(brute(&two), 2);
        assert!(annihilator(&Submodule::whole(&m1)).is_whole_ring());
        let m2 = module(4, &[4]);
        assert_eq!(annihilator(&Submodule::zero(&m2)).generator(), 4);
        assert_eq!(brute(&Submodule::zero(&m2)), 4);
    }

    #[test]
    fn from_elements_rejects_non_submodules() {
        let m1 = module(6, &[6]);
        assert!(Submodule::from_elements(&m1, BitSet::from_indices(6, [0, 2])).is_err());
        assert!(Submodule::from_elements(&m1, BitSet::from_indices(6, [2, 4])).is_err());
        assert!(Submodule::from_elements(&m1, BitSet::from_indices(6, [0, 3])).is_ok());
    }

    #[test]
    fn radical_examples() {
        let l1 = all_submodules(&module(6, &[6])).unwrap();
        assert_eq!(l1.radical(l1.zero()), l1.zero());
        let l2 = all_submodules(&module(4, &[4])).unwrap();
        let two = l2.generate(&[el(&[2])]).unwrap();
        assert_eq!(l2.radical(l2.zero()), two);
        assert_eq!(l2.radical(l2.top()), l2.top());
    }

    #[test]
    fn caps_are_enforced() {
        let m = module(2, &[2; 9]);
        assert!(matches!(
            all_submodules(&m),
            Err(Error::CapExceeded { cap: 256, .. })
        ));
        let limits = Limits {
            max_submodules: 4,
            ..Limits::default()
        };
        assert!(matches!(
            SubmoduleLattice::build(&module(2, &[2, 2]), limits, None),
            Err(Error::CapExceeded { cap: 4, .. })
        ));
    }

    #[test]
    fn canonical_labels() {
        let l = all_submodules(&module(6, &[6])).unwrap();
        let labels: Vec<&str> = l.ids().map(|i| l.label(i)).collect();
        assert_eq!(labels, vec!["⟨⟩", "⟨3⟩", "⟨2⟩", "⟨1⟩"]);
        let l3 = all_submodules(&module(2, &[2, 2])).unwrap();
        assert_eq!(l3.label(l3.top()), "⟨(0,1),(1,0)⟩");
        let l4 = all_submodules(&module(4, &[2, 4])).unwrap();
        assert_eq!(l4.label(l4.top()), "⟨(0,1),(1,0)⟩");
        for i in l4.ids() {
            let gens: Vec<Element> = l4
                .min_generators(i)
                .into_iter()
                .map(|g| l4.module().element_at(g))
                .collect();
            assert_eq!(l4.generate(&gens).unwrap(), i);
        }
    }

    #[test]
    fn lattice_tables_agree_with_element_level_operations() {
        let l = all_submodules(&module(12, &[2, 6])).unwrap();
        for a in l.ids() {
            for b in l.ids() {
                let s = sum(&l.submodule(a), &l.submodule(b)).unwrap();
                assert_eq!(l.id_of_submodule(&s).unwrap(), l.join(a, b));
                let i = intersect(&l.submodule(a), &l.submodule(b)).unwrap();
                assert_eq!(l.id_of_submodule(&i).unwrap(), l.meet(a, b));
            }
        }
    }
}
