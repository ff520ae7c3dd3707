//! Structure spaces: a class D(M) topologized by the closed subbasis {C(N) : N ∈ S(M)}.
//!
//! A finite space generated by a closed subbasis is Alexandrov: the closure of a point
//! is the intersection of the subbasis sets containing it, and the closure of any set
//! is the union of the closures of its points. Everything below is built on that.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::classes::ClassName;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::submodule::{SubId, SubmoduleLattice};

/// A set of points of a structure space, indexed by point position.
pub type PointSet = BitSet;

/// One distinct subbasis closed set together with every N having C(N) equal to it.
#[derive(Debug, Clone)]
pub struct SubbasisSet {
    pub set: PointSet,
    pub witnesses: Vec<SubId>,
}

#[derive(Debug, Clone)]
pub struct StructureSpace<'a> {
    lattice: &'a SubmoduleLattice,
    class: Option<ClassName>,
    points: Vec<SubId>,
    point_of: Vec<Option<usize>>,
    subbasis: Vec<SubbasisSet>,
    subbasis_index: HashMap<PointSet, usize>,
    c_of: Vec<usize>,
    point_closures: Vec<PointSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub t0: bool,
    pub t1: bool,
    pub sober: bool,
    /// Whether sobriety was decided over the full closed-set lattice.
    pub sober_exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub quasi_compact: bool,
    pub sober: bool,
    pub open_basis: bool,
    pub spectral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irreducibility {
    /// F is not a union of two strictly smaller closed subsets.
    pub irreducible: bool,
    /// Points x ∈ F with closure{x} = F.
    pub generics: Vec<usize>,
}

impl Irreducibility {
    /// The decomposition criterion and the generic-point criterion agree.
    pub fn criteria_agree(&self) -> bool {
        self.irreducible == !self.generics.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopModuleReport {
    pub is_top: bool,
    /// First pair (N, N′) whose C(N) ∪ C(N′) is no C(N″).
    pub violation: Option<(SubId, SubId)>,
}

/// The structure space of class `class` over the module of `lattice`.
pub fn build_space(lattice: &SubmoduleLattice, class: ClassName) -> StructureSpace<'_> {
    StructureSpace::build(lattice, class)
}

impl<'a> StructureSpace<'a> {
    pub fn build(lattice: &'a SubmoduleLattice, class: ClassName) -> Self {
        Self::from_points(lattice, lattice.class_members(class), Some(class))
    }

    /// A space on an arbitrary set of submodules, e.g. all of S(M).
    pub fn from_points(
        lattice: &'a SubmoduleLattice,
        members: &BitSet,
        class: Option<ClassName>,
    ) -> Self {
        let points: Vec<SubId> = members.iter().collect();
        let np = points.len();
        let mut point_of = vec![None; lattice.len()];
        for (p, &s) in points.iter().enumerate() {
            point_of[s] = Some(p);
        }
        let reversed = lattice.fault() == Some(Fault::SubbasisReversed);

        let mut subbasis: Vec<SubbasisSet> = Vec::new();
        let mut subbasis_index: HashMap<PointSet, usize> = HashMap::new();
        let mut c_of = Vec::with_capacity(lattice.len());
        for n in lattice.ids() {
            let set = BitSet::from_indices(
                np,
                points.iter().enumerate().filter_map(|(p, &l)| {
                    let hit = if reversed {
                        lattice.leq(l, n)
                    } else {
                        lattice.leq(n, l)
                    };
                    hit.then_some(p)
                }),
            );
            let idx = *subbasis_index.entry(set.clone()).or_insert_with(|| {
                subbasis.push(SubbasisSet {
                    set,
                    witnesses: Vec::new(),
                });
                subbasis.len() - 1
            });
            subbasis[idx].witnesses.push(n);
            c_of.push(idx);
        }

        let union_fault = lattice.fault() == Some(Fault::PointClosureUnion);
        let point_closures = (0..np)
            .map(|p| {
                let containing = subbasis.iter().filter(|s| s.set.contains(p));
                if union_fault {
                    containing.fold(BitSet::new(np), |acc, s| acc.union(&s.set))
                } else {
                    containing.fold(BitSet::full(np), |acc, s| acc.intersection(&s.set))
                }
            })
            .collect();

        Self {
            lattice,
            class,
            points,
            point_of,
            subbasis,
            subbasis_index,
            c_of,
            point_closures,
        }
    }

    pub fn lattice(&self) -> &'a SubmoduleLattice {
        self.lattice
    }

    pub fn class(&self) -> Option<ClassName> {
        self.class
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SubId] {
        &self.points
    }

    pub fn point_sub(&self, p: usize) -> SubId {
        self.points[p]
    }

    pub fn point_of(&self, sub: SubId) -> Option<usize> {
        self.point_of[sub]
    }

    pub fn label(&self, p: usize) -> &str {
        self.lattice.label(self.points[p])
    }

    pub fn all(&self) -> PointSet {
        BitSet::full(self.len())
    }

    pub fn empty(&self) -> PointSet {
        BitSet::new(self.len())
    }

    pub fn subbasis(&self) -> &[SubbasisSet] {
        &self.subbasis
    }

    /// C(N) for any N ∈ S(M).
    pub fn c_set(&self, n: SubId) -> &PointSet {
        &self.subbasis[self.c_of[n]].set
    }

    pub fn c_points(&self, n: SubId) -> impl Iterator<Item = usize> + '_ {
        self.c_set(n).iter()
    }

    pub fn is_subbasis_set(&self, set: &PointSet) -> bool {
        self.subbasis_index.contains_key(set)
    }

    /// Witnesses N with C(N) = `set`, if any.
    pub fn witnesses_of(&self, set: &PointSet) -> Option<&[SubId]> {
        self.subbasis_index
            .get(set)
            .map(|&i| self.subbasis[i].witnesses.as_slice())
    }

    pub fn point_closure(&self, p: usize) -> &PointSet {
        &self.point_closures[p]
    }

    /// Points `set` as submodule ids.
    pub fn subs_of(&self, set: &PointSet) -> Vec<SubId> {
        set.iter().map(|p| self.points[p]).collect()
    }

    pub fn closure(&self, a: &PointSet) -> PointSet {
        a.iter().fold(self.empty(), |mut acc, p| {
            acc.union_with(&self.point_closures[p]);
            acc
        })
    }

    pub fn is_closed(&self, a: &PointSet) -> bool {
        &self.closure(a) == a
    }

    pub fn irreducible_and_generics(&self, f: &PointSet) -> Result<Irreducibility> {
        if f.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if !self.is_closed(f) {
            return Err(Error::NotClosed);
        }
        let generics: Vec<usize> = f.iter().filter(|&x| &self.point_closures[x] == f).collect();

        // Largest closed subset of F avoiding x: drop every z whose closure reaches x.
        // F splits into two proper closed parts iff two of these already cover F.
        let avoiding: Vec<PointSet> = f
            .iter()
            .map(|x| {
                let mut a = f.clone();
                for z in f.iter() {
                    if self.point_closures[z].contains(x) {
                        a.remove(z);
                    }
                }
                a
            })
            .collect();
        let reducible = avoiding
            .iter()
            .enumerate()
            .any(|(i, a)| avoiding[i + 1..].iter().any(|b| &a.union(b) == f));
        Ok(Irreducibility {
            irreducible: !reducible,
            generics,
        })
    }

    /// Every closed set, as unions of point closures; `None` above `cap`.
    pub fn closed_sets(&self, cap: usize) -> Option<Vec<PointSet>> {
        let mut seen: HashSet<PointSet> = HashSet::from([self.empty()]);
        let mut order = vec![self.empty()];
        let mut queue = VecDeque::from([self.empty()]);
        while let Some(s) = queue.pop_front() {
            for p in 0..self.len() {
                if s.contains(p) {
                    continue;
                }
                let t = s.union(&self.point_closures[p]);
                if seen.insert(t.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    order.push(t.clone());
                    queue.push_back(t);
                }
            }
        }
        order.sort();
        Some(order)
    }

    pub fn separation_report(&self) -> SeparationReport {
        let distinct: HashSet<&PointSet> = self.point_closures.iter().collect();
        let t0 = distinct.len() == self.len();
        let t1 = self.point_closures.iter().all(|c| c.len() == 1);

        let unique_generic = |f: &PointSet| match self.irreducible_and_generics(f) {
            Ok(irr) => !irr.irreducible || irr.generics.len() == 1,
            Err(_) => false,
        };
        let cap = self.lattice.limits().max_closed_sets;
        let (sober, sober_exhaustive) = match self.closed_sets(cap) {
            Some(closed) => (
                closed.iter().filter(|f| !f.is_empty()).all(unique_generic),
                true,
            ),
            // irreducible closed sets of a finite space are exactly the point closures
            None => (distinct.into_iter().all(unique_generic), false),
        };
        SeparationReport {
            t0,
            t1,
            sober,
            sober_exhaustive,
        }
    }

    /// Components of the specialization graph, each as a point set.
    pub fn components(&self) -> Vec<PointSet> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..n {
            for y in self.point_closures[x].iter() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        let mut groups: Vec<(usize, PointSet)> = Vec::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, set)) => {
                    set.insert(x);
                }
                None => groups.push((r, BitSet::from_indices(n, [x]))),
            }
        }
        groups.into_iter().map(|(_, s)| s).collect()
    }

    /// No proper nonempty clopen subset; the empty space counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.lattice.fault() == Some(Fault::ConnectedAlways) {
            return true;
        }
        self.components().len() <= 1
    }

    /// F equals the union of the subbasis sets it contains.
    pub fn is_subbasis_expressible(&self, f: &PointSet) -> bool {
        let cover = self
            .subbasis
            .iter()
            .filter(|s| s.set.is_subset(f))
            .fold(self.empty(), |acc, s| acc.union(&s.set));
        &cover == f
    }

    /// A partition X = A ⊔ B into nonempty unions of subbasis sets, if the space is disconnected.
    pub fn strongly_disconnects(&self) -> Option<(PointSet, PointSet)> {
        if self.is_empty() {
            return None;
        }
        // grow A from one point closure by absorbing every point closure it meets
        let mut a = self.point_closures[0].clone();
        loop {
            let before = a.len();
            for c in &self.point_closures {
                if !c.is_disjoint(&a) {
                    a.union_with(c);
                }
            }
            if a.len() == before {
                break;
            }
        }
        let b = a.complement();
        let valid = !b.is_empty()
            && self.is_closed(&a)
            && self.is_closed(&b)
            && self.is_subbasis_expressible(&a)
            && self.is_subbasis_expressible(&b);
        valid.then_some((a, b))
    }

    /// x ⤳ y iff y lies in the closure of {x}; reflexive pairs included.
    pub fn specialization_preorder(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.point_closures[x].iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn spectral_report(&self) -> SpectralReport {
        // a finite space is quasi-compact
        let quasi_compact = true;
        let sober = self.separation_report().sober;
        // every point closure is a subbasis set, so the basic closed sets are all closed
        // sets and their complements, all quasi-compact, are closed under intersection
        let open_basis = self.point_closures.iter().all(|c| self.is_subbasis_set(c));
        SpectralReport {
            quasi_compact,
            sober,
            open_basis,
            spectral: quasi_compact && sober && open_basis,
        }
    }

    pub fn is_spectral(&self) -> bool {
        self.spectral_report().spectral
    }
}

/// Whether every union C(N) ∪ C(N′) is again some C(N″).
pub fn is_top_module(lattice: &SubmoduleLattice, class: ClassName) -> TopModuleReport {
    let space = StructureSpace::build(lattice, class);
    for a in lattice.ids() {
        for b in a + 1..lattice.len() {
            let u = space.c_set(a).union(space.c_set(b));
            if !space.is_subbasis_set(&u) {
                return TopModuleReport {
                    is_top: false,
                    violation: Some((a, b)),
                };
            }
        }
    }
    TopModuleReport {
        is_top: true,
        violation: None,
    }
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

    fn sub(l: &SubmoduleLattice, g: &[u64]) -> SubId {
        l.generate(&[Element::new(g.to_vec())]).unwrap()
    }

    fn set_of(space: &StructureSpace<'_>, subs: &[SubId]) -> PointSet {
        BitSet::from_indices(
            space.len(),
            subs.iter().map(|&s| space.point_of(s).unwrap()),
        )
    }

    /// Closed sets by brute force: all subsets closed under specialization, computed from
    /// the raw subbasis by taking finite unions of finite intersections.
    fn closed_sets_oracle(space: &StructureSpace<'_>) -> Vec<PointSet> {
        let mut inters: HashSet<PointSet> =
            space.subbasis().iter().map(|s| s.set.clone()).collect();
        inters.insert(space.all());
        loop {
            let v: Vec<PointSet> = inters.iter().cloned().collect();
            let before = inters.len();
            for a in &v {
                for b in &v {
                    inters.insert(a.intersection(b));
                }
            }
            if inters.len() == before {
                break;
            }
        }
        let mut closed: HashSet<PointSet> = inters.clone();
        closed.insert(space.empty());
        loop {
            let v: Vec<PointSet> = closed.iter().cloned().collect();
            let before = closed.len();
            for a in &v {
                for b in &v {
                    closed.insert(a.union(b));
                }
            }
            if closed.len() == before {
                break;
            }
        }
        let mut out: Vec<PointSet> = closed.into_iter().collect();
        out.sort();
        out
    }

    #[test]
    fn build_examples() {
        let l1 = lattice(6, &[6]);
        let s = StructureSpace::build(&l1, ClassName::Prime);
        assert_eq!(s.len(), 2);
        let mut sets: Vec<Vec<SubId>> = s.subbasis().iter().map(|b| s.subs_of(&b.set)).collect();
        sets.sort();
        let (two, three) = (sub(&l1, &[2]), sub(&l1, &[3]));
        let mut expected = vec![vec![], vec![two], vec![three], {
            let mut v = vec![two, three];
            v.sort();
            v
        }];
        expected.sort();
        assert_eq!(sets, expected);

        let l2 = lattice(4, &[4]);
        let s2 = StructureSpace::build(&l2, ClassName::Proper);
        assert_eq!(s2.len(), 2);
        assert_eq!(s2.subbasis().len(), 3);

        let l0 = lattice(5, &[]);
        assert!(StructureSpace::build(&l0, ClassName::Proper).is_empty());
    }

    #[test]
    fn closure_and_closedness_examples() {
        let l2 = lattice(4, &[4]);
        let s2 = StructureSpace::build(&l2, ClassName::Proper);
        let zero = set_of(&s2, &[l2.zero()]);
        assert_eq!(s2.closure(&zero), s2.all());
        assert!(s2.closure(&s2.empty()).is_empty());
        assert!(!s2.is_closed(&zero));
        assert!(s2.is_closed(&s2.all()));

        let l1 = lattice(6, &[6]);
        let s1 = StructureSpace::build(&l1, ClassName::Prime);
        let two = set_of(&s1, &[sub(&l1, &[2])]);
        assert_eq!(s1.closure(&two), two);
        assert!(s1.is_closed(&s1.all()));
    }

    #[test]
    fn closed_sets_match_unions_of_intersections() {
        for (n, orders, c) in [
            (6, vec![6], ClassName::Prime),
            (2, vec![2, 2], ClassName::Proper),
            (4, vec![2, 4], ClassName::Primary),
            (12, vec![12], ClassName::Irreducible),
        ] {
            let l = lattice(n, &orders);
            let s = StructureSpace::build(&l, c);
            assert_eq!(s.closed_sets(1 << 16).unwrap(), closed_sets_oracle(&s));
        }
    }

    #[test]
    fn irreducibility_examples() {
        let l2 = lattice(4, &[4]);
        let s2 = StructureSpace::build(&l2, ClassName::Proper);
        let irr = s2.irreducible_and_generics(&s2.all()).unwrap();
        assert!(irr.irreducible);
        assert_eq!(irr.generics, vec![s2.point_of(l2.zero()).unwrap()]);

        let l1 = lattice(6, &[6]);
        let s1 = StructureSpace::build(&l1, ClassName::Prime);
        let irr = s1.irreducible_and_generics(&s1.all()).unwrap();
        assert!(!irr.irreducible);
        assert!(irr.generics.is_empty());
        let single = set_of(&s1, &[sub(&l1, &[3])]);
        let irr = s1.irreducible_and_generics(&single).unwrap();
        assert!(irr.irreducible);
        assert_eq!(irr.generics, single.to_vec());

        assert_eq!(
            s2.irreducible_and_generics(&set_of(&s2, &[l2.zero()])),
            Err(Error::NotClosed)
        );
        assert_eq!(
            s2.irreducible_and_generics(&s2.empty()),
            Err(Error::EmptyPointSet)
        );
    }

    #[test]
    fn separation_examples() {
        let l1 = lattice(6, &[6]);
        let r = StructureSpace::build(&l1, ClassName::Prime).separation_report();
        assert!(r.t0 && r.t1 && r.sober);
        let l2 = lattice(4, &[4]);
        let r = StructureSpace::build(&l2, ClassName::Proper).separation_report();
        assert!(r.t0 && !r.t1 && r.sober);
        let l3 = lattice(2, &[2, 2]);
        let s3 = StructureSpace::build(&l3, ClassName::Prime);
        let r = s3.separation_report();
        assert!(r.t0 && !r.t1 && r.sober && r.sober_exhaustive);
        assert_eq!(s3.point_closure(s3.point_of(l3.zero()).unwrap()).len(), 4);
    }

    #[test]
    fn connectedness_examples() {
        let l2 = lattice(4, &[4]);
        let s = StructureSpace::build(&l2, ClassName::Proper);
        assert!(s.is_connected());
        assert!(s.strongly_disconnects().is_none());

        let l1 = lattice(6, &[6]);
        let s = StructureSpace::build(&l1, ClassName::Prime);
        assert!(!s.is_connected());
        let (a, b) = s.strongly_disconnects().unwrap();
        assert_eq!(s.subs_of(&a), vec![sub(&l1, &[3])]);
        assert_eq!(s.subs_of(&b), vec![sub(&l1, &[2])]);
        assert_eq!(&a, s.c_set(sub(&l1, &[3])));

        let s = StructureSpace::build(&l2, ClassName::Prime);
        assert_eq!(s.len(), 1);
        assert!(s.is_connected());

        let l0 = lattice(5, &[]);
        let s = StructureSpace::build(&l0, ClassName::Proper);
        assert!(s.is_connected() && s.strongly_disconnects().is_none());
    }

    #[test]
    fn top_module_examples() {
        let l1 = lattice(6, &[6]);
        assert!(is_top_module(&l1, ClassName::Prime).is_top);
        let l3 = lattice(2, &[2, 2]);
        let r = is_top_module(&l3, ClassName::Prime);
        assert!(!r.is_top);
        let (a, b) = r.violation.unwrap();
        assert_eq!((l3.size(a), l3.size(b)), (2, 2));
        let l2 = lattice(4, &[4]);
        assert!(is_top_module(&l2, ClassName::Prime).is_top);
    }

    #[test]
    fn spectral_examples() {
        let l2 = lattice(4, &[4]);
        assert!(StructureSpace::build(&l2, ClassName::Proper).is_spectral());
        let l3 = lattice(2, &[2, 2]);
        assert!(StructureSpace::build(&l3, ClassName::Prime).is_spectral());
        let l0 = lattice(5, &[]);
        let s = StructureSpace::build(&l0, ClassName::Proper);
        assert!(s.is_spectral());
        let r = s.separation_report();
        assert!(r.t0 && r.t1 && r.sober);
    }

    #[test]
    fn specialization_examples() {
        let l2 = lattice(4, &[4]);
        let s = StructureSpace::build(&l2, ClassName::Proper);
        let z = s.point_of(l2.zero()).unwrap();
        let two = s.point_of(sub(&l2, &[2])).unwrap();
        let mut rel = s.specialization_preorder();
        rel.sort();
        let mut expected = vec![(z, z), (z, two), (two, two)];
        expected.sort();
        assert_eq!(rel, expected);

        let l1 = lattice(6, &[6]);
        let s = StructureSpace::build(&l1, ClassName::Prime);
        assert!(s.specialization_preorder().iter().all(|(x, y)| x == y));

        let l3 = lattice(2, &[2, 2]);
        let s = StructureSpace::build(&l3, ClassName::Prime);
        let rel = s.specialization_preorder();
        assert_eq!(rel.len(), 4 + 3);
        let z = s.point_of(l3.zero()).unwrap();
        assert_eq!(rel.iter().filter(|(x, y)| *x == z && *y != z).count(), 3);
    }

    #[test]
    fn omega_examples() {
        let l2 = lattice(4, &[4]);
        let s = StructureSpace::build(&l2, ClassName::Prime);
        assert_eq!(l2.omega(l2.zero(), &s).unwrap(), sub(&l2, &[2]));
        assert_eq!(l2.omega(l2.top(), &s).unwrap(), l2.top());
        for &p in s.points() {
            assert_eq!(l2.omega(p, &s).unwrap(), p);
        }
        let other = lattice(6, &[6]);
        let s_other = StructureSpace::build(&other, ClassName::Prime);
        assert_eq!(l2.omega(0, &s_other), Err(Error::ParentMismatch));
    }
}
