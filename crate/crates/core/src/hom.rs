//! Module homomorphisms and the induced maps φ_! : D(M′) → D(M), N′ ↦ φ⁻¹(N′).

use serde::Serialize;

use crate::bitset::BitSet;
use crate::classes::ClassName;
use crate::error::{Error, Result};
use crate::module::{Element, Module};
use crate::submodule::{SubId, Submodule, SubmoduleLattice};
use crate::topology::{PointSet, StructureSpace};

/// φ : M → M′ given by the images of the standard generators of M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    src: Module,
    dst: Module,
    images: Vec<Element>,
    map: Vec<usize>,
}

pub fn make_hom(src: &Module, dst: &Module, images: Vec<Element>) -> Result<Hom> {
    Hom::new(src, dst, images)
}

impl Hom {
    pub fn new(src: &Module, dst: &Module, images: Vec<Element>) -> Result<Self> {
        if src.ring() != dst.ring() {
            return Err(Error::RingMismatch(
                src.ring().modulus(),
                dst.ring().modulus(),
            ));
        }
        if images.len() != src.rank() {
            return Err(Error::ImageCountMismatch {
                expected: src.rank(),
                got: images.len(),
            });
        }
        for (i, (img, &d)) in images.iter().zip(src.orders()).enumerate() {
            dst.check(img)?;
            if dst.scalar_mul(d, img) != dst.zero() {
                return Err(Error::IllDefinedHom {
                    generator: i,
                    order: d,
                    image: img.to_string(),
                });
            }
        }
        let map = src
            .elements()
            .map(|x| {
                let y = x
                    .coords
                    .iter()
                    .zip(&images)
                    .fold(dst.zero(), |acc, (&c, img)| {
                        dst.add(&acc, &dst.scalar_mul(c, img))
                    });
                dst.index_of(&y)
            })
            .collect();
        Ok(Self {
            src: src.clone(),
            dst: dst.clone(),
            images,
            map,
        })
    }

    pub fn identity(m: &Module) -> Self {
        Self::new(m, m, (0..m.rank()).map(|i| m.generator(i)).collect())
            .expect("identity is well defined")
    }

    pub fn zero(src: &Module, dst: &Module) -> Result<Self> {
        Self::new(src, dst, vec![dst.zero(); src.rank()])
    }

    pub fn src(&self) -> &Module {
        &self.src
    }

    pub fn dst(&self) -> &Module {
        &self.dst
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.dst.element_at(self.map[self.src.index_of(x)])
    }

    pub fn apply_idx(&self, x: usize) -> usize {
        self.map[x]
    }

    /// φ⁻¹ of an element set of M′.
    pub fn preimage_set(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.src.order(),
            (0..self.src.order()).filter(|&x| set.contains(self.map[x])),
        )
    }

    /// φ of an element set of M.
    pub fn image_set(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(self.dst.order(), set.iter().map(|x| self.map[x]))
    }

    pub fn preimage(&self, n: &Submodule) -> Result<Submodule> {
        if n.parent() != &self.dst {
            return Err(Error::ParentMismatch);
        }
        Ok(Submodule::from_trusted(
            &self.src,
            self.preimage_set(n.elements()),
        ))
    }

    pub fn image_of(&self, n: &Submodule) -> Result<Submodule> {
        if n.parent() != &self.src {
            return Err(Error::ParentMismatch);
        }
        Ok(Submodule::from_trusted(
            &self.dst,
            self.image_set(n.elements()),
        ))
    }

    pub fn kernel(&self) -> Submodule {
        self.preimage(&Submodule::zero(&self.dst))
            .expect("zero submodule lives in the target")
    }

    pub fn image(&self) -> Submodule {
        self.image_of(&Submodule::whole(&self.src))
            .expect("whole module lives in the source")
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.dst.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }
}

/// Quotient M/N re-presented as a product of cyclic groups, with the canonical projection.
pub fn quotient(module: &Module, n: &Submodule) -> Result<(Module, Hom)> {
    if n.parent() != module {
        return Err(Error::ParentMismatch);
    }
    let order = module.order();
    let nset = n.elements();
    // coset representative = least index in the coset
    let rep: Vec<usize> = (0..order)
        .map(|x| nset.iter().map(|k| module.add_idx(x, k)).min().unwrap())
        .collect();
    let mut reps: Vec<usize> = rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let q_order = reps.len();

    let coset_order = |x: usize| -> u64 {
        (1..=module.exponent())
            .find(|&t| nset.contains(module.scalar_idx(t, x)))
            .unwrap_or(1)
    };
    let mut candidates: Vec<(u64, usize)> = reps
        .iter()
        .map(|&x| (coset_order(x), x))
        .filter(|&(o, _)| o > 1)
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut zero_span = BitSet::new(order);
    zero_span.insert(rep[0]);
    let gens = decompose(
        module,
        &rep,
        &candidates,
        zero_span,
        q_order,
        &mut Vec::new(),
    )
    .expect("every finite abelian group is a product of cyclic groups");

    let orders: Vec<u64> = gens.iter().map(|&(o, _)| o).collect();
    let target = Module::new(module.ring(), orders.clone())?;

    // coordinates of each coset in the chosen basis
    let mut coords_of = vec![None; order];
    for t in target.elements() {
        let x = t
            .coords
            .iter()
            .zip(&gens)
            .fold(0usize, |acc, (&c, &(_, g))| {
                module.add_idx(acc, module.scalar_idx(c, g))
            });
        coords_of[rep[x]] = Some(t);
    }
    let images = (0..module.rank())
        .map(|i| {
            coords_of[rep[module.index_of(&module.generator(i))]]
                .clone()
                .expect("every coset has coordinates")
        })
        .collect();
    let proj = Hom::new(module, &target, images)?;
    Ok((target, proj))
}

/// Backtracking search for independent cyclic cosets spanning the quotient.
fn decompose(
    module: &Module,
    rep: &[usize],
    candidates: &[(u64, usize)],
    span: BitSet,
    q_order: usize,
    chosen: &mut Vec<(u64, usize)>,
) -> Option<Vec<(u64, usize)>> {
    let span_size = span.len();
    if span_size == q_order {
        return Some(chosen.clone());
    }
    for &(o, g) in candidates {
        // ⟨g⟩ must meet the current span trivially
        let independent = (1..o).all(|t| !span.contains(rep[module.scalar_idx(t, g)]));
        if !independent || span_size * o as usize > q_order {
            continue;
        }
        let mut next = BitSet::new(rep.len());
        for s in span.iter() {
            for t in 0..o {
                next.insert(rep[module.add_idx(s, module.scalar_idx(t, g))]);
            }
        }
        chosen.push((o, g));
        if let Some(found) = decompose(module, rep, candidates, next, q_order, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub holds: bool,
    /// A point N′ of D(M′) whose preimage leaves D(M).
    pub witness: Option<SubId>,
}

fn check_endpoints(hom: &Hom, src: &StructureSpace<'_>, dst: &StructureSpace<'_>) -> Result<()> {
    if src.lattice().module() != hom.src() || dst.lattice().module() != hom.dst() {
        return Err(Error::ParentMismatch);
    }
    Ok(())
}

fn preimage_id(hom: &Hom, src: &SubmoduleLattice, dst: &SubmoduleLattice, n: SubId) -> SubId {
    src.id_of(&hom.preimage_set(dst.elements(n)))
        .expect("preimages of submodules are submodules")
}

fn image_id(hom: &Hom, src: &SubmoduleLattice, dst: &SubmoduleLattice, n: SubId) -> SubId {
    dst.id_of(&hom.image_set(src.elements(n)))
        .expect("images of submodules are submodules")
}

/// Every φ⁻¹(N′) with N′ ∈ D(M′) lies in D(M); vacuous when D(M′) is empty.
pub fn has_contraction_property(
    hom: &Hom,
    src: &StructureSpace<'_>,
    dst: &StructureSpace<'_>,
) -> Result<Contraction> {
    check_endpoints(hom, src, dst)?;
    let witness = dst.points().iter().copied().find(|&n| {
        src.point_of(preimage_id(hom, src.lattice(), dst.lattice(), n))
            .is_none()
    });
    Ok(Contraction {
        holds: witness.is_none(),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiShriek {
    /// Point of D(M) for each point of D(M′).
    pub point_map: Vec<usize>,
    /// φ_!⁻¹(C(N)) = C(⟨φ(N)⟩) for every N ∈ S(M).
    pub subbasis_identity: bool,
    /// Preimages of all subbasis closed sets are closed.
    pub continuous: bool,
}

impl PhiShriek {
    pub fn preimage(&self, dst: &StructureSpace<'_>, set: &PointSet) -> PointSet {
        BitSet::from_indices(
            dst.len(),
            (0..dst.len()).filter(|&p| set.contains(self.point_map[p])),
        )
    }

    pub fn image(&self, src: &StructureSpace<'_>, set: &PointSet) -> PointSet {
        BitSet::from_indices(src.len(), set.iter().map(|p| self.point_map[p]))
    }
}

/// The induced point map; refuses when the contraction property fails.
pub fn phi_shriek(
    hom: &Hom,
    src: &StructureSpace<'_>,
    dst: &StructureSpace<'_>,
) -> Result<PhiShriek> {
    let c = has_contraction_property(hom, src, dst)?;
    if let Some(w) = c.witness {
        return Err(Error::ContractionFails {
            witness: dst.lattice().label(w).to_string(),
        });
    }
    let (sl, dl) = (src.lattice(), dst.lattice());
    let point_map: Vec<usize> = dst
        .points()
        .iter()
        .map(|&n| src.point_of(preimage_id(hom, sl, dl, n)).unwrap())
        .collect();
    let mut shriek = PhiShriek {
        point_map,
        subbasis_identity: true,
        continuous: true,
    };
    shriek.subbasis_identity = sl.ids().all(|n| {
        let pulled = shriek.preimage(dst, src.c_set(n));
        &pulled == dst.c_set(image_id(hom, sl, dl, n))
    });
    shriek.continuous = src
        .subbasis()
        .iter()
        .all(|s| dst.is_closed(&shriek.preimage(dst, &s.set)));
    Ok(shriek)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConmapReport {
    pub surjective: bool,
    /// φ(φ⁻¹(N′)) = N′ for all N′ ∈ D(M′); surjective maps only.
    pub section_identity: Option<bool>,
    /// φ_!(D(M′)) = C(ker φ); surjective maps only.
    pub image_is_kernel_closed_set: Option<bool>,
    /// φ_! : D(M′) → C(ker φ) is a homeomorphism; surjective maps only.
    pub homeomorphism: Option<bool>,
    /// closure(φ_!(D(M′))) = C(ker φ).
    pub closure_of_image_is_kernel_closed_set: bool,
    pub dense: bool,
    /// ker φ ⊆ ⋂ D(M).
    pub kernel_below_all_points: bool,
}

impl ConmapReport {
    pub fn density_criterion_holds(&self) -> bool {
        self.dense == self.kernel_below_all_points
    }

    pub fn all_hold(&self) -> bool {
        self.section_identity != Some(false)
            && self.image_is_kernel_closed_set != Some(false)
            && self.homeomorphism != Some(false)
            && self.closure_of_image_is_kernel_closed_set
            && self.density_criterion_holds()
    }
}

/// Is `f` a homeomorphism from `dst` onto the closed subspace `onto` of `src`?
fn homeomorphic_onto(
    f: &PhiShriek,
    src: &StructureSpace<'_>,
    dst: &StructureSpace<'_>,
    onto: &PointSet,
) -> bool {
    let image = f.image(src, &dst.all());
    if image.len() != dst.len() || &image != onto {
        return false;
    }
    let cap = src.lattice().limits().max_closed_sets;
    match (dst.closed_sets(cap), src.closed_sets(cap)) {
        (Some(dst_closed), Some(src_closed)) => {
            dst_closed.iter().all(|k| src.is_closed(&f.image(src, k)))
                && src_closed
                    .iter()
                    .all(|c| dst.is_closed(&f.preimage(dst, c)))
        }
        // Alexandrov spaces: a bijection is a homeomorphism iff it preserves and
        // reflects specialization
        _ => (0..dst.len()).all(|x| {
            (0..dst.len()).all(|y| {
                dst.point_closure(x).contains(y)
                    == src.point_closure(f.point_map[x]).contains(f.point_map[y])
            })
        }),
    }
}

pub fn verify_conmap(
    hom: &Hom,
    src: &StructureSpace<'_>,
    dst: &StructureSpace<'_>,
) -> Result<ConmapReport> {
    let f = phi_shriek(hom, src, dst)?;
    let (sl, dl) = (src.lattice(), dst.lattice());
    let ker = sl.id_of(hom.kernel().elements()).unwrap();
    let c_ker = src.c_set(ker);
    let image = f.image(src, &dst.all());
    let surjective = hom.is_surjective();

    let (section_identity, image_is_kernel_closed_set, homeomorphism) = if surjective {
        let section = dst
            .points()
            .iter()
            .all(|&n| image_id(hom, sl, dl, preimage_id(hom, sl, dl, n)) == n);
        (
            Some(section),
            Some(&image == c_ker),
            Some(homeomorphic_onto(&f, src, dst, c_ker)),
        )
    } else {
        (None, None, None)
    };

    let closure = src.closure(&image);
    let below = sl.leq(ker, sl.meet_all(src.points().iter().copied()));
    Ok(ConmapReport {
        surjective,
        section_identity,
        image_is_kernel_closed_set,
        homeomorphism,
        closure_of_image_is_kernel_closed_set: &closure == c_ker,
        dense: closure == src.all(),
        kernel_below_all_points: below,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub quotient_orders: Vec<u64>,
    pub kernel_matches: bool,
    /// D(M/N) is homeomorphic to C(N) via the projection.
    pub homeomorphic: bool,
}

/// Builds M/N concretely and checks D(M/N) ≅ C(N) point by point.
pub fn verify_quotient_correspondence(
    lattice: &SubmoduleLattice,
    n: SubId,
    class: ClassName,
) -> Result<QuotientReport> {
    let module = lattice.module();
    let (q, proj) = quotient(module, &lattice.submodule(n))?;
    let q_lat = SubmoduleLattice::build(&q, *lattice.limits(), lattice.fault())?;
    let src = StructureSpace::build(lattice, class);
    let dst = StructureSpace::build(&q_lat, class);
    Ok(QuotientReport {
        quotient_orders: q.orders().to_vec(),
        kernel_matches: proj.kernel().elements() == lattice.elements(n),
        homeomorphic: quotient_homeomorphic(&proj, &src, &dst, n)?,
    })
}

/// Whether the projection `proj : M → M/N` induces D(M/N) ≅ C(N).
pub fn quotient_homeomorphic(
    proj: &Hom,
    src: &StructureSpace<'_>,
    dst: &StructureSpace<'_>,
    n: SubId,
) -> Result<bool> {
    match phi_shriek(proj, src, dst) {
        Ok(f) => Ok(homeomorphic_onto(&f, src, dst, src.c_set(n))),
        Err(Error::ContractionFails { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
