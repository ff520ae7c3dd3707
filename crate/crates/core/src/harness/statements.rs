use std::cell::OnceCell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::classes::{is_in_class, ClassName};
use crate::error::{Error, Result};
use crate::hom::{
    has_contraction_property, phi_shriek, quotient, quotient_homeomorphic, verify_conmap,
    ConmapReport, Contraction, Hom, PhiShriek,
};
use crate::module::{Module, ModuleSpec};
use crate::submodule::{generate, intersect, sum, SubId, Submodule, SubmoduleLattice};
use crate::topology::{is_top_module, PointSet, SeparationReport, StructureSpace};

use super::{CheckResult, Corpus, HomSpec, Instance, Verdict, FINITE_TRIVIAL};

use ClassName::*;

struct Outcome {
    verdict: Verdict,
    witness: Option<String>,
    note: Option<&'static str>,
}

impl Outcome {
    fn pass() -> Self {
        Self {
            verdict: Verdict::Pass,
            witness: None,
            note: None,
        }
    }

    fn fail(w: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::Fail,
            witness: Some(w.into()),
            note: None,
        }
    }

    fn not_met(w: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::HypothesisNotMet,
            witness: Some(w.into()),
            note: None,
        }
    }

    fn info(w: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::Info,
            witness: Some(w.into()),
            note: None,
        }
    }

    fn check(ok: bool, w: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass()
        } else {
            Self::fail(w())
        }
    }

    fn finite_trivial(mut self) -> Self {
        self.note = Some(FINITE_TRIVIAL);
        self
    }
}

/// First failure of `f` over `items`, as an outcome.
fn all_of<T>(
    items: impl IntoIterator<Item = T>,
    mut f: impl FnMut(T) -> Option<String>,
) -> Outcome {
    for x in items {
        if let Some(w) = f(x) {
            return Outcome::fail(w);
        }
    }
    Outcome::pass()
}

struct ModuleCtx<'a> {
    corpus: &'a Corpus,
    lat: &'a SubmoduleLattice,
    /// Projection M → M/N and the lattice of M/N, per N.
    quotients: OnceCell<Result<Vec<(Hom, SubmoduleLattice)>>>,
}

impl<'a> ModuleCtx<'a> {
    fn new(corpus: &'a Corpus, lat: &'a SubmoduleLattice) -> Self {
        Self {
            corpus,
            lat,
            quotients: OnceCell::new(),
        }
    }

    fn module(&self) -> &Module {
        self.lat.module()
    }

    fn label(&self, id: SubId) -> &str {
        self.lat.label(id)
    }

    fn quotients(&self) -> std::result::Result<&[(Hom, SubmoduleLattice)], String> {
        self.quotients
            .get_or_init(|| {
                self.lat
                    .ids()
                    .map(|n| {
                        let (q, proj) = quotient(self.module(), &self.lat.submodule(n))?;
                        let q_lat =
                            SubmoduleLattice::build(&q, self.corpus.limits, self.corpus.fault)?;
                        Ok((proj, q_lat))
                    })
                    .collect()
            })
            .as_deref()
            .map_err(|e| e.to_string())
    }
}

struct SpaceCtx<'a> {
    m: &'a ModuleCtx<'a>,
    class: ClassName,
    space: StructureSpace<'a>,
    sep: OnceCell<SeparationReport>,
}

impl<'a> SpaceCtx<'a> {
    fn new(m: &'a ModuleCtx<'a>, class: ClassName) -> Self {
        Self {
            m,
            class,
            space: StructureSpace::build(m.lat, class),
            sep: OnceCell::new(),
        }
    }

    fn lat(&self) -> &SubmoduleLattice {
        self.m.lat
    }

    fn sep(&self) -> SeparationReport {
        *self.sep.get_or_init(|| self.space.separation_report())
    }

    fn c(&self, n: SubId) -> &PointSet {
        self.space.c_set(n)
    }

    fn show(&self, set: &PointSet) -> String {
        let labels: Vec<&str> = set.iter().map(|p| self.space.label(p)).collect();
        format!("{{{}}}", labels.join(","))
    }

    fn maximal_outside(&self) -> Option<SubId> {
        self.lat()
            .class_members(Maximal)
            .iter()
            .find(|&l| self.space.point_of(l).is_none())
    }

    fn non_maximal_point(&self) -> Option<SubId> {
        let maximal = self.lat().class_members(Maximal);
        self.space
            .points()
            .iter()
            .copied()
            .find(|&p| !maximal.contains(p))
    }
}

struct HomCtx<'a> {
    hom: &'a Hom,
    src: StructureSpace<'a>,
    dst: StructureSpace<'a>,
    contraction: Contraction,
    shriek: Option<PhiShriek>,
    conmap: Option<ConmapReport>,
}

impl HomCtx<'_> {
    fn not_met(&self) -> Option<Outcome> {
        self.contraction.witness.map(|w| {
            Outcome::not_met(format!(
                "no contraction: preimage of {} leaves the class",
                self.dst.lattice().label(w)
            ))
        })
    }
}

type ModuleCheck = fn(&ModuleCtx<'_>, &mut ChaCha8Rng) -> Outcome;
type SpaceCheck = fn(&SpaceCtx<'_>, &mut ChaCha8Rng) -> Outcome;
type HomCheck = fn(&HomCtx<'_>) -> Outcome;

#[derive(Clone, Copy)]
enum Check {
    Module(ModuleCheck),
    Space(SpaceCheck),
    Hom(HomCheck),
}

struct Statement {
    id: &'static str,
    /// Restricts a space or hom statement to these classes.
    classes: Option<&'static [ClassName]>,
    check: Check,
}

impl Statement {
    fn applies(&self, class: ClassName) -> bool {
        self.classes.is_none_or(|cs| cs.contains(&class))
    }
}

const fn st(id: &'static str, check: Check) -> Statement {
    Statement {
        id,
        classes: None,
        check,
    }
}

const fn only(id: &'static str, classes: &'static [ClassName], check: Check) -> Statement {
    Statement {
        id,
        classes: Some(classes),
        check,
    }
}

const MAXIMAL_CONTAINING: &[ClassName] = &[
    Maximal,
    Prime,
    Semiprime,
    Extraordinary,
    StronglyIrreducible,
    Primary,
    Irreducible,
    CompletelyIrreducible,
    Radical,
];

const STATEMENTS: &[Statement] = &[
    st("class-implications", Check::Module(class_implications)),
    st("thm-noetherian-qc", Check::Module(noetherian_qc)),
    st("lemma-spectral-subspace", Check::Module(spectral_subspace)),
    st("lemma-closure-props.1", Check::Space(closure_props_1)),
    st("lemma-closure-props.2", Check::Space(closure_props_2)),
    st("lemma-closure-props.3", Check::Space(closure_props_3)),
    st(
        "lemma-closure-props.3.families",
        Check::Space(closure_props_3_families),
    ),
    st("lemma-closure-props.4", Check::Space(closure_props_4)),
    st("lemma-closure-props.5", Check::Space(closure_props_5)),
    st("qc-fg.witness", Check::Space(qc_fg_witness)),
    st("qc-fg.subfamily", Check::Space(qc_fg_subfamily)),
    st("qc-maximal", Check::Space(qc_maximal)),
    only(
        "qc-maximal-corollary",
        MAXIMAL_CONTAINING,
        Check::Space(qc_maximal),
    ),
    only(
        "prop-fg-converse",
        &[FinitelyGenerated],
        Check::Space(fg_converse),
    ),
    st("cor-noetherian-space", Check::Space(noetherian_space)),
    st("prop-t0", Check::Space(t0)),
    st(
        "lemma-irreducible",
        Check::Space(irreducible_point_closures),
    ),
    only(
        "cor-proper-subbasis-irreducible",
        &[Proper],
        Check::Space(proper_subbasis_irreducible),
    ),
    st("thm-t1.if", Check::Space(t1_if)),
    st("thm-t1.only-if", Check::Space(t1_only_if)),
    st("cor-artinian", Check::Space(artinian)),
    st("lemma-omega", Check::Space(omega_fixed)),
    st("thm-sober.forward", Check::Space(sober_forward)),
    st("thm-sober.backward", Check::Space(sober_backward)),
    only(
        "cor-sober-classes",
        &[Proper, Prime, MinimalPrime],
        Check::Space(sober),
    ),
    only(
        "prop-sober-si-semiprime-extraordinary",
        &[StronglyIrreducible, Semiprime, Extraordinary],
        Check::Space(sober),
    ),
    only("thm-spectral-proper", &[Proper], Check::Space(spectral)),
    st(
        "cor-spectral-iff-sober.forward",
        Check::Space(spectral_forward),
    ),
    st(
        "cor-spectral-iff-sober.backward",
        Check::Space(spectral_backward),
    ),
    st("cor-spectral-iff-sober.meta", Check::Space(spectral_meta)),
    st(
        "lemma-basis-binary-intersections",
        Check::Space(basis_intersections),
    ),
    st(
        "thm-strong-disconnect.forward",
        Check::Space(disconnect_forward),
    ),
    st(
        "thm-strong-disconnect.backward",
        Check::Space(disconnect_backward),
    ),
    st("thm-zero-connected", Check::Space(zero_connected)),
    only(
        "cor-connected-classes",
        &[Proper, FinitelyGenerated, Cyclic],
        Check::Space(connected),
    ),
    st("cor-quotient", Check::Space(quotient_correspondence)),
    st("info-top-module", Check::Space(top_module)),
    st("prop-conmap.contraction", Check::Hom(contraction)),
    st("prop-conmap.monotone", Check::Hom(conmap_monotone)),
    st("prop-conmap.1-identity", Check::Hom(conmap_identity)),
    st("prop-conmap.1-continuous", Check::Hom(conmap_continuous)),
    st("prop-conmap.2-section", Check::Hom(conmap_section)),
    st("prop-conmap.2-image", Check::Hom(conmap_image)),
    st(
        "prop-conmap.2-homeomorphism",
        Check::Hom(conmap_homeomorphism),
    ),
    st("prop-conmap.3-closure", Check::Hom(conmap_closure)),
    st("prop-conmap.3-dense", Check::Hom(conmap_dense)),
];

/// Every statement id, in report order.
pub fn statement_ids() -> Vec<&'static str> {
    STATEMENTS.iter().map(|s| s.id).collect()
}

/// Per-check generator derived from the corpus seed, the statement and the instance.
fn rng_for(seed: u64, statement: &str, instance: &Instance) -> ChaCha8Rng {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = 0xcbf2_9ce4_8422_2325 ^ seed;
    for part in [statement, &instance.to_string()] {
        for b in part.bytes() {
            h = (h ^ b as u64).wrapping_mul(PRIME);
        }
        h = (h ^ 0xff).wrapping_mul(PRIME);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn result(
    corpus: &Corpus,
    s: &Statement,
    instance: Instance,
    f: impl FnOnce(&mut ChaCha8Rng) -> Outcome,
) -> CheckResult {
    let mut rng = rng_for(corpus.seed, s.id, &instance);
    let o = f(&mut rng);
    CheckResult {
        statement_id: s.id.to_string(),
        instance,
        verdict: o.verdict,
        witness: o.witness,
        note: o.note.map(str::to_string),
    }
}

fn lattice_of(corpus: &Corpus, spec: &ModuleSpec) -> Result<SubmoduleLattice> {
    SubmoduleLattice::build(&Module::from_spec(spec)?, corpus.limits, corpus.fault)
}

fn hom_ctx<'a>(
    hom: &'a Hom,
    src: &'a SubmoduleLattice,
    dst: &'a SubmoduleLattice,
    class: ClassName,
) -> Result<HomCtx<'a>> {
    let src = StructureSpace::build(src, class);
    let dst = StructureSpace::build(dst, class);
    let contraction = has_contraction_property(hom, &src, &dst)?;
    let (shriek, conmap) = if contraction.holds {
        (
            Some(phi_shriek(hom, &src, &dst)?),
            Some(verify_conmap(hom, &src, &dst)?),
        )
    } else {
        (None, None)
    };
    Ok(HomCtx {
        hom,
        src,
        dst,
        contraction,
        shriek,
        conmap,
    })
}

fn skipped(s: &Statement, instance: Instance, reason: &Error) -> CheckResult {
    CheckResult {
        statement_id: s.id.to_string(),
        instance,
        verdict: Verdict::Skipped,
        witness: Some(reason.to_string()),
        note: None,
    }
}

/// Cap errors skip the instance; anything else aborts the run.
fn cap_error<T>(r: Result<T>) -> Result<std::result::Result<T, Error>> {
    match r {
        Ok(x) => Ok(Ok(x)),
        Err(e @ Error::CapExceeded { .. }) => Ok(Err(e)),
        Err(e) => Err(e),
    }
}

pub(super) fn run(corpus: &Corpus) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for spec in &corpus.modules {
        let lat = match cap_error(lattice_of(corpus, spec))? {
            Ok(lat) => lat,
            Err(e) => {
                for s in STATEMENTS {
                    match s.check {
                        Check::Module(_) => {
                            out.push(skipped(s, Instance::module(spec.clone()), &e))
                        }
                        Check::Space(_) => {
                            for &class in corpus.classes.iter().filter(|&&c| s.applies(c)) {
                                out.push(skipped(s, Instance::space(spec.clone(), class), &e));
                            }
                        }
                        Check::Hom(_) => {}
                    }
                }
                continue;
            }
        };
        let m = ModuleCtx::new(corpus, &lat);
        for s in STATEMENTS {
            if let Check::Module(f) = s.check {
                out.push(result(corpus, s, Instance::module(spec.clone()), |rng| {
                    f(&m, rng)
                }));
            }
        }
        for &class in &corpus.classes {
            let ctx = SpaceCtx::new(&m, class);
            for s in STATEMENTS.iter().filter(|s| s.applies(class)) {
                if let Check::Space(f) = s.check {
                    out.push(result(
                        corpus,
                        s,
                        Instance::space(spec.clone(), class),
                        |rng| f(&ctx, rng),
                    ));
                }
            }
        }
    }
    for h in &corpus.homs {
        let hom = h.build()?;
        let lats = cap_error(
            SubmoduleLattice::build(hom.src(), corpus.limits, corpus.fault).and_then(|src| {
                Ok((
                    src,
                    SubmoduleLattice::build(hom.dst(), corpus.limits, corpus.fault)?,
                ))
            }),
        )?;
        for &class in &corpus.classes {
            let hom_statements = STATEMENTS
                .iter()
                .filter(|s| s.applies(class) && matches!(s.check, Check::Hom(_)));
            match &lats {
                Ok((src, dst)) => {
                    let ctx = hom_ctx(&hom, src, dst, class)?;
                    for s in hom_statements {
                        if let Check::Hom(f) = s.check {
                            out.push(result(corpus, s, Instance::hom(h.clone(), class), |_| {
                                f(&ctx)
                            }));
                        }
                    }
                }
                Err(e) => {
                    for s in hom_statements {
                        out.push(skipped(s, Instance::hom(h.clone(), class), e));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn run_one(corpus: &Corpus, id: &str, instance: &Instance) -> Result<CheckResult> {
    let s = STATEMENTS
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownStatement(id.to_string()))?;
    let need_class = || {
        instance
            .class
            .filter(|&c| s.applies(c))
            .ok_or_else(|| Error::Parse(format!("statement {id} needs an applicable class")))
    };
    let inst = instance.clone();
    match s.check {
        Check::Module(f) => {
            let lat = lattice_of(corpus, &instance.module)?;
            let m = ModuleCtx::new(corpus, &lat);
            Ok(result(corpus, s, inst, |rng| f(&m, rng)))
        }
        Check::Space(f) => {
            let class = need_class()?;
            let lat = lattice_of(corpus, &instance.module)?;
            let m = ModuleCtx::new(corpus, &lat);
            let ctx = SpaceCtx::new(&m, class);
            Ok(result(corpus, s, inst, |rng| f(&ctx, rng)))
        }
        Check::Hom(f) => {
            let class = need_class()?;
            let h: &HomSpec = instance
                .hom
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("statement {id} needs a hom")))?;
            let hom = h.build()?;
            let src = SubmoduleLattice::build(hom.src(), corpus.limits, corpus.fault)?;
            let dst = SubmoduleLattice::build(hom.dst(), corpus.limits, corpus.fault)?;
            let ctx = hom_ctx(&hom, &src, &dst, class)?;
            Ok(result(corpus, s, inst, |_| f(&ctx)))
        }
    }
}

fn random_family(rng: &mut ChaCha8Rng, lat: &SubmoduleLattice, max_len: usize) -> Vec<SubId> {
    let k = rng.gen_range(1..=max_len);
    (0..k).map(|_| rng.gen_range(0..lat.len())).collect()
}

fn family_labels(lat: &SubmoduleLattice, fam: &[SubId]) -> String {
    let labels: Vec<&str> = fam.iter().map(|&n| lat.label(n)).collect();
    format!("[{}]", labels.join(", "))
}

/// Σ N_λ computed element-wise, independent of the lattice tables.
fn element_sum(lat: &SubmoduleLattice, fam: &[SubId]) -> SubId {
    let total = fam.iter().fold(Submodule::zero(lat.module()), |acc, &n| {
        sum(&acc, &lat.submodule(n)).expect("same parent")
    });
    lat.id_of_submodule(&total).expect("sums are submodules")
}

fn intersection_of_c(space: &StructureSpace<'_>, fam: &[SubId]) -> PointSet {
    fam.iter()
        .fold(space.all(), |acc, &n| acc.intersection(space.c_set(n)))
}

// ---- module-scope checks

fn class_implications(m: &ModuleCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = m.lat;
    let members = |c| lat.class_members(c);
    for c in ClassName::ALL {
        if members(c).contains(lat.top()) {
            return Outcome::fail(format!("{c} ∋ {} (not proper)", m.label(lat.top())));
        }
    }
    let implications = [
        (Maximal, Prime),
        (Prime, Semiprime),
        (StronglyIrreducible, Irreducible),
        (Irreducible, CompletelyIrreducible),
        (CompletelyIrreducible, Irreducible),
        (MinimalPrime, Minimal),
        (MinimalPrime, Prime),
        (Cyclic, FinitelyGenerated),
        (Proper, FinitelyGenerated),
        (FinitelyGenerated, Proper),
    ];
    for (a, b) in implications {
        if let Some(n) = members(a).difference(members(b)).first() {
            return Outcome::fail(format!("{a} ⇒ {b} fails at {}", m.label(n)));
        }
    }
    if let Some(n) = members(Minimal)
        .intersection(members(Prime))
        .difference(members(MinimalPrime))
        .first()
    {
        return Outcome::fail(format!("minimal ∧ prime ⇏ minimal-prime at {}", m.label(n)));
    }
    // semiprime ⟺ N = √N with some prime above N
    for n in lat.ids().filter(|&n| lat.is_proper(n)) {
        let primes_above = lat.supersets(n).intersection(members(Prime));
        let radical = lat.radical(n) == n && !primes_above.is_empty();
        if radical != members(Semiprime).contains(n) {
            return Outcome::fail(format!("semiprime ≠ radical-with-prime at {}", m.label(n)));
        }
        if (lat.radical(n) == n) != members(Radical).contains(n) {
            return Outcome::fail(format!("radical class ≠ (N = √N) at {}", m.label(n)));
        }
    }
    Outcome::pass()
}

fn noetherian_qc(m: &ModuleCtx<'_>, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = m.lat;
    let module = m.module();
    for n in lat.ids() {
        let gens: Vec<_> = lat
            .min_generators(n)
            .iter()
            .map(|&g| module.element_at(g))
            .collect();
        let regenerated = generate(module, &gens).expect("valid generators");
        if regenerated.elements() != lat.elements(n) {
            return Outcome::fail(format!("{} is not generated by its label", m.label(n)));
        }
    }
    // a finitely generated sum is already the sum of a finite subfamily
    for _ in 0..m.corpus.families {
        let fam = random_family(rng, lat, 8);
        let t = element_sum(lat, &fam);
        let mut used = 0;
        for g in lat.min_generators(t) {
            let prefix = (1..=fam.len())
                .find(|&k| lat.elements(element_sum(lat, &fam[..k])).contains(g))
                .unwrap_or(fam.len() + 1);
            used = used.max(prefix);
        }
        if used > fam.len() || element_sum(lat, &fam[..used]) != t {
            return Outcome::fail(format!(
                "no finite subfamily of {} reaches its sum",
                family_labels(lat, &fam)
            ));
        }
    }
    Outcome::pass().finite_trivial()
}

fn spectral_subspace(m: &ModuleCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = m.lat;
    let all = BitSet::full(lat.len());
    let whole = StructureSpace::from_points(lat, &all, None);
    if !whole.is_spectral() {
        return Outcome::fail("the space of all submodules is not spectral");
    }
    let top = BitSet::from_indices(whole.len(), [whole.point_of(lat.top()).unwrap()]);
    if !whole.is_closed(&top) {
        return Outcome::fail(format!("{{{}}} is not closed", m.label(lat.top())));
    }
    let proper = StructureSpace::build(lat, Proper);
    let sober = proper.separation_report().sober;
    if !sober {
        return Outcome::not_met("proper space is not sober");
    }
    Outcome::check(proper.is_spectral(), || {
        "open sober subspace is not spectral".into()
    })
}

// ---- space-scope checks

fn closure_props_1(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    all_of(
        lat.ids().flat_map(|a| lat.ids().map(move |b| (a, b))),
        |(a, b)| {
            (lat.elements(a).is_subset(lat.elements(b)) && !s.c(b).is_subset(s.c(a)))
                .then(|| format!("{} ⊆ {} but C ⊉", lat.label(a), lat.label(b)))
        },
    )
}

fn closure_props_2(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    if s.c(lat.zero()) != &s.space.all() {
        return Outcome::fail(format!("C(0) = {} ≠ D(M)", s.show(s.c(lat.zero()))));
    }
    Outcome::check(s.c(lat.top()).is_empty(), || {
        format!("C(M) = {}", s.show(s.c(lat.top())))
    })
}

fn closure_props_3(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    all_of(
        lat.ids().flat_map(|a| (a..lat.len()).map(move |b| (a, b))),
        |(a, b)| {
            let n = element_sum(lat, &[a, b]);
            (s.c(a).intersection(s.c(b)) != *s.c(n)).then(|| {
                format!(
                    "C({}) ∩ C({}) ≠ C({})",
                    lat.label(a),
                    lat.label(b),
                    lat.label(n)
                )
            })
        },
    )
}

fn closure_props_3_families(s: &SpaceCtx<'_>, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    for _ in 0..s.m.corpus.families {
        let fam = random_family(rng, lat, 6);
        let n = element_sum(lat, &fam);
        if intersection_of_c(&s.space, &fam) != *s.c(n) {
            return Outcome::fail(format!("⋂ C ≠ C(Σ) for {}", family_labels(lat, &fam)));
        }
    }
    Outcome::pass()
}

fn closure_props_4(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    all_of(
        lat.ids().flat_map(|a| (a..lat.len()).map(move |b| (a, b))),
        |(a, b)| {
            let meet = intersect(&lat.submodule(a), &lat.submodule(b)).expect("same parent");
            let n = lat
                .id_of_submodule(&meet)
                .expect("intersections are submodules");
            (!s.c(a).union(s.c(b)).is_subset(s.c(n))).then(|| {
                format!(
                    "C({}) ∪ C({}) ⊄ C({})",
                    lat.label(a),
                    lat.label(b),
                    lat.label(n)
                )
            })
        },
    )
}

fn closure_props_5(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    all_of(lat.ids(), |n| {
        let r = lat.radical(n);
        (!s.c(r).is_subset(s.c(n)))
            .then(|| format!("C({}) ⊉ C(√N = {})", lat.label(n), lat.label(r)))
    })
}

fn qc_fg_witness(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    let order = s.m.module().order();
    all_of(lat.ids(), |n| {
        let whole = lat.size(n) == order;
        (s.c(n).is_empty() != whole).then(|| {
            if whole {
                "C(M) ≠ ∅".to_string()
            } else {
                format!("C({}) = ∅ but N ≠ M", lat.label(n))
            }
        })
    })
    .finite_trivial()
}

fn qc_fg_subfamily(s: &SpaceCtx<'_>, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    let mut found = 0;
    let mut attempts = 0;
    while found < s.m.corpus.families && attempts < 50 * s.m.corpus.families.max(1) {
        attempts += 1;
        let fam = random_family(rng, lat, 6);
        if !intersection_of_c(&s.space, &fam).is_empty() {
            continue;
        }
        found += 1;
        let mut keep = fam.clone();
        for i in (0..keep.len()).rev() {
            if keep.len() > 1 {
                let mut rest = keep.clone();
                rest.remove(i);
                if intersection_of_c(&s.space, &rest).is_empty() {
                    keep = rest;
                }
            }
        }
        let minimal = (0..keep.len()).all(|i| {
            keep.len() == 1 || {
                let mut rest = keep.clone();
                rest.remove(i);
                !intersection_of_c(&s.space, &rest).is_empty()
            }
        });
        if keep.is_empty() || !intersection_of_c(&s.space, &keep).is_empty() || !minimal {
            return Outcome::fail(format!(
                "extraction failed for {}",
                family_labels(lat, &fam)
            ));
        }
    }
    Outcome::pass().finite_trivial()
}

fn qc_maximal(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if let Some(l) = s.maximal_outside() {
        return Outcome::not_met(format!("maximal {} ∉ D(M)", s.lat().label(l)));
    }
    qc_fg_witness(s, &mut ChaCha8Rng::seed_from_u64(0))
}

fn fg_converse(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    Outcome::check(s.maximal_outside().is_none(), || {
        format!(
            "maximal {} ∉ D(M)",
            s.lat().label(s.maximal_outside().unwrap())
        )
    })
    .finite_trivial()
}

fn noetherian_space(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    // every closed set is the finite union of the irreducible closures of its points
    let sp = &s.space;
    all_of(0..sp.len(), |p| {
        let cl = sp.point_closure(p);
        match sp.irreducible_and_generics(cl) {
            Ok(irr) if irr.irreducible && irr.generics.contains(&p) => None,
            _ => Some(format!("closure of {} is not irreducible", sp.label(p))),
        }
    })
    .finite_trivial()
}

fn t0(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if !s.sep().t0 {
        return Outcome::fail("two points share a closure");
    }
    let pts = s.space.points();
    all_of(0..pts.len(), |i| {
        (i + 1..pts.len())
            .find(|&j| s.c(pts[i]) == s.c(pts[j]))
            .map(|j| format!("C({}) = C({})", s.space.label(i), s.space.label(j)))
    })
}

fn irreducible_point_closures(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let sp = &s.space;
    all_of(0..sp.len(), |p| {
        let n = sp.point_sub(p);
        let single = BitSet::from_indices(sp.len(), [p]);
        if sp.closure(&single) != *s.c(n) {
            return Some(format!("closure of {} ≠ C(N)", sp.label(p)));
        }
        match sp.irreducible_and_generics(s.c(n)) {
            Ok(irr) if irr.irreducible && irr.generics.contains(&p) && irr.criteria_agree() => None,
            Ok(_) => Some(format!(
                "C({}) is not irreducible with generic point N",
                sp.label(p)
            )),
            Err(e) => Some(format!("C({}): {e}", sp.label(p))),
        }
    })
}

fn proper_subbasis_irreducible(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let sp = &s.space;
    all_of(
        sp.subbasis().iter().filter(|b| !b.set.is_empty()),
        |b| match sp.irreducible_and_generics(&b.set) {
            Ok(irr) if irr.irreducible => None,
            _ => Some(format!("{} is reducible", s.show(&b.set))),
        },
    )
}

fn t1_if(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if let Some(n) = s.non_maximal_point() {
        return Outcome::not_met(format!("{} is not maximal", s.lat().label(n)));
    }
    Outcome::check(s.sep().t1, || {
        "points are maximal but the space is not T1".into()
    })
}

fn t1_only_if(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if !s.sep().t1 {
        return Outcome::not_met("space is not T1");
    }
    match s.non_maximal_point() {
        None => Outcome::pass(),
        Some(n) => Outcome::fail(format!("T1 but {} is not maximal", s.lat().label(n))),
    }
}

fn artinian(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if !s.sep().t1 {
        return Outcome::not_met("space is not discrete");
    }
    // longest chain of submodules; ids are sorted by cardinality
    let lat = s.lat();
    let mut height = vec![0usize; lat.len()];
    for b in lat.ids() {
        height[b] = (0..b)
            .filter(|&a| lat.leq(a, b) && lat.size(a) < lat.size(b))
            .map(|a| height[a] + 1)
            .max()
            .unwrap_or(0);
    }
    Outcome::check(height[lat.top()] < lat.len(), || {
        "unbounded descending chain".into()
    })
    .finite_trivial()
}

fn omega_of(s: &SpaceCtx<'_>, n: SubId) -> SubId {
    s.lat().omega(n, &s.space).expect("same module")
}

fn omega_fixed(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    all_of(s.space.points().iter().copied(), |n| {
        let w = omega_of(s, n);
        (w != n).then(|| format!("{}^ω = {}", lat.label(n), lat.label(w)))
    })
}

/// C(N) is nonempty and irreducible with exactly one generic point.
fn unique_generic(s: &SpaceCtx<'_>, n: SubId) -> Option<usize> {
    let c = s.c(n);
    if c.is_empty() {
        return None;
    }
    let irr = s.space.irreducible_and_generics(c).ok()?;
    (irr.irreducible && irr.generics.len() == 1).then(|| irr.generics[0])
}

fn sober_forward(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    let mut met = false;
    for n in lat.ids() {
        if let Some(g) = unique_generic(s, n) {
            met = true;
            let w = omega_of(s, n);
            let inside = s.space.point_of(w).is_some_and(|p| s.c(n).contains(p));
            if !inside || s.space.point_sub(g) != w {
                return Outcome::fail(format!(
                    "C({}) has generic {} but N^ω = {}",
                    lat.label(n),
                    s.space.label(g),
                    lat.label(w)
                ));
            }
        }
    }
    if met {
        Outcome::pass()
    } else {
        Outcome::not_met("no irreducible C(N) with a unique generic point")
    }
}

fn sober_backward(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let lat = s.lat();
    let mut met = false;
    for n in lat.ids() {
        let w = omega_of(s, n);
        let Some(p) = s.space.point_of(w).filter(|&p| s.c(n).contains(p)) else {
            continue;
        };
        met = true;
        if unique_generic(s, n) != Some(p) {
            return Outcome::fail(format!(
                "N^ω = {} ∈ C({}) but it is not the unique generic point",
                lat.label(w),
                lat.label(n)
            ));
        }
    }
    if met {
        Outcome::pass()
    } else {
        Outcome::not_met("no C(N) contains N^ω")
    }
}

fn sober(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    Outcome::check(s.sep().sober, || {
        "an irreducible closed set lacks a unique generic point".into()
    })
}

fn spectral(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let r = s.space.spectral_report();
    Outcome::check(r.spectral, || format!("{r:?}"))
}

fn spectral_forward(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if !s.space.is_spectral() {
        return Outcome::not_met("space is not spectral");
    }
    Outcome::check(s.sep().sober, || "spectral but not sober".into())
}

fn spectral_backward(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if !s.sep().sober {
        return Outcome::not_met("space is not sober");
    }
    Outcome::check(s.space.is_spectral(), || "sober but not spectral".into())
}

fn spectral_meta(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let (sp, t0) = (s.space.is_spectral(), s.sep().t0);
    Outcome::check(sp == t0, || format!("spectral = {sp}, t0 = {t0}"))
}

fn basis_intersections(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let basis = s.space.subbasis();
    all_of(
        basis.iter().flat_map(|a| basis.iter().map(move |b| (a, b))),
        |(a, b)| {
            let i = a.set.intersection(&b.set);
            (!s.space.is_subbasis_set(&i))
                .then(|| format!("{} ∩ {} is no C(N)", s.show(&a.set), s.show(&b.set)))
        },
    )
}

fn valid_partition(s: &SpaceCtx<'_>, a: &PointSet, b: &PointSet) -> bool {
    let sp = &s.space;
    !a.is_empty()
        && !b.is_empty()
        && a.is_disjoint(b)
        && a.union(b) == sp.all()
        && sp.is_closed(a)
        && sp.is_closed(b)
        && sp.is_subbasis_expressible(a)
        && sp.is_subbasis_expressible(b)
}

fn disconnect_forward(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if s.space.is_connected() {
        return Outcome::not_met("space is connected");
    }
    match s.space.strongly_disconnects() {
        Some((a, b)) if valid_partition(s, &a, &b) => Outcome::pass(),
        Some((a, b)) => Outcome::fail(format!("invalid partition {} ⊔ {}", s.show(&a), s.show(&b))),
        None => Outcome::fail("disconnected but the closed basis does not split it"),
    }
}

fn disconnect_backward(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let Some((a, b)) = s.space.strongly_disconnects() else {
        return Outcome::not_met("the closed basis does not split the space");
    };
    if !valid_partition(s, &a, &b) {
        return Outcome::fail(format!("invalid partition {} ⊔ {}", s.show(&a), s.show(&b)));
    }
    Outcome::check(!s.space.is_connected(), || {
        format!("{} ⊔ {} splits a connected space", s.show(&a), s.show(&b))
    })
}

fn zero_connected(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    if s.space.point_of(s.lat().zero()).is_none() {
        return Outcome::not_met("0 ∉ D(M)");
    }
    connected(s, &mut ChaCha8Rng::seed_from_u64(0))
}

fn connected(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    // independent of the component search: any clopen split is a closed set whose
    // complement is closed
    let sp = &s.space;
    let split = (0..sp.len()).find_map(|p| {
        let mut a = sp.point_closure(p).clone();
        loop {
            let grown = sp.closure(&a.union(&BitSet::from_indices(
                sp.len(),
                (0..sp.len()).filter(|&q| !sp.point_closure(q).is_disjoint(&a)),
            )));
            if grown == a {
                break;
            }
            a = grown;
        }
        let b = a.complement();
        (!b.is_empty() && sp.is_closed(&b)).then_some(a)
    });
    if let Some(a) = split {
        return Outcome::fail(format!("{} is clopen", s.show(&a)));
    }
    Outcome::check(sp.is_connected(), || {
        "component search reports disconnected".into()
    })
}

fn quotient_correspondence(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let quotients = match s.m.quotients() {
        Ok(q) => q,
        Err(e) => return Outcome::fail(format!("quotient construction: {e}")),
    };
    let lat = s.lat();
    all_of(lat.ids(), |n| {
        let (proj, q_lat) = &quotients[n];
        if proj.kernel().elements() != lat.elements(n) {
            return Some(format!("kernel of M → M/{} is wrong", lat.label(n)));
        }
        let dst = StructureSpace::build(q_lat, s.class);
        match quotient_homeomorphic(proj, &s.space, &dst, n) {
            Ok(true) => None,
            Ok(false) => Some(format!(
                "N = {}: |D(M/N)| = {}, |C(N)| = {}",
                lat.label(n),
                dst.len(),
                s.c(n).len()
            )),
            Err(e) => Some(format!("N = {}: {e}", lat.label(n))),
        }
    })
}

fn top_module(s: &SpaceCtx<'_>, _: &mut ChaCha8Rng) -> Outcome {
    let r = is_top_module(s.lat(), s.class);
    match r.violation {
        None => Outcome::info("top = true"),
        Some((a, b)) => Outcome::info(format!(
            "top = false: C({}) ∪ C({}) is no C(N″)",
            s.lat().label(a),
            s.lat().label(b)
        )),
    }
}

// ---- hom-scope checks

fn contraction(h: &HomCtx<'_>) -> Outcome {
    let class = h.src.class().expect("class space");
    let (sl, dl) = (h.src.lattice(), h.dst.lattice());
    let oracle = h.dst.points().iter().copied().find(|&n| {
        let pre = h.hom.preimage(&dl.submodule(n)).expect("target submodule");
        !is_in_class(&pre, sl, class).expect("preimages are submodules")
    });
    if oracle.is_some() != !h.contraction.holds {
        return Outcome::fail(format!(
            "contraction flag {} disagrees with direct preimage check",
            h.contraction.holds
        ));
    }
    let refused = h.shriek.is_none();
    match (refused, oracle) {
        (true, Some(w)) => Outcome {
            note: Some("contraction fails"),
            ..Outcome::pass()
        }
        .with_witness(format!("preimage of {} leaves the class", dl.label(w))),
        (false, None) => Outcome::pass(),
        _ => Outcome::fail("φ_! accepted a map without the contraction property"),
    }
}

impl Outcome {
    fn with_witness(mut self, w: String) -> Self {
        self.witness = Some(w);
        self
    }
}

fn conmap_monotone(h: &HomCtx<'_>) -> Outcome {
    let dl = h.dst.lattice();
    all_of(
        dl.ids().flat_map(|a| dl.ids().map(move |b| (a, b))),
        |(a, b)| {
            let (pa, pb) = (
                h.hom.preimage_set(dl.elements(a)),
                h.hom.preimage_set(dl.elements(b)),
            );
            (dl.leq(a, b) && !pa.is_subset(&pb))
                .then(|| format!("{} ⊆ {} but preimages are not", dl.label(a), dl.label(b)))
        },
    )
}

fn conmap_identity(h: &HomCtx<'_>) -> Outcome {
    if let Some(o) = h.not_met() {
        return o;
    }
    let f = h.shriek.as_ref().unwrap();
    Outcome::check(f.subbasis_identity, || "φ_!⁻¹(C(N)) ≠ C(⟨φ(N)⟩)".into())
}

fn conmap_continuous(h: &HomCtx<'_>) -> Outcome {
    if let Some(o) = h.not_met() {
        return o;
    }
    let f = h.shriek.as_ref().unwrap();
    Outcome::check(f.continuous, || "a subbasis preimage is not closed".into())
}

fn surjective_report<'h>(h: &'h HomCtx<'_>) -> std::result::Result<&'h ConmapReport, Outcome> {
    if let Some(o) = h.not_met() {
        return Err(o);
    }
    let r = h.conmap.as_ref().unwrap();
    if !r.surjective {
        return Err(Outcome::not_met("φ is not surjective"));
    }
    Ok(r)
}

fn conmap_section(h: &HomCtx<'_>) -> Outcome {
    match surjective_report(h) {
        Err(o) => o,
        Ok(r) => Outcome::check(r.section_identity == Some(true), || {
            "φ(φ⁻¹(N′)) ≠ N′".into()
        }),
    }
}

fn conmap_image(h: &HomCtx<'_>) -> Outcome {
    match surjective_report(h) {
        Err(o) => o,
        Ok(r) => Outcome::check(r.image_is_kernel_closed_set == Some(true), || {
            image_witness(h)
        }),
    }
}

fn conmap_homeomorphism(h: &HomCtx<'_>) -> Outcome {
    match surjective_report(h) {
        Err(o) => o,
        Ok(r) => Outcome::check(r.homeomorphism == Some(true), || {
            format!("D(M′) ≇ C(ker φ); {}", image_witness(h))
        }),
    }
}

fn image_witness(h: &HomCtx<'_>) -> String {
    let f = h.shriek.as_ref().unwrap();
    let ker = h.src.lattice().id_of(h.hom.kernel().elements()).unwrap();
    let img = f.image(&h.src, &h.dst.all());
    let show = |set: &PointSet| {
        let labels: Vec<&str> = set.iter().map(|p| h.src.label(p)).collect();
        format!("{{{}}}", labels.join(","))
    };
    format!(
        "im φ_! = {}, its closure = {}, C(ker φ) = {}",
        show(&img),
        show(&h.src.closure(&img)),
        show(h.src.c_set(ker))
    )
}

fn conmap_closure(h: &HomCtx<'_>) -> Outcome {
    if let Some(o) = h.not_met() {
        return o;
    }
    let r = h.conmap.as_ref().unwrap();
    Outcome::check(r.closure_of_image_is_kernel_closed_set, || image_witness(h))
}

fn conmap_dense(h: &HomCtx<'_>) -> Outcome {
    if let Some(o) = h.not_met() {
        return o;
    }
    let r = h.conmap.as_ref().unwrap();
    Outcome::check(r.density_criterion_holds(), || {
        format!(
            "dense = {}, ker φ ⊆ ⋂ D(M) = {}",
            r.dense, r.kernel_below_all_points
        )
    })
}
