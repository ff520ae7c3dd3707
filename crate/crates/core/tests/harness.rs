use std::collections::HashSet;

use strucspace::harness::{
    check_one, minimize, run_all, statement_ids, summarize, CheckResult, Corpus, Instance, Verdict,
    FINITE_TRIVIAL,
};
use strucspace::{ClassName, Error, Fault, Limits, ModuleSpec};

fn small_corpus() -> Corpus {
    let mut c = Corpus::standard(8);
    c.families = 20;
    c
}

#[test]
fn statement_ids_are_unique() {
    let ids = statement_ids();
    let set: HashSet<_> = ids.iter().collect();
    assert_eq!(set.len(), ids.len());
    for id in [
        "lemma-closure-props.4",
        "thm-t1.if",
        "thm-t1.only-if",
        "thm-sober.forward",
        "thm-sober.backward",
    ] {
        assert!(ids.contains(&id), "{id}");
    }
}

#[test]
fn reports_are_deterministic() {
    let corpus = small_corpus().with_seed(7);
    let a = serde_json::to_string(&run_all(&corpus).unwrap()).unwrap();
    let b = serde_json::to_string(&run_all(&corpus).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn every_fail_carries_a_witness_and_every_unmet_hypothesis_is_named() {
    let results = run_all(&small_corpus()).unwrap();
    for r in &results {
        match r.verdict {
            Verdict::Fail | Verdict::HypothesisNotMet | Verdict::Info | Verdict::Skipped => {
                assert!(r.witness.as_deref().is_some_and(|w| !w.is_empty()), "{r}")
            }
            Verdict::Pass => {}
        }
    }
    assert!(results
        .iter()
        .any(|r| r.note.as_deref() == Some(FINITE_TRIVIAL)));
}

#[test]
fn top_module_on_the_plane_is_informational_false() {
    let corpus = Corpus::default();
    let inst = Instance::space(ModuleSpec::new(2, vec![2, 2]), ClassName::Prime);
    let r = check_one(&corpus, "info-top-module", &inst).unwrap();
    assert_eq!(r.verdict, Verdict::Info);
    assert!(r.witness.unwrap().starts_with("top = false"));
}

#[test]
fn t1_characterization_passes_on_z6_primes() {
    let corpus = Corpus::default();
    let inst = Instance::space(ModuleSpec::cyclic(6), ClassName::Prime);
    for id in ["thm-t1.if", "thm-t1.only-if"] {
        let r = check_one(&corpus, id, &inst).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r}");
    }
}

#[test]
fn unknown_statement_is_an_error() {
    let corpus = Corpus::default();
    let inst = Instance::module(ModuleSpec::cyclic(6));
    assert_eq!(
        check_one(&corpus, "no-such-statement", &inst).unwrap_err(),
        Error::UnknownStatement("no-such-statement".into())
    );
}

#[test]
fn minimize_rejects_non_failures() {
    let corpus = Corpus::default();
    let r = check_one(
        &corpus,
        "prop-t0",
        &Instance::space(ModuleSpec::cyclic(6), ClassName::Prime),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(minimize(&corpus, &r).unwrap_err(), Error::NothingToMinimize);
}

#[test]
fn minimize_shrinks_a_persisting_failure() {
    // qc-fg.witness fails for minimal submodules whenever D(M) is empty.
    let corpus = Corpus::default();
    let inst = Instance::space(ModuleSpec::new(12, vec![2, 6]), ClassName::Minimal);
    let r = check_one(&corpus, "qc-fg.witness", &inst).unwrap();
    assert_eq!(r.verdict, Verdict::Fail, "{r}");
    let m = minimize(&corpus, &r).unwrap();
    assert_eq!(m.verdict, Verdict::Fail);
    assert_eq!(m.instance.module, ModuleSpec::new(2, vec![2]));
    assert_eq!(minimize(&corpus, &r).unwrap(), m);
}

#[test]
fn flipped_membership_is_minimized_to_the_flipped_pair() {
    let fault = Fault::FlipMembership {
        class: ClassName::Prime,
        sub: 1,
    };
    let corpus =
        Corpus::single(ModuleSpec::cyclic(6), vec![ClassName::Prime]).with_fault(Some(fault));
    let results = run_all(&corpus).unwrap();
    let baseline = run_all(&Corpus::single(
        ModuleSpec::cyclic(6),
        vec![ClassName::Prime],
    ))
    .unwrap();
    let new_fail: &CheckResult = results
        .iter()
        .zip(&baseline)
        .find(|(r, b)| r.verdict == Verdict::Fail && b.verdict != Verdict::Fail)
        .map(|(r, _)| r)
        .expect("the flipped bit is detected");
    let m = minimize(&corpus, new_fail).unwrap();
    let w = m.witness.unwrap();
    assert!(w.contains("prime"), "{w}");
    assert!(w.contains('⟨'), "{w}");
}

#[test]
fn cap_exceeded_instances_are_skipped() {
    let mut corpus = Corpus::single(ModuleSpec::new(4, vec![4, 4]), ClassName::ALL.to_vec());
    corpus.limits = Limits {
        max_submodules: 4,
        ..Limits::default()
    };
    let results = run_all(&corpus).unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r.verdict == Verdict::Skipped));
    assert_eq!(summarize(&results).skipped, results.len());
}

#[test]
fn biconditionals_are_split() {
    let ids = statement_ids();
    for stem in [
        "thm-t1",
        "thm-sober",
        "thm-strong-disconnect",
        "cor-spectral-iff-sober",
    ] {
        assert!(
            ids.iter().filter(|i| i.starts_with(stem)).count() >= 2,
            "{stem}"
        );
    }
}
