//! Executable checks of the structural theorems over a corpus of modules, classes and homs.
//!
//! Every check is bound to a stable statement id. Biconditionals are split into
//! directed checks, and statements that finiteness makes automatic are replaced by a
//! falsifiable witness identity (their results carry the note
//! [`FINITE_TRIVIAL`]).

mod corpus;
mod minimize;
mod statements;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classes::ClassName;
use crate::error::Result;
use crate::hom::Hom;
use crate::module::{Element, Module, ModuleSpec};

pub use corpus::{default_hom_suite, Corpus};
pub use minimize::minimize;
pub use statements::statement_ids;

pub const FINITE_TRIVIAL: &str = "finite-trivial+witness";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
    /// Reported for information only; never a theorem hypothesis.
    Info,
    /// The instance exceeded a resource cap; the witness holds the reason.
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
            Verdict::Info => "info",
            Verdict::Skipped => "skipped",
        })
    }
}

/// A homomorphism in serializable form: generator images as coordinate tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomSpec {
    pub src: ModuleSpec,
    pub dst: ModuleSpec,
    pub images: Vec<Vec<u64>>,
}

impl HomSpec {
    pub fn new(src: ModuleSpec, dst: ModuleSpec, images: Vec<Vec<u64>>) -> Self {
        Self { src, dst, images }
    }

    pub fn of(hom: &Hom) -> Self {
        Self {
            src: hom.src().spec(),
            dst: hom.dst().spec(),
            images: hom.images().iter().map(|e| e.coords.clone()).collect(),
        }
    }

    pub fn build(&self) -> Result<Hom> {
        let src = Module::from_spec(&self.src)?;
        let dst = Module::from_spec(&self.dst)?;
        let images = self
            .images
            .iter()
            .map(|c| Element::new(c.clone()))
            .collect();
        Hom::new(&src, &dst, images)
    }
}

impl fmt::Display for HomSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self
            .images
            .iter()
            .map(|c| c.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{} -> {} [{}]", self.src, self.dst, imgs.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub module: ModuleSpec,
    pub class: Option<ClassName>,
    pub hom: Option<HomSpec>,
}

impl Instance {
    pub fn module(module: ModuleSpec) -> Self {
        Self {
            module,
            class: None,
            hom: None,
        }
    }

    pub fn space(module: ModuleSpec, class: ClassName) -> Self {
        Self {
            module,
            class: Some(class),
            hom: None,
        }
    }

    pub fn hom(hom: HomSpec, class: ClassName) -> Self {
        Self {
            module: hom.src.clone(),
            class: Some(class),
            hom: Some(hom),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hom {
            Some(h) => write!(f, "{h}")?,
            None => write!(f, "{}", self.module)?,
        }
        if let Some(c) = self.class {
            write!(f, " / {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub statement_id: String,
    pub instance: Instance,
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<20} {} :: {}",
            self.verdict, self.statement_id, self.instance
        )?;
        if let Some(w) = &self.witness {
            write!(f, " :: {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    pub info: usize,
    pub skipped: usize,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let mut s = Summary::default();
    for r in results {
        match r.verdict {
            Verdict::Pass => s.pass += 1,
            Verdict::Fail => s.fail += 1,
            Verdict::HypothesisNotMet => s.hypothesis_not_met += 1,
            Verdict::Info => s.info += 1,
            Verdict::Skipped => s.skipped += 1,
        }
    }
    s
}

/// Runs every statement on every corpus instance, in corpus order.
pub fn run_all(corpus: &Corpus) -> Result<Vec<CheckResult>> {
    statements::run(corpus)
}

/// Re-runs a single statement on a single instance with the corpus settings.
pub fn check_one(corpus: &Corpus, statement_id: &str, instance: &Instance) -> Result<CheckResult> {
    statements::run_one(corpus, statement_id, instance)
}
