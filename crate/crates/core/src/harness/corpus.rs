use serde::Serialize;

use crate::classes::ClassName;
use crate::error::Result;
use crate::fault::Fault;
use crate::hom::quotient;
use crate::module::{Element, Module, ModuleSpec};
use crate::submodule::{generate, Limits};

use super::HomSpec;

/// Instances and parameters for a harness run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corpus {
    pub modules: Vec<ModuleSpec>,
    pub classes: Vec<ClassName>,
    pub homs: Vec<HomSpec>,
    /// Random families drawn per instance for the family checks.
    pub families: usize,
    pub seed: u64,
    #[serde(skip)]
    pub limits: Limits,
    #[serde(skip)]
    pub fault: Option<Fault>,
}

impl Default for Corpus {
    fn default() -> Self {
        Self::standard(24)
    }
}

impl Corpus {
    /// Z/n over Z/n for 2 ≤ n ≤ `max_modulus`, a handful of non-cyclic modules, all
    /// classes, and the fixed hom suite.
    pub fn standard(max_modulus: u64) -> Self {
        let mut modules: Vec<ModuleSpec> = (2..=max_modulus).map(ModuleSpec::cyclic).collect();
        modules.extend([
            ModuleSpec::new(2, vec![2, 2]),
            ModuleSpec::new(2, vec![2, 2, 2]),
            ModuleSpec::new(3, vec![3, 3]),
            ModuleSpec::new(4, vec![2, 4]),
            ModuleSpec::new(12, vec![2, 6]),
            ModuleSpec::new(4, vec![4, 4]),
        ]);
        Self {
            modules,
            classes: ClassName::ALL.to_vec(),
            homs: default_hom_suite(),
            families: 100,
            seed: 0,
            limits: Limits::default(),
            fault: None,
        }
    }

    /// One module, the given classes, no homs.
    pub fn single(module: ModuleSpec, classes: Vec<ClassName>) -> Self {
        Self {
            modules: vec![module],
            classes,
            homs: Vec::new(),
            ..Self::standard(1)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_fault(mut self, fault: Option<Fault>) -> Self {
        self.fault = fault;
        self
    }
}

fn spec(n: u64, orders: &[u64]) -> ModuleSpec {
    ModuleSpec::new(n, orders.to_vec())
}

fn hom(src: ModuleSpec, dst: ModuleSpec, images: &[&[u64]]) -> HomSpec {
    HomSpec::new(src, dst, images.iter().map(|c| c.to_vec()).collect())
}

fn quotient_map(m: ModuleSpec, gens: &[&[u64]]) -> Result<HomSpec> {
    let module = Module::from_spec(&m)?;
    let gens: Vec<Element> = gens.iter().map(|c| Element::new(c.to_vec())).collect();
    let n = generate(&module, &gens)?;
    let (_, proj) = quotient(&module, &n)?;
    Ok(HomSpec::of(&proj))
}

/// Surjections, inclusions, zero maps, endomorphisms and quotient projections.
pub fn default_hom_suite() -> Vec<HomSpec> {
    let mut suite = vec![
        hom(spec(4, &[4]), spec(4, &[2]), &[&[1]]),
        hom(spec(4, &[2]), spec(4, &[4]), &[&[2]]),
        hom(spec(2, &[2]), spec(2, &[2]), &[&[0]]),
        hom(spec(6, &[6]), spec(6, &[6]), &[&[1]]),
        hom(spec(6, &[6]), spec(6, &[3]), &[&[1]]),
        hom(spec(6, &[3]), spec(6, &[6]), &[&[2]]),
        hom(spec(12, &[12]), spec(12, &[4]), &[&[1]]),
        hom(spec(2, &[2, 2]), spec(2, &[2]), &[&[1], &[0]]),
        hom(spec(2, &[2]), spec(2, &[2, 2]), &[&[1, 0]]),
        hom(spec(4, &[2, 4]), spec(4, &[4]), &[&[2], &[1]]),
        hom(spec(8, &[8]), spec(8, &[8]), &[&[2]]),
        hom(spec(6, &[6]), spec(6, &[6]), &[&[0]]),
    ];
    let quotients = [
        (spec(6, &[6]), vec![&[3][..]]),
        (spec(12, &[12]), vec![&[4][..]]),
        (spec(2, &[2, 2]), vec![&[1, 1][..]]),
        (spec(4, &[4, 4]), vec![&[1, 1][..]]),
    ];
    for (m, gens) in quotients {
        suite.push(quotient_map(m, &gens).expect("suite quotients are well formed"));
    }
    suite
}
