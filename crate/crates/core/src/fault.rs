//! Deliberate single-point faults used to show that the theorem checks are not vacuous.
//!
//! A lattice built with a fault threads it into the predicate or topology code it
//! targets. Production callers always pass `None`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classes::ClassName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Fault {
    /// The prime predicate forgets the `r ∈ (N : M)` disjunct.
    PrimeDropsAnnihilator,
    /// Point closures take the union of the subbasis sets containing the point.
    PointClosureUnion,
    /// The membership bit of submodule `sub` in `class` is inverted.
    FlipMembership { class: ClassName, sub: usize },
    /// N^ω intersects every submodule containing N instead of the class members.
    OmegaIgnoresClass,
    /// C(N) collects the points contained in N instead of those containing it.
    SubbasisReversed,
    /// Connectedness always reports true.
    ConnectedAlways,
}

impl Fault {
    /// The fixed fixture set exercised by the mutation-sensitivity gate.
    pub fn fixture_set() -> Vec<Fault> {
        vec![
            Fault::PrimeDropsAnnihilator,
            Fault::PointClosureUnion,
            Fault::FlipMembership {
                class: ClassName::Prime,
                sub: 1,
            },
            Fault::OmegaIgnoresClass,
            Fault::SubbasisReversed,
            Fault::ConnectedAlways,
        ]
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::PrimeDropsAnnihilator => write!(f, "prime-drops-annihilator"),
            Fault::PointClosureUnion => write!(f, "point-closure-union"),
            Fault::FlipMembership { class, sub } => write!(f, "flip-membership({class}, #{sub})"),
            Fault::OmegaIgnoresClass => write!(f, "omega-ignores-class"),
            Fault::SubbasisReversed => write!(f, "subbasis-reversed"),
            Fault::ConnectedAlways => write!(f, "connected-always"),
        }
    }
}
