//! Structure spaces of finite modules over Z/nZ.
//!
//! A finite module is presented as a product of cyclic groups. Its submodules are
//! enumerated exhaustively, sorted into the distinguished classes of
//! [`ClassName`], and each class is topologized by the closed subbasis
//! `C(N) = {L ∈ D(M) | N ⊆ L}`. The [`harness`] module checks the structural
//! theorems about these spaces on a corpus of small modules.

pub mod bitset;
pub mod classes;
pub mod error;
pub mod fault;
pub mod harness;
pub mod hom;
pub mod module;
pub mod ring;
pub mod submodule;
pub mod topology;

pub use bitset::BitSet;
pub use classes::{is_in_class, members_of_class, ClassName};
pub use error::{Error, Result};
pub use fault::Fault;
pub use hom::{make_hom, phi_shriek, quotient, verify_conmap, Hom};
pub use module::{Element, Module, ModuleSpec};
pub use ring::{Ideal, Ring};
pub use submodule::{
    all_submodules, annihilator, generate, intersect, sum, Limits, SubId, Submodule,
    SubmoduleLattice,
};
pub use topology::{build_space, is_top_module, PointSet, StructureSpace};
