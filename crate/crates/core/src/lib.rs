//! Homotopical invariants of contact 3-manifolds presented by rational
//! contact surgery diagrams on Legendrian links.

pub mod calculus;
pub mod classify;
pub mod error;
pub mod exactmath;
pub mod invariants;
pub mod knotdata;
pub mod selftest;

pub use calculus::{ChainEntry, ExpansionChain};
pub use classify::{Cs1Entry, FamilyRecord, Flavor, Manifold, TightnessVerdict};
pub use error::{Error, Result};
pub use exactmath::{IntMatrix, Rational, SignatureTriple};
pub use knotdata::{Atlas, AtlasEntry, ContactSurgeryDiagram, LegendrianComponent};
