//! Erdős–Ko–Rado machinery for the 2-dimensional linear groups.
//!
//! The crate enumerates GL(2,q), SL(2,q), AGL(2,q), PGL(2,q) and PSL(2,q)
//! with their natural actions, builds derangement graphs, evaluates their
//! spectra through characters, solves the class-weight linear program behind
//! the weighted ratio bound, and produces re-checkable certificates for the
//! explicit intersecting sets and cliques.

pub mod certificate;
pub mod characters;
pub mod constructions;
pub mod ekr;
pub mod error;
pub mod field;
pub mod group;
pub mod lines;
pub mod lp;
pub mod reproduce;
pub mod search;
pub mod spectra;

pub use error::{Error, Result};
pub use field::{make_field, Fe, Field, QuadraticExtension};
pub use certificate::{Certificate, CertificateKind, Verification};
pub use characters::{CharacterRow, CharacterTable};
pub use group::{Family, GlCategory, GroupContext};
pub use lp::{LpInstance, LpResult, LpStatus, Tying};
pub use reproduce::{CriterionReport, QFilter};
pub use search::{Budget, Optimality, SearchOutcome, Target};
pub use spectra::{SpectrumReport, WeightVector};
