//! Decision procedures for inequalities in distributive lattice-ordered monoids and
//! lattice-ordered groups, with checkable countermodels.
//!
//! The pipeline: parse a [`terms::Statement`], split it into basic inequalities
//! ([`normalform`]), and search for a right-invariant preorder on initial subterms
//! ([`decide`]). A preorder found yields a countermodel ([`models`]); exhausting the
//! search proves validity. Statements with inverses are first reduced to inverse-free
//! ones ([`invelim`]).

pub mod decide;
pub mod error;
pub mod invelim;
pub mod lift;
pub mod models;
pub mod normalform;
pub mod oracle;
pub mod rightorder;
pub mod search;
pub mod terms;

pub use error::{Error, Result};
