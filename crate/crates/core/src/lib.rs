//! Automated prover for linear information inequalities with existentially
//! quantified auxiliary random variables.
//!
//! ```
//! use infoprove::elaborate::certificate_to_proof;
//! use infoprove::model::copy_lemma;
//! use infoprove::rules::check_proof;
//! use infoprove::search::{prove_eii, SearchOptions};
//! use infoprove::syntax::parse_eii;
//!
//! let e = parse_eii("forall A B C D: 2 I(C;D) <= I(A;B) + I(A;C,D) + 3 I(C;D|A) + I(C;D|B)")?;
//! let out = prove_eii(&e, &[copy_lemma(2, 2)], &SearchOptions::default())?;
//! let proof = certificate_to_proof(out.certificate().unwrap())?;
//! assert!(check_proof(&proof).is_valid());
//! # Ok::<(), infoprove::Error>(())
//! ```

pub mod catalog;
pub mod cone;
pub mod elaborate;
pub mod entropy;
pub mod error;
pub mod json;
pub mod linalg;
pub mod model;
pub mod prover;
pub mod rational;
pub mod region;
pub mod rules;
pub mod search;
pub mod simplex;
pub mod syntax;

pub use entropy::{EntropicVector, EntropyExpr, Pmf, SubsetIndex, VarContext};
pub use error::{Error, Result};
pub use rational::Q;
