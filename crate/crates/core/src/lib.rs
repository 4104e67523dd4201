//! Converse bounds for data-exchange problems.
//!
//! A data-exchange problem has `K` nodes on a shared broadcast bus; each node
//! stores some bits and demands bits stored elsewhere. This crate models such
//! problems by their `(demanders, owners, count)` classes and provides
//!
//! - the generic communication-load lower bound and its profile form
//!   ([`bound`]),
//! - generators and closed forms for coded caching, data shuffling and coded
//!   distributed computing ([`scenarios`]),
//! - the index-coding view: the generalized independence number, the
//!   tightness test for unicast problems and a clique-cover scheme with a
//!   decoding verifier ([`index_coding`]),
//! - brute-force references for small instances ([`oracle`]),
//! - the reproduction matrix used by the CLI ([`reproduce`]).
//!
//! All bounds are exact rationals.

mod error;
pub mod format;
pub mod gf2;
pub mod instance;
pub mod nodeset;
pub mod rational;

pub mod bound;
pub mod index_coding;
pub mod oracle;
pub mod report;
pub mod reproduce;
pub mod scenarios;

pub use error::{BoundError, IndexCodingError, InstanceError, OracleError, ScenarioError};
pub use instance::{aggregate, BitClass, DemandProfile, ExchangeInstance, ValidationReport};
pub use nodeset::NodeSet;
pub use rational::Rational;
