//! Primal, dual and channelled models of permutation and injection
//! problems, with propagators, consistency checkers, search and a SAT
//! encoding.

pub mod bench;
pub mod domain;
pub mod error;
pub mod lab;
pub mod model;
pub mod problems;
pub mod propagate;
pub mod sat;
pub mod search;
pub mod text;

pub use domain::Domain;
pub use error::{Error, Result};
pub use model::{
    build_injection_model, build_permutation_model, dual_equivalent_domains, Block, Constraint, InjTag, ModelSpec,
    PermTag, Problem, VarRef,
};
pub use propagate::{DomainStore, PropOutcome, Status};
