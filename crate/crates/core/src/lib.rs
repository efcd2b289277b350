//! Finite sets with variable finite group actions, the spans between them,
//! bisets, Burnside rings and the passage between biset functors and
//! deflative Mackey functors, all over explicit small finite groups.
//!
//! Combinatorial data (group elements, points) are plain indices. Functor
//! values are matrices over a [`Scalar`] coefficient type; integers are the
//! default and the acceptance path.

pub mod biset;
pub mod error;
pub mod group;
pub mod mackey;
pub mod random;
pub mod gset;
pub mod scalar;
pub mod span;
pub mod twocat;

pub use error::{Error, Result};
pub use scalar::{Matrix, Scalar};

/// Integer matrices, the default functor value type.
pub type ZMatrix = Matrix<i64>;
/// Rational matrices, used to cross-check integer results.
pub type QMatrix = Matrix<num_rational::Rational64>;
