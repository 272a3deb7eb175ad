//! Exact vector-lattice laboratory over piecewise-linear functions.
//!
//! Functions live on a compact space made of finitely many closed rational
//! intervals. All arithmetic is exact. Supports, kernels and the usual
//! topological operators are computed symbolically on [`Region`]s, which
//! lets band and projection-band questions be decided exactly.

pub mod construct;
pub mod error;
pub mod finlat;
pub mod gen;
pub mod ideals;
pub mod pl;
pub mod props;
pub mod rational;
pub mod region;
pub mod report;
pub mod seq;
pub mod space;
pub mod urysohn;

pub use error::{Error, Result};
pub use pl::{PLFun, PlOp};
pub use rational::Rational;
pub use region::{Piece, Region};
pub use space::Space;
