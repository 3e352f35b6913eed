//! Exact deciders for three majorization pre-orders framed as gambling games:
//! plain majorization of dice, conditional majorization of correlated sources
//! and majorization of classical channels. Every verdict comes with a proof
//! that can be re-checked in exact rational arithmetic: a relabeling or
//! simulation witness when the relation holds, a distinguishing game when it
//! does not.
//!
//! The algorithms are generic over [`Scalar`]; the aliases below fix the
//! scalar to exact rationals.

pub mod channel;
pub mod cli;
pub mod conditional;
pub mod decomp;
pub mod entropy;
pub mod error;
pub mod io;
pub mod lp;
pub mod majorization;
pub mod numerics;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar used by every decision procedure.
pub type Rat = num_rational::BigRational;
pub type RatMat = numerics::Mat<Rat>;
pub type RatProbVector = numerics::ProbVector<Rat>;
pub type RatSubDistribution = numerics::SubDistribution<Rat>;
pub type RatJoint = conditional::JointDistribution<Rat>;
pub type RatChannel = channel::ChannelMatrix<Rat>;
