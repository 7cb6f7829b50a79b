//! Monogamy and polygamy bounds for multiqubit entanglement.
//!
//! The crate computes concurrence and concurrence of assistance for small
//! pure multiqubit states and evaluates power-weighted lower (monogamy) and
//! upper (polygamy) bounds on the one-to-rest entanglement, along with the
//! weaker comparison bounds they dominate.
//!
//! Every numeric type is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which is what the tolerances
//! throughout are tuned for.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod real;
pub mod rng;
pub mod scalar;
pub mod states;

pub use bounds::{
    check_conditions, max_admissible_gamma, partition_gammas, theorem1_bound, theorem2_bound,
    theorem3_bound, theorem4_bound, theorem5_bound, theorem6_bound, GammaLimit, Orientation,
    Regime,
};
pub use error::{Error, Result};
pub use measures::{MeasureKind, RoofMode};
pub use real::Real;

pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type DensityMatrix = linalg::DensityMatrix<f64>;
pub type StateVector = states::StateVector<f64>;
pub type GeneralizedSchmidt = states::GeneralizedSchmidt<f64>;
pub type MeasureVector = measures::MeasureVector<f64>;
pub type ChainParams = scalar::ChainParams<f64>;
pub type WeightedCoefficients = scalar::WeightedCoefficients<f64>;
pub type ExponentConfig = bounds::ExponentConfig<f64>;
pub type PartitionConditions = bounds::PartitionConditions<f64>;
pub type BoundReport = bounds::BoundReport<f64>;
