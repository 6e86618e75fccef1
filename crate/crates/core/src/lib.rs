//! Equidistant spacings: families of labeled point sets in which every pair of
//! points from different classes is at distance exactly 1.

pub mod analytic;
pub mod bench;
pub mod error;
pub mod gluing;
pub mod linalg;
pub mod orthocentric;
pub mod signatures;
pub mod spacing;
pub mod transforms;

pub use error::{Error, Result};
pub use analytic::{AnalyticClass, AnalyticSpacing, ExtentResult, Flavor};
pub use linalg::{Basis, Vector, DEFAULT_TOL};
pub use signatures::Signature;
pub use spacing::{LabeledClass, LabeledPointSet, VerifyReport};
