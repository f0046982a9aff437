pub mod codes;
pub mod cohomology;
pub mod corpus;
pub mod curves;
pub mod error;
pub mod milnor;
pub mod prolong;
pub mod series;

pub use codes::{DerivedVector, Letter, RvtCode, SmallGrowthVector, SpatialLetter, Tower};
pub use curves::{PlaneCurveGerm, PuiseuxCharacteristic};
pub use error::{Error, ErrorKind, Result};
pub use series::{Order, Rational, TruncatedSeries};
