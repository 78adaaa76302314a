//! Motivic and numerical Donaldson–Thomas invariants of self-dual quivers with
//! zero potential, in both the linear and the orthosymplectic setting, and the
//! wall-crossing formulas relating them across slope functions.

pub mod arith;
pub mod classes;
pub mod decompose;
pub mod identities;
pub mod invariants;
pub mod motives;
pub mod oracle;
pub mod quiver;
pub mod series;
pub mod slope;
pub mod table;
pub mod torus;
pub mod wallcross;

pub use arith::{ArithError, Poly, RatFunc, Rational};
pub use classes::{DimVector, SdClass};
pub use invariants::{DtError, Engine, NoPoleReport, PoleEntry};
pub use oracle::{calibrate_signs, Calibration, CalibrationError, CalibrationReport, CheckRecord};
pub use quiver::{Edge, Forms, HalfInt, QuiverError, SelfDualQuiver, Violation};
pub use slope::{SlopeError, SlopeFunction};
pub use table::{InvariantTable, LinearRow, SdRow};
pub use wallcross::{EpsilonTable, WallCrossError};
