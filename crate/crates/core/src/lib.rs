pub mod budget;
pub mod code;
pub mod curve;
pub mod error;
pub mod extendability;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod parse;
pub mod secants;

pub use budget::Budget;
pub use curve::{CurvePoint, EllipticCurve};
pub use error::{Error, Result};
pub use geometry::{EllipticArc, Hyperplane, PointSet, ProjPoint, ProjSpace};
pub use gf::{Elem, Field};
