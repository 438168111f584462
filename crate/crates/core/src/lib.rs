//! Planar (two-dimensional) hydrogen-like Dirac atom in a weak perpendicular
//! magnetic field: bound-state energies, first- and second-order Zeeman
//! coefficients, magnetizabilities, and the numerical machinery used to
//! cross-check every closed form.

pub mod coulomb;
pub mod ddouble;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod perturb;
pub mod qnum;
pub mod radial;
pub mod real;
pub mod report_io;
pub mod specfun;
pub mod spinors;
pub mod sturmian;
pub mod tables;
pub mod units;
pub mod validate;
pub mod variational;

pub use error::{Error, Result};
pub use qnum::{Channel, HalfOdd, PhysicsConfig, QuantumState};
pub use real::{DoubleDouble, Real};
