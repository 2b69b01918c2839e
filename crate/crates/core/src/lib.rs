//! Generating functions of torsion growth in cyclic covers.
//!
//! The central objects are the power series `R_x(z) = sum' log|1 - x^r| z^r` and
//! `E(z) = sum log|Res(f, t^r - 1)| z^r` for an integer polynomial `f`, together with
//! their meromorphic continuation, pole structure and boundary behaviour.

pub mod boundary;
pub mod continuation;
pub mod error;
pub mod hp;
pub mod lvalues;
pub mod polyalg;
pub mod quad;
pub mod report;
pub mod resultants;
pub mod rxcore;
pub mod sum;
pub mod torsion;

pub use error::{Error, Result};
pub use num_complex::Complex64;
