//! Exact integer polynomials and the numeric root machinery built on them.

mod classify;
mod contfrac;
mod cyclotomic;
mod intpoly;
mod resultant;
mod roots;

pub use classify::{
    classify_roots, mahler_measure, ClassifiedRoot, Provenance, RootClass, RootProfile, EPS_CIRCLE,
    ROOT_PRECISION,
};
pub use contfrac::{
    badly_approximable_witness, continued_fraction, continued_fraction_interval,
    continued_fraction_rational, ApproxVerdict, ContinuedFraction,
};
pub use cyclotomic::{cyclotomic, divisors, euler_phi, orders_up_to_degree};
pub use intpoly::IntPoly;
pub use resultant::{bareiss_det, resultant_exact, sylvester};
pub use roots::{aberth, cluster, roots, roots_hp, HpRoot, Root, POLISH_BITS};
