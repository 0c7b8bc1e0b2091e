//! Exact computer algebra for twisted rings of differential operators on
//! regular toric varieties.
//!
//! The crate has three layers:
//!
//! * combinatorial data: integer lattices ([`intlat`]), regular fans and
//!   sign-reflections of their rays ([`fan`]), invariant Weil divisors and
//!   class groups ([`divisor`]);
//! * operator algebra: the Weyl algebra with exact rational coefficients,
//!   normal ordering, partial Fourier transforms and Euler-operator canonical
//!   forms ([`weyl`]), and the quotient presentation of twisted operator
//!   rings with a decidable equality test ([`twisted`]);
//! * representation theory: Chevalley operators, section and Čech cohomology
//!   bases, weights, primitive vectors and dimension cross-checks ([`slrep`]).
//!
//! Everything is computed in arbitrary-precision integer or rational
//! arithmetic; there is no floating point anywhere.

pub mod divisor;
pub mod fan;
pub mod intlat;
pub mod report;
pub mod slrep;
pub mod suite;
pub mod twisted;
pub mod weyl;
