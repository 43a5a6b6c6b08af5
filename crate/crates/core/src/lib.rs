pub mod cfrac;
pub mod cli;
pub mod jacobi;
pub mod ncpoly;
pub mod omega;
pub mod oracle;
pub mod prodstate;
pub mod rational;

pub use ncpoly::{NCPolynomial, NCSeries, Word};
pub use rational::Rational;
