//! Exact polynomial algebra over the rationals.
//!
//! Polynomials live in `Q[x_1, ..., x_n]`. Ideals and submodules of free
//! modules are handled either globally (Buchberger) or in the localization
//! at the origin (Mora's tangent cone normal form with a local degree
//! ordering). Everything above this crate asks its questions through
//! [`Ideal`] and [`Module`].

pub mod gcd;
pub mod ideal;
pub mod module;
pub mod order;
pub mod parse;
pub mod poly;
pub mod radical;
pub mod stdbasis;
pub mod vector;

pub use ideal::{Ideal, Membership};
pub use module::Module;
pub use order::{ModuleOrder, MonomialOrder};
pub use parse::{parse, ParseError};
pub use poly::{Monomial, Poly, Q};
pub use radical::RadicalVerdict;
pub use stdbasis::StdBasis;
pub use vector::Vector;

/// Rational number from a pair of small integers.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}
