//! Finite Novikov series and Laurent polynomials over them.

mod coeff;
mod laurent;
mod novikov;

pub use coeff::{gauss, gauss_inv, gauss_pow, gauss_real, gauss_to_c64, render_gauss, Coeff, GaussRat};
pub use laurent::LaurentPoly;
pub use novikov::{LambdaClass, NovikovScalar, Valuation};
