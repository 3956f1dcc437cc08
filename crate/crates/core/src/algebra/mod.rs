//! Exact arithmetic: rationals, binomials, truncated bivariate series and the
//! weight fractions used by the localization engine.

mod matrix;
mod numbers;
mod poly;
mod series;
mod vfraction;

pub use matrix::SeriesMatrix;
pub use numbers::{binom, binom_rational, factorial, fmt_rational, int, multiset, parse_rational, rat, Rational};
pub use poly::VPoly;
pub(crate) use series::monomial_string;
pub use series::{f_series, Series, SeriesTerm};
pub use vfraction::VFraction;
