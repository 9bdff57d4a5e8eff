//! Exact computation with degree-truncated noncommutative power series.

pub mod cli;
pub mod coeff;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod morphism;
pub mod parse;
pub mod recenter;
pub mod series;
pub mod words;

pub use coeff::{Rational, Scalar};
pub use error::{Error, Result};
pub use exec::Exec;
pub use ideal::{commutator_reduce, CompletedIdealBasis, EnvElement};
pub use morphism::{invert_unit, lift_commutative_morphism, NCMorphism};
pub use parse::{parse_expression, parse_series, Alphabet};
pub use recenter::{recenter, Germ, LocalFunctionFamily, Point, Polydisk, Section};
pub use series::{CommSeries, NCSeries};
pub use words::Word;
