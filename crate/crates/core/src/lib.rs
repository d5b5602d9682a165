pub mod bimod;
pub mod canonical;
pub mod cli;
pub mod config;
pub mod error;
pub mod factor;
pub mod field;
pub mod files;
pub mod funcfield;
pub mod hs;
pub mod linalg;
pub mod numfield;
pub mod parse;
pub mod poly;
pub mod sample;
pub mod tensor;

pub use error::{Error, Result};
pub use field::{Field, Rational, Rationals};
pub use poly::{Poly, RatPoly};
