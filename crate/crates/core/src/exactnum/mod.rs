//! Exact arithmetic in Q and in a closed catalog of number fields.
//!
//! Fields are cyclotomic Q(zeta_n), quadratic Q(sqrt d) and real multiquadratic
//! composites such as Q(sqrt2, sqrt3, sqrt7).  Elements are stored as integer
//! power-basis numerators over one common denominator.

mod element;
mod field;
pub mod interval;
mod parse;
pub mod ratmat;

pub use element::AlgebraicNumber;
pub use field::{
    compose_fields, cyclotomic, embeds, multiquadratic, quadratic, rationals, sqrt_of, Field,
    FieldKind, NumberField,
};
pub use interval::Interval;
pub use parse::{const_home, parse_expr, parse_number, parse_number_in, NumExpr};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("designated embedding is not real and the element is not real")]
    NotRealEmbedding,
    #[error("unsupported composite of {0} and {1}")]
    UnsupportedComposite(String, String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Convenience constructor for rationals.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Render a rational as "p" or "p/q".
pub fn rat_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p" or "p/q".
pub fn parse_rat(s: &str) -> Result<Rational, NumError> {
    let s = s.trim();
    let bad = || NumError::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(NumError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
