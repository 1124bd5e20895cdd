//! Exact arithmetic over the symmetric algebra of the torus dual.
//!
//! [`Polynomial`] is a sparse multivariate polynomial in `u1..uk` with
//! arbitrary-precision rational coefficients. [`LinearForm`] is a homogeneous
//! degree-one polynomial, used for isotropy weights. [`RationalFraction`] is a
//! polynomial divided by a product of linear forms: the only denominators that
//! fixed-point contributions can produce, which lets every reduction be done
//! by exact linear division instead of a general multivariate gcd.
//!
//! In the Cartan-model grading each `u_i` has cohomological degree 2.

mod fraction;
mod linear;
mod polynomial;

pub use fraction::{sum_fractions, NotPolynomial, RationalFraction};
pub use linear::{divide_by_linear, LinearForm};
pub use polynomial::{Monomial, Polynomial};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Exact rational scalar. Always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear form is identically zero")]
    ZeroLinearForm,
    #[error("denominator scalar is zero")]
    ZeroScalar,
    #[error("denominator vanishes at the evaluation point")]
    DivisionByZero,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text rendering: `a` for integers, `a/b` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator beyond f64 range individually
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rational("6/4"), Some(ratio(3, 2)));
        assert_eq!(parse_rational(" -7 "), Some(rat(-7)));
        assert_eq!(parse_rational("1/-2"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_rational(&rat(4)), "4");
    }
}
