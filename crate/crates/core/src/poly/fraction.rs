use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{divide_by_linear, LinearForm, PolyError, Polynomial, Rational};

/// `numerator / (denom_scalar · Π denom_factors)`.
///
/// Canonical form: every factor is monic (first nonzero coefficient 1), the
/// factors are sorted, no factor divides the numerator, and the scalar has
/// been folded into the numerator so `denom_scalar` is 1. Two fractions
/// denote the same element exactly when they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFraction {
    numerator: Polynomial,
    denom_scalar: Rational,
    denom_factors: Vec<LinearForm>,
}

/// A fraction that was expected to be a polynomial still has linear factors
/// in its reduced denominator.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a polynomial: {remainder}")]
pub struct NotPolynomial {
    pub remainder: RationalFraction,
}

impl RationalFraction {
    pub fn new(
        numerator: Polynomial,
        denom_scalar: Rational,
        denom_factors: Vec<LinearForm>,
    ) -> Result<Self, PolyError> {
        if denom_scalar.is_zero() {
            return Err(PolyError::ZeroScalar);
        }
        let k = numerator.num_vars();
        let mut scalar = denom_scalar;
        let mut factors = Vec::with_capacity(denom_factors.len());
        for l in denom_factors {
            if l.num_vars() != k {
                return Err(PolyError::VarMismatch {
                    left: k,
                    right: l.num_vars(),
                });
            }
            let (lead, monic) = l.normalized().ok_or(PolyError::ZeroLinearForm)?;
            scalar *= lead;
            factors.push(monic);
        }
        let mut out = RationalFraction {
            numerator: numerator.scale(&scalar.recip()),
            denom_scalar: Rational::one(),
            denom_factors: factors,
        };
        out.reduce();
        Ok(out)
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFraction {
            numerator: p,
            denom_scalar: Rational::one(),
            denom_factors: Vec::new(),
        }
    }

    pub fn zero(num_vars: usize) -> Self {
        Self::from_polynomial(Polynomial::zero(num_vars))
    }

    pub fn num_vars(&self) -> usize {
        self.numerator.num_vars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denom_scalar(&self) -> &Rational {
        &self.denom_scalar
    }

    pub fn denom_factors(&self) -> &[LinearForm] {
        &self.denom_factors
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Cancels every denominator factor that divides the numerator, then
    /// restores canonical order.
    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denom_factors.clear();
            return;
        }
        let mut kept = Vec::with_capacity(self.denom_factors.len());
        for l in std::mem::take(&mut self.denom_factors) {
            match divide_by_linear(&self.numerator, &l).expect("factors are nonzero") {
                Some(q) => self.numerator = q,
                None => kept.push(l),
            }
        }
        kept.sort();
        self.denom_factors = kept;
    }

    fn factor_counts(&self) -> BTreeMap<&LinearForm, usize> {
        let mut counts = BTreeMap::new();
        for l in &self.denom_factors {
            *counts.entry(l).or_insert(0) += 1;
        }
        counts
    }

    /// Exact sum over the least common multiple of the two denominators.
    pub fn checked_add(&self, other: &RationalFraction) -> Result<RationalFraction, PolyError> {
        if self.num_vars() != other.num_vars() {
            return Err(PolyError::VarMismatch {
                left: self.num_vars(),
                right: other.num_vars(),
            });
        }
        let (ca, cb) = (self.factor_counts(), other.factor_counts());
        let mut lcm: BTreeMap<&LinearForm, usize> = ca.clone();
        for (l, &n) in &cb {
            let e = lcm.entry(l).or_insert(0);
            *e = (*e).max(n);
        }
        let cofactor = |own: &BTreeMap<&LinearForm, usize>| {
            let mut p = Polynomial::one(self.num_vars());
            for (l, &n) in &lcm {
                let missing = n - own.get(l).copied().unwrap_or(0);
                if missing > 0 {
                    p = &p * &l.to_polynomial().pow(missing as u32);
                }
            }
            p
        };
        let numerator = &(&self.numerator * &cofactor(&ca)) + &(&other.numerator * &cofactor(&cb));
        let denom_factors = lcm
            .iter()
            .flat_map(|(l, &n)| std::iter::repeat_n((*l).clone(), n))
            .collect();
        let mut out = RationalFraction {
            numerator,
            denom_scalar: Rational::one(),
            denom_factors,
        };
        out.reduce();
        Ok(out)
    }

    pub fn checked_mul(&self, other: &RationalFraction) -> Result<RationalFraction, PolyError> {
        let numerator = self.numerator.checked_mul(&other.numerator)?;
        let mut factors = self.denom_factors.clone();
        factors.extend(other.denom_factors.iter().cloned());
        let mut out = RationalFraction {
            numerator,
            denom_scalar: Rational::one(),
            denom_factors: factors,
        };
        out.reduce();
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> RationalFraction {
        if s.is_zero() {
            return RationalFraction::zero(self.num_vars());
        }
        RationalFraction {
            numerator: self.numerator.scale(s),
            denom_scalar: self.denom_scalar.clone(),
            denom_factors: self.denom_factors.clone(),
        }
    }

    /// The polynomial this fraction equals, if its reduced denominator is scalar.
    pub fn to_polynomial(&self) -> Result<Polynomial, NotPolynomial> {
        if self.denom_factors.is_empty() {
            Ok(self.numerator.scale(&self.denom_scalar.recip()))
        } else {
            Err(NotPolynomial {
                remainder: self.clone(),
            })
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let mut den = self.denom_scalar.clone();
        for l in &self.denom_factors {
            den *= l.eval(point)?;
        }
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(self.numerator.eval(point)? / den)
    }

    pub fn embed(&self, total: usize, offset: usize) -> RationalFraction {
        let mut factors: Vec<_> = self
            .denom_factors
            .iter()
            .map(|l| l.embed(total, offset))
            .collect();
        factors.sort();
        RationalFraction {
            numerator: self.numerator.embed(total, offset),
            denom_scalar: self.denom_scalar.clone(),
            denom_factors: factors,
        }
    }
}

/// Sums fractions left to right; the result does not depend on the order.
pub fn sum_fractions<'a, I>(num_vars: usize, items: I) -> Result<RationalFraction, PolyError>
where
    I: IntoIterator<Item = &'a RationalFraction>,
{
    items
        .into_iter()
        .try_fold(RationalFraction::zero(num_vars), |acc, f| acc.checked_add(f))
}

impl fmt::Display for RationalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_factors.is_empty() && self.denom_scalar.is_one() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({}) / (", self.numerator)?;
        let mut first = true;
        if !self.denom_scalar.is_one() {
            write!(f, "{}", self.denom_scalar)?;
            first = false;
        }
        for l in &self.denom_factors {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            write!(f, "({l})")?;
        }
        f.write_str(")")
    }
}
