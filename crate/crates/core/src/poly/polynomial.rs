use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{PolyError, Rational};

/// Exponent vector `[e1, .., ek]` for `u1^e1 * .. * uk^ek`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// `u1`, then `u2`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn with_exponent(&self, index: usize, exp: u32) -> Monomial {
        let mut exps = self.0.clone();
        exps[index] = exp;
        Monomial(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `u1..uk` over the rationals.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(num_vars), c);
        }
        p
    }

    /// The variable `u_{index+1}`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index {index} out of range");
        let mut p = Self::zero(num_vars);
        p.terms.insert(Monomial::var(num_vars, index), Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(num_vars);
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::VarMismatch {
                    left: num_vars,
                    right: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.num_vars))
    }

    /// Total degree in the `u` variables; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// The common total degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Cohomological degree (each `u_i` has degree 2) of a homogeneous polynomial.
    pub fn cohomological_degree(&self) -> Option<u32> {
        self.homogeneous_degree().map(|d| 2 * d)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::VarMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        let mut out = Polynomial::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one(self.num_vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Splits `self` as `Σ_d a_d · u_index^d`, with `a_d` free of `u_index`.
    pub(crate) fn coefficients_in(&self, index: usize) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.exponents()[index];
            out.entry(d)
                .or_insert_with(|| Polynomial::zero(self.num_vars))
                .add_term(m.with_exponent(index, 0), c.clone());
        }
        out
    }

    /// Multiplies by `u_index^exp`.
    pub(crate) fn shift(&self, index: usize, exp: u32) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let e = m.exponents()[index] + exp;
                    (m.with_exponent(index, e), c.clone())
                })
                .collect(),
        }
    }

    /// Re-embeds into `total` variables, placing this polynomial's variables
    /// starting at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Polynomial {
        assert!(offset + self.num_vars <= total);
        Polynomial {
            num_vars: total,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = vec![0; total];
                    exps[offset..offset + self.num_vars].copy_from_slice(m.exponents());
                    (Monomial(exps), c.clone())
                })
                .collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on a variable-count mismatch; use [`Polynomial::checked_add`] otherwise.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "u{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Terms from highest to lowest in graded-lex order, e.g. `2*u1^2 - u1*u2 + 3/2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn u(k: usize, i: usize) -> Polynomial {
        Polynomial::var(k, i)
    }

    fn c(k: usize, n: i64) -> Polynomial {
        Polynomial::constant(k, rat(n))
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = u(1, 0);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn add_examples() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        let lhs = &(&u1 + &u2) + &(&u1 - &u2);
        assert_eq!(lhs, u1.scale(&rat(2)));

        let p = &u1.pow(2) + &c(2, 3);
        let q = &u1.pow(2).scale(&rat(2)) - &c(2, 3);
        assert_eq!(&p + &q, u1.pow(2).scale(&rat(3)));
    }

    #[test]
    fn mul_examples() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        assert_eq!(
            &(&u1 + &u2) * &(&u1 - &u2),
            &u1.pow(2) - &u2.pow(2)
        );
        let p = &u1.pow(3) - &u2;
        assert_eq!(&p * &Polynomial::one(2), p);
        let lhs = &(&u1 * &u2) * &(&u1 - &u2);
        let rhs = &(&u1.pow(2) * &u2) - &(&u1 * &u2.pow(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mismatched_variable_counts_error() {
        let err = u(2, 0).checked_add(&u(3, 0)).unwrap_err();
        assert_eq!(err, PolyError::VarMismatch { left: 2, right: 3 });
        assert!(u(1, 0).checked_mul(&u(2, 1)).is_err());
    }

    #[test]
    fn eval_examples() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        let p = &u1.pow(2) - &u2.pow(2);
        assert_eq!(p.eval(&[rat(3), rat(1)]).unwrap(), rat(8));
        let q = &(&u1 * &u2) * &(&u1 - &u2);
        assert_eq!(q.eval(&[rat(1), rat(2)]).unwrap(), rat(-2));
        let r = &p + &c(2, 7);
        assert_eq!(r.eval(&[rat(0), rat(0)]).unwrap(), rat(7));
        assert!(matches!(
            p.eval(&[rat(1)]),
            Err(PolyError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn display_is_descending_graded_lex() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        let p = &(&(&u1.pow(2).scale(&rat(2)) - &(&u1 * &u2).scale(&rat(2))) + &u2.pow(2))
            + &Polynomial::constant(2, ratio(-3, 2));
        assert_eq!(p.to_string(), "2*u1^2 - 2*u1*u2 + u2^2 - 3/2");
        assert_eq!(Polynomial::zero(3).to_string(), "0");
        assert_eq!((-&u2).to_string(), "-u2");
    }

    #[test]
    fn degrees() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        let p = &(&u1 * &u2) + &u1.pow(2);
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.cohomological_degree(), Some(4));
        let q = &p + &u1;
        assert_eq!(q.homogeneous_degree(), None);
        assert_eq!(q.degree(), Some(2));
        assert_eq!(Polynomial::zero(2).degree(), None);
    }

    #[test]
    fn from_terms_sums_repeats() {
        let p = Polynomial::from_terms(2, vec![(vec![1, 0], rat(1)), (vec![1, 0], rat(-1))]).unwrap();
        assert!(p.is_zero());
        assert!(Polynomial::from_terms(2, vec![(vec![1], rat(1))]).is_err());
    }

    #[test]
    fn embed_moves_variables() {
        let p = &u(1, 0).pow(2) + &c(1, 1);
        let e = p.embed(3, 2);
        assert_eq!(e, &u(3, 2).pow(2) + &c(3, 1));
    }
}
