use std::fmt;

use num_traits::{One, Zero};

use super::{PolyError, Polynomial, Rational};

/// A homogeneous linear form `Σ c_i u_i`, e.g. an isotropy weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinearForm::new(coeffs.iter().map(|&c| super::rat(c)).collect())
    }

    /// The coordinate form `u_{index+1}`.
    pub fn coordinate(num_vars: usize, index: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); num_vars];
        coeffs[index] = Rational::one();
        LinearForm { coeffs }
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn neg(&self) -> LinearForm {
        self.scale(&-Rational::one())
    }

    /// `(lead, monic)` with `self = lead · monic` and the first nonzero
    /// coefficient of `monic` equal to 1. `None` for the zero form.
    pub fn normalized(&self) -> Option<(Rational, LinearForm)> {
        let lead = self.coeffs.iter().find(|c| !c.is_zero())?.clone();
        let inv = lead.recip();
        Some((lead, self.scale(&inv)))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.coeffs.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.coeffs.len(),
                got: point.len(),
            });
        }
        Ok(self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum())
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| super::rational_to_f64(c) * x)
            .sum()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let k = self.coeffs.len();
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| {
            let mut exps = vec![0; k];
            exps[i] = 1;
            (exps, c.clone())
        });
        Polynomial::from_terms(k, terms).expect("exponent vectors have length k")
    }

    pub fn embed(&self, total: usize, offset: usize) -> LinearForm {
        let mut coeffs = vec![Rational::zero(); total];
        coeffs[offset..offset + self.coeffs.len()].clone_from_slice(&self.coeffs);
        LinearForm { coeffs }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

/// Exact division of `p` by the linear form `l`.
///
/// Returns `Some(q)` with `p = q·l` when `l` divides `p`, and `None`
/// otherwise. Eliminates the first variable with a nonzero coefficient in `l`.
pub fn divide_by_linear(p: &Polynomial, l: &LinearForm) -> Result<Option<Polynomial>, PolyError> {
    let index = l
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(PolyError::ZeroLinearForm)?;
    divide_eliminating(p, l, index)
}

/// Synthetic division with `p` viewed as a univariate polynomial in
/// `u_index` over the remaining variables.
pub(crate) fn divide_eliminating(
    p: &Polynomial,
    l: &LinearForm,
    index: usize,
) -> Result<Option<Polynomial>, PolyError> {
    if l.num_vars() != p.num_vars() {
        return Err(PolyError::VarMismatch {
            left: p.num_vars(),
            right: l.num_vars(),
        });
    }
    if l.is_zero() {
        return Err(PolyError::ZeroLinearForm);
    }
    let lead = l.coeffs()[index].clone();
    if lead.is_zero() {
        return Err(PolyError::ZeroLinearForm);
    }
    let k = p.num_vars();
    if p.is_zero() {
        return Ok(Some(Polynomial::zero(k)));
    }

    // l = lead·(u_index − root), root = −(l − lead·u_index)/lead
    let mut rest = l.coeffs().to_vec();
    rest[index] = Rational::zero();
    let root = LinearForm::new(rest).scale(&-lead.recip()).to_polynomial();

    let coeffs = p.coefficients_in(index);
    let top = *coeffs.keys().next_back().expect("p is nonzero");
    if top == 0 {
        // free of u_index but l depends on it
        return Ok(None);
    }
    let zero = Polynomial::zero(k);
    let coeff = |d: u32| coeffs.get(&d).unwrap_or(&zero);

    // b_{d-1} = a_d + root·b_d, running from the top degree down
    let mut quotient = Polynomial::zero(k);
    let mut carry = Polynomial::zero(k);
    for d in (1..=top).rev() {
        carry = coeff(d) + &(&root * &carry);
        quotient = &quotient + &carry.shift(index, d - 1);
    }
    let remainder = coeff(0) + &(&root * &carry);
    if !remainder.is_zero() {
        return Ok(None);
    }
    Ok(Some(quotient.scale(&lead.recip())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn u(k: usize, i: usize) -> Polynomial {
        Polynomial::var(k, i)
    }

    #[test]
    fn difference_of_squares() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        let p = &u1.pow(2) - &u2.pow(2);
        let q = divide_by_linear(&p, &LinearForm::from_ints(&[1, -1])).unwrap();
        assert_eq!(q, Some(&u1 + &u2));
    }

    #[test]
    fn sum_of_squares_not_divisible() {
        let (u1, u2) = (u(2, 0), u(2, 1));
        let p = &u1.pow(2) + &u2.pow(2);
        // oracle: p(1,1) = 2 on the hyperplane u1 = u2
        assert_eq!(p.eval(&[rat(1), rat(1)]).unwrap(), rat(2));
        assert_eq!(divide_by_linear(&p, &LinearForm::from_ints(&[1, -1])).unwrap(), None);
    }

    #[test]
    fn zero_divides_trivially() {
        let q = divide_by_linear(&Polynomial::zero(1), &LinearForm::from_ints(&[1])).unwrap();
        assert_eq!(q, Some(Polynomial::zero(1)));
    }

    #[test]
    fn zero_form_is_an_error() {
        let err = divide_by_linear(&u(2, 0), &LinearForm::from_ints(&[0, 0])).unwrap_err();
        assert_eq!(err, PolyError::ZeroLinearForm);
    }

    #[test]
    fn constant_not_divisible() {
        let p = Polynomial::constant(2, rat(5));
        assert_eq!(divide_by_linear(&p, &LinearForm::from_ints(&[0, 3])).unwrap(), None);
    }

    #[test]
    fn non_unit_coefficients() {
        // (2u1 + 3u2)(u1 - u3) / (2u1 + 3u2)
        let l = LinearForm::from_ints(&[2, 3, 0]);
        let m = LinearForm::from_ints(&[1, 0, -1]);
        let p = &l.to_polynomial() * &m.to_polynomial();
        assert_eq!(divide_by_linear(&p, &l).unwrap(), Some(m.to_polynomial()));
    }

    #[test]
    fn normalization() {
        let (lead, monic) = LinearForm::from_ints(&[0, -2, 4]).normalized().unwrap();
        assert_eq!(lead, rat(-2));
        assert_eq!(monic, LinearForm::from_ints(&[0, 1, -2]));
        assert!(LinearForm::from_ints(&[0, 0]).normalized().is_none());
    }

    fn arb_linear(k: usize) -> impl Strategy<Value = LinearForm> {
        prop::collection::vec(-3i64..=3, k)
            .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
            .prop_map(|c| LinearForm::from_ints(&c))
    }

    fn arb_poly(k: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..=3, k), -5i64..=5), 0..6).prop_map(
            move |terms| {
                Polynomial::from_terms(k, terms.into_iter().map(|(e, c)| (e, rat(c)))).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn division_round_trip(p in arb_poly(3), l in arb_linear(3), m in arb_linear(3)) {
            // p·l is always divisible; p·m + 1 usually is not
            let prod = &p * &l.to_polynomial();
            let q = divide_by_linear(&prod, &l).unwrap();
            prop_assert_eq!(q.as_ref(), Some(&p));

            let other = &(&p * &m.to_polynomial()) + &Polynomial::one(3);
            if let Some(q) = divide_by_linear(&other, &l).unwrap() {
                prop_assert_eq!(&q * &l.to_polynomial(), other);
            }
        }

        #[test]
        fn eliminated_variable_is_irrelevant(p in arb_poly(3), l in arb_linear(3), divisible in any::<bool>()) {
            let target = if divisible { &p * &l.to_polynomial() } else { p.clone() };
            let mut results = Vec::new();
            for (i, c) in l.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    results.push(divide_eliminating(&target, &l, i).unwrap());
                }
            }
            for r in &results[1..] {
                prop_assert_eq!(r, &results[0]);
            }
        }
    }
}
