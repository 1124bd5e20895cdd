//! Fixed-point localization of characteristic numbers.
//!
//! Each closed-leaf component contributes `s · c · p(L_X) / e(ν)` where
//! `p(L_X)` is the class evaluated on the isotropy weights and `e(ν) = ε·Πα`
//! is the equivariant Euler class of its normal bundle. The contributions sum
//! to a polynomial on the Lie algebra; its value at zero is the
//! characteristic number. A sum that fails to cancel to a polynomial means the
//! fixed-point data is inconsistent.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::classes::{
    class_degree, eval_at_weights, ClassDegree, ClassError, ClassExpr,
    GeneratorMonomial, WeightSystem,
};
use crate::poly::{NotPolynomial, PolyError, Polynomial, Rational, RationalFraction};

/// Which global sign multiplies each isolated contribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignConvention {
    /// No extra sign; positive constants reproduce classical torus-action values.
    #[default]
    Classical,
    /// Multiply by `(-1)^{q/2}`, for constants carrying their own orientation sign.
    PaperCorollary,
}

impl SignConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SignConvention::Classical => "classical",
            SignConvention::PaperCorollary => "paper_corollary",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "classical" => Some(SignConvention::Classical),
            "paper_corollary" => Some(SignConvention::PaperCorollary),
            _ => None,
        }
    }

    /// The factor `s` for codimension `q`.
    pub fn factor(self, q: u32) -> Rational {
        match self {
            SignConvention::PaperCorollary if (q / 2) % 2 == 1 => -Rational::one(),
            _ => Rational::one(),
        }
    }
}

/// One connected component of the closed-leaf set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComponent {
    pub id: String,
    pub weights: WeightSystem,
    /// Transverse volume constant `c_i`.
    pub constant: Rational,
    /// Hand-derived local integral for a non-isolated component; replaces the
    /// isolated-leaf evaluation when present.
    pub local_integral: Option<RationalFraction>,
}

impl FixedComponent {
    pub fn isolated(id: impl Into<String>, weights: WeightSystem) -> Self {
        FixedComponent {
            id: id.into(),
            weights,
            constant: Rational::one(),
            local_integral: None,
        }
    }

    pub fn is_isolated(&self) -> bool {
        self.local_integral.is_none()
    }
}

/// Fixed-point data of a torus action or Killing foliation: `k` Lie algebra
/// coordinates, transverse codimension `q`, and the closed-leaf components.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub k: usize,
    pub q: u32,
    pub components: Vec<FixedComponent>,
    pub sign_convention: SignConvention,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("k must be at least 1")]
    NoVariables,
    #[error("q must be even and at least 2 (got {0})")]
    BadCodimension(u32),
    #[error("model has no components")]
    NoComponents,
    #[error("duplicate component id '{0}'")]
    DuplicateId(String),
    #[error("component '{component}': expected {expected} weights (q/2), got {got}")]
    WeightCount {
        component: String,
        expected: usize,
        got: usize,
    },
    #[error("component '{component}': weight {index} has {got} coefficients, expected k = {expected}")]
    WeightDimension {
        component: String,
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("component '{component}': zero weight at index {index}")]
    ZeroWeight { component: String, index: usize },
    #[error("component '{component}': constant c must be nonzero")]
    ZeroConstant { component: String },
    #[error("component '{component}': local integral uses {got} variables, expected k = {expected}")]
    LocalIntegralDimension {
        component: String,
        expected: usize,
        got: usize,
    },
}

impl Model {
    pub fn new(
        name: impl Into<String>,
        k: usize,
        q: u32,
        components: Vec<FixedComponent>,
    ) -> Result<Self, ModelError> {
        let m = Model {
            name: name.into(),
            k,
            q,
            components,
            sign_convention: SignConvention::Classical,
            metadata: BTreeMap::new(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.k == 0 {
            return Err(ModelError::NoVariables);
        }
        if self.q < 2 || !self.q.is_multiple_of(2) {
            return Err(ModelError::BadCodimension(self.q));
        }
        if self.components.is_empty() {
            return Err(ModelError::NoComponents);
        }
        let mut seen = BTreeSet::new();
        let expected = (self.q / 2) as usize;
        for comp in &self.components {
            if !seen.insert(comp.id.as_str()) {
                return Err(ModelError::DuplicateId(comp.id.clone()));
            }
            let component = || comp.id.clone();
            if comp.weights.weights.len() != expected {
                return Err(ModelError::WeightCount {
                    component: component(),
                    expected,
                    got: comp.weights.weights.len(),
                });
            }
            for (index, w) in comp.weights.weights.iter().enumerate() {
                if w.num_vars() != self.k {
                    return Err(ModelError::WeightDimension {
                        component: component(),
                        index,
                        expected: self.k,
                        got: w.num_vars(),
                    });
                }
                if w.is_zero() {
                    return Err(ModelError::ZeroWeight {
                        component: component(),
                        index,
                    });
                }
            }
            if comp.constant.is_zero() {
                return Err(ModelError::ZeroConstant { component: component() });
            }
            if let Some(li) = &comp.local_integral {
                if li.num_vars() != self.k {
                    return Err(ModelError::LocalIntegralDimension {
                        component: component(),
                        expected: self.k,
                        got: li.num_vars(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn parse_class(&self, text: &str) -> Result<ClassExpr, ClassError> {
        ClassExpr::parse(text, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocalizationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("fixed-point contributions do not cancel to a polynomial ({0}); the data cannot come from an isometric action")]
    NotPolynomial(#[from] NotPolynomial),
    #[error("class has degree {degree}, characteristic numbers need degree q = {q}")]
    DegreeMismatch { degree: u32, q: u32 },
    #[error("class is not homogeneous")]
    Inhomogeneous,
    #[error("class was parsed for codimension {class_q}, model has q = {model_q}")]
    CodimensionMismatch { class_q: u32, model_q: u32 },
}

fn check_class(m: &Model, c: &ClassExpr) -> Result<(), LocalizationError> {
    if c.codimension() != m.q {
        return Err(LocalizationError::CodimensionMismatch {
            class_q: c.codimension(),
            model_q: m.q,
        });
    }
    Ok(())
}

/// The fraction one component adds to the localization sum.
pub fn component_contribution(
    m: &Model,
    comp: &FixedComponent,
    c: &ClassExpr,
) -> Result<RationalFraction, LocalizationError> {
    check_class(m, c)?;
    if let Some(li) = &comp.local_integral {
        return Ok(li.scale(&comp.constant));
    }
    let numerator = eval_at_weights(c, &comp.weights)?;
    let scale = m.sign_convention.factor(m.q) * &comp.constant;
    // e(ν) = ε·Πα; the sign goes into the scalar, the weights become factors
    let denom_scalar = comp.weights.sign.to_rational();
    Ok(RationalFraction::new(
        numerator.scale(&scale),
        denom_scalar,
        comp.weights.weights.clone(),
    )?)
}

/// Exact sum of all component contributions, before the polynomial check.
pub fn localization_fraction(m: &Model, c: &ClassExpr) -> Result<RationalFraction, LocalizationError> {
    m.validate()?;
    check_class(m, c)?;
    let mut acc = RationalFraction::zero(m.k);
    for comp in &m.components {
        acc = acc.checked_add(&component_contribution(m, comp, c)?)?;
    }
    Ok(acc)
}

/// The localization sum as a polynomial on the Lie algebra.
///
/// Fails with [`LocalizationError::NotPolynomial`] when the contributions do
/// not cancel.
pub fn localization_sum(m: &Model, c: &ClassExpr) -> Result<Polynomial, LocalizationError> {
    Ok(localization_fraction(m, c)?.to_polynomial()?)
}

/// Constant term: evaluation of the equivariant form at `X = 0`.
pub fn ev_zero(p: &Polynomial) -> Rational {
    p.constant_term()
}

/// The characteristic number of a degree-`q` class.
pub fn characteristic_number(m: &Model, c: &ClassExpr) -> Result<Rational, LocalizationError> {
    check_class(m, c)?;
    match class_degree(c) {
        ClassDegree::Zero => return Ok(Rational::zero()),
        ClassDegree::Inhomogeneous => return Err(LocalizationError::Inhomogeneous),
        ClassDegree::Homogeneous(d) if d != m.q => {
            return Err(LocalizationError::DegreeMismatch { degree: d, q: m.q })
        }
        ClassDegree::Homogeneous(_) => {}
    }
    Ok(ev_zero(&localization_sum(m, c)?))
}

/// `Σ s·c_i` over isolated components: what the localization sum of `e`
/// must equal, since each isolated contribution of `e` is `s·c_i·e/e`.
pub fn euler_count(m: &Model) -> Rational {
    let s = m.sign_convention.factor(m.q);
    m.components
        .iter()
        .filter(|comp| comp.is_isolated())
        .map(|comp| &s * &comp.constant)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyOutcome {
    /// The sum cancelled to a polynomial.
    Polynomial {
        sum: Polynomial,
        /// Homogeneous of cohomological degree `deg − q`, or zero.
        degree_ok: bool,
        /// Zero whenever `deg < q`.
        vanishing_ok: bool,
    },
    NotPolynomial { remainder: RationalFraction },
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyEntry {
    pub class: String,
    pub degree: u32,
    pub outcome: VerifyOutcome,
}

impl VerifyEntry {
    pub fn passed(&self) -> bool {
        matches!(
            self.outcome,
            VerifyOutcome::Polynomial {
                degree_ok: true,
                vanishing_ok: true,
                ..
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub model: String,
    pub q: u32,
    pub max_degree: u32,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(VerifyEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

/// Runs the localization sum for every generator monomial of each even
/// degree up to `max_degree` and checks that it cancels as it must.
pub fn verify_model(m: &Model, max_degree: u32) -> VerifyReport {
    let mut entries = Vec::new();
    if let Err(e) = m.validate() {
        entries.push(VerifyEntry {
            class: "<model>".into(),
            degree: 0,
            outcome: VerifyOutcome::Error(e.to_string()),
        });
    } else {
        for degree in (0..=max_degree).step_by(2) {
            let monomials = ClassExpr::monomials_of_degree(m.q, degree).expect("validated q");
            for mono in monomials {
                entries.push(verify_monomial(m, mono, degree));
            }
        }
    }
    VerifyReport {
        model: m.name.clone(),
        q: m.q,
        max_degree,
        entries,
    }
}

fn verify_monomial(m: &Model, mono: GeneratorMonomial, degree: u32) -> VerifyEntry {
    let class = mono.to_string();
    let c = ClassExpr::monomial(m.q, mono, Rational::one()).expect("validated q");
    let outcome = match localization_sum(m, &c) {
        Ok(sum) => {
            let degree_ok = match sum.cohomological_degree() {
                None => sum.is_zero(),
                Some(d) => degree >= m.q && d == degree - m.q,
            };
            let vanishing_ok = degree >= m.q || sum.is_zero();
            VerifyOutcome::Polynomial {
                sum,
                degree_ok,
                vanishing_ok,
            }
        }
        Err(LocalizationError::NotPolynomial(np)) => VerifyOutcome::NotPolynomial {
            remainder: np.remainder,
        },
        Err(e) => VerifyOutcome::Error(e.to_string()),
    };
    VerifyEntry {
        class,
        degree,
        outcome,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Sign;
    use crate::poly::{rat, LinearForm};

    fn comp(id: &str, weights: &[&[i64]]) -> FixedComponent {
        FixedComponent::isolated(
            id,
            WeightSystem::new(weights.iter().map(|c| LinearForm::from_ints(c)).collect(), Sign::Plus),
        )
    }

    fn s2() -> Model {
        Model::new("s2", 1, 2, vec![comp("N", &[&[1]]), comp("S", &[&[-1]])]).unwrap()
    }

    fn cp2_reduced() -> Model {
        Model::new(
            "cp2",
            2,
            4,
            vec![
                comp("P0", &[&[1, 0], &[0, 1]]),
                comp("P1", &[&[-1, 0], &[-1, 1]]),
                comp("P2", &[&[0, -1], &[1, -1]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn north_pole_contributions() {
        let m = s2();
        let e = m.parse_class("e").unwrap();
        let one = m.parse_class("1").unwrap();
        let north = &m.components[0];
        let ce = component_contribution(&m, north, &e).unwrap();
        assert_eq!(ce.to_polynomial().unwrap(), Polynomial::one(1));
        let c1 = component_contribution(&m, north, &one).unwrap();
        assert_eq!(c1, RationalFraction::new(Polynomial::one(1), rat(1), vec![LinearForm::from_ints(&[1])]).unwrap());
    }

    #[test]
    fn cp2_point_contribution() {
        let m = cp2_reduced();
        let p1 = m.parse_class("p1").unwrap();
        let got = component_contribution(&m, &m.components[1], &p1).unwrap();
        // (u1² + (u2−u1)²) / (−u1·(u2−u1)), substituted by hand
        let (u1, u2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let num = &u1.pow(2) + &(&u2 - &u1).pow(2);
        let expected = RationalFraction::new(
            num,
            rat(-1),
            vec![LinearForm::from_ints(&[1, 0]), LinearForm::from_ints(&[-1, 1])],
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn s2_euler_is_two() {
        let m = s2();
        let e = m.parse_class("e").unwrap();
        assert_eq!(localization_sum(&m, &e).unwrap(), Polynomial::constant(1, rat(2)));
        assert_eq!(characteristic_number(&m, &e).unwrap(), rat(2));
    }

    #[test]
    fn cp1_unit_class_cancels() {
        let m = Model::new("cp1", 2, 2, vec![comp("A", &[&[1, -1]]), comp("B", &[&[-1, 1]])]).unwrap();
        let one = m.parse_class("1").unwrap();
        assert!(localization_sum(&m, &one).unwrap().is_zero());
    }

    #[test]
    fn cp2_first_pontryagin_is_three() {
        let m = cp2_reduced();
        let p1 = m.parse_class("p1").unwrap();
        assert_eq!(characteristic_number(&m, &p1).unwrap(), rat(3));
        assert_eq!(characteristic_number(&m, &m.parse_class("e").unwrap()).unwrap(), rat(3));
    }

    #[test]
    fn degree_mismatch_and_inhomogeneous() {
        let m = s2();
        assert!(matches!(
            characteristic_number(&m, &m.parse_class("1").unwrap()),
            Err(LocalizationError::DegreeMismatch { degree: 0, q: 2 })
        ));
        assert!(matches!(
            characteristic_number(&m, &m.parse_class("e + 1").unwrap()),
            Err(LocalizationError::Inhomogeneous)
        ));
        let wrong_q = ClassExpr::parse("e", 4).unwrap();
        assert!(matches!(
            characteristic_number(&m, &wrong_q),
            Err(LocalizationError::CodimensionMismatch { .. })
        ));
    }

    #[test]
    fn ev_zero_examples() {
        let u = Polynomial::var(1, 0);
        assert_eq!(ev_zero(&(&u.pow(2) + &Polynomial::constant(1, rat(5)))), rat(5));
        assert_eq!(ev_zero(&Polynomial::zero(1)), rat(0));
        assert_eq!(ev_zero(&Polynomial::constant(1, rat(3))), rat(3));
    }

    #[test]
    fn verify_s2() {
        let report = verify_model(&s2(), 2);
        assert!(report.passed());
        let names: Vec<_> = report.entries.iter().map(|e| e.class.as_str()).collect();
        assert_eq!(names, vec!["1", "e"]);
        match &report.entries[1].outcome {
            VerifyOutcome::Polynomial { sum, .. } => assert_eq!(sum, &Polynomial::constant(1, rat(2))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn verify_s2_beyond_top_degree() {
        let report = verify_model(&s2(), 4);
        assert!(report.passed());
        assert!(report.entries.iter().any(|e| e.class == "e^2"));
    }

    #[test]
    fn deleted_pole_is_detected() {
        let mut m = s2();
        m.components.pop();
        let report = verify_model(&m, 2);
        assert!(!report.passed());
        let first = &report.entries[0];
        assert_eq!(first.class, "1");
        assert!(matches!(first.outcome, VerifyOutcome::NotPolynomial { .. }));
        assert!(matches!(
            localization_sum(&m, &m.parse_class("1").unwrap()),
            Err(LocalizationError::NotPolynomial(_))
        ));
    }

    #[test]
    fn corollary_sign_convention_flips_odd_half_codimension() {
        let mut m = s2();
        m.sign_convention = SignConvention::PaperCorollary;
        assert_eq!(characteristic_number(&m, &m.parse_class("e").unwrap()).unwrap(), rat(-2));
        assert_eq!(euler_count(&m), rat(-2));
        assert_eq!(SignConvention::PaperCorollary.factor(4), rat(1));
    }

    #[test]
    fn local_integral_overrides() {
        let mut m = s2();
        let li = RationalFraction::from_polynomial(Polynomial::constant(1, rat(5)));
        m.components[0].local_integral = Some(li);
        m.components[0].constant = rat(2);
        let e = m.parse_class("e").unwrap();
        // 2·5 from the override plus 1 from the south pole
        assert_eq!(characteristic_number(&m, &e).unwrap(), rat(11));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Model::new("x", 1, 3, vec![comp("A", &[&[1]])]).unwrap_err(), ModelError::BadCodimension(3));
        assert_eq!(Model::new("x", 0, 2, vec![comp("A", &[&[1]])]).unwrap_err(), ModelError::NoVariables);
        assert_eq!(Model::new("x", 1, 2, vec![]).unwrap_err(), ModelError::NoComponents);
        assert_eq!(
            Model::new("x", 1, 2, vec![comp("A", &[&[1]]), comp("A", &[&[-1]])]).unwrap_err(),
            ModelError::DuplicateId("A".into())
        );
        assert!(matches!(
            Model::new("x", 2, 2, vec![comp("A", &[&[0, 0]])]).unwrap_err(),
            ModelError::ZeroWeight { .. }
        ));
        assert!(matches!(
            Model::new("x", 1, 4, vec![comp("A", &[&[1]])]).unwrap_err(),
            ModelError::WeightCount { expected: 2, got: 1, .. }
        ));
        let mut c = comp("A", &[&[1]]);
        c.constant = rat(0);
        assert!(matches!(Model::new("x", 1, 2, vec![c]).unwrap_err(), ModelError::ZeroConstant { .. }));
    }
}
