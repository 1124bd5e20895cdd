//! Floating-point cross-checks that do not go through the exact kernel.
//!
//! [`random_point_oracle`] evaluates every component contribution directly in
//! `f64` at random points and compares the total with the exact localization
//! polynomial. [`dh_quadrature`] and [`dh_localization`] compute the same
//! sphere integral twice: once by quadrature over the surface, once as a sum
//! over the two fixed points of the rotation.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classes::{class_degree, ClassDegree, ClassExpr};
use crate::localization::{localization_sum, LocalizationError, Model};
use crate::poly::{rational_to_f64, Rational};

/// Relative errors are taken against at least this magnitude.
pub const ABS_FLOOR: f64 = 1e-12;
/// Coordinate range for random sample points.
const SAMPLE_RANGE: i64 = 20;
const MAX_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumcheckError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("class must be homogeneous")]
    Inhomogeneous,
    #[error("could not find a point off every weight hyperplane after {0} draws")]
    ResamplingExhausted(usize),
    #[error("grid sizes must be at least 8 (got {n_theta} x {n_phi})")]
    GridTooSmall { n_theta: usize, n_phi: usize },
    #[error("n_theta must be even for the composite Simpson rule (got {0})")]
    OddGrid(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("the fixed-point sum has a pole at t = 0 (its limit is 4π)")]
    PoleAtZero,
    #[error(transparent)]
    Localization(#[from] LocalizationError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub point: Vec<i64>,
    pub numeric: f64,
    /// Exact localization polynomial at the point; `None` when the sum is not
    /// a polynomial.
    pub symbolic: Option<f64>,
    pub rel_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub trials: Vec<TrialResult>,
    /// Set when the exact sum did not cancel to a polynomial.
    pub not_polynomial: bool,
}

impl OracleReport {
    pub fn max_rel_error(&self) -> Option<f64> {
        self.trials
            .iter()
            .filter_map(|t| t.rel_error)
            .fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.max(e))))
    }
}

/// `e_0..e_m` of `values`, in floating point.
fn elementary_symmetric_f64(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (n, &v) in values.iter().enumerate() {
        for j in (1..=n + 1).rev() {
            e[j] += e[j - 1] * v;
        }
    }
    e
}

/// Every component's contribution at `x`, evaluated in floating point.
///
/// Components with a precomputed local integral are evaluated from that
/// fraction; isolated ones from the weights alone.
pub fn contributions_f64(m: &Model, c: &ClassExpr, x: &[f64]) -> Vec<f64> {
    let s = rational_to_f64(&m.sign_convention.factor(m.q));
    m.components
        .iter()
        .map(|comp| {
            let constant = rational_to_f64(&comp.constant);
            if let Some(li) = &comp.local_integral {
                let num: f64 = li
                    .numerator()
                    .terms()
                    .map(|(mono, coeff)| {
                        mono.exponents()
                            .iter()
                            .zip(x)
                            .fold(rational_to_f64(coeff), |acc, (&e, &xi)| acc * xi.powi(e as i32))
                    })
                    .sum();
                let den = li
                    .denom_factors()
                    .iter()
                    .fold(rational_to_f64(li.denom_scalar()), |acc, l| acc * l.eval_f64(x));
                return constant * num / den;
            }
            let rates: Vec<f64> = comp.weights.weights.iter().map(|w| w.eval_f64(x)).collect();
            let squares: Vec<f64> = rates.iter().map(|r| r * r).collect();
            let pont = elementary_symmetric_f64(&squares);
            let euler = comp.weights.sign.as_i64() as f64 * rates.iter().product::<f64>();
            let value: f64 = c
                .terms()
                .map(|(mono, coeff)| {
                    let mut v = rational_to_f64(coeff) * euler.powi(mono.euler as i32);
                    for (i, &b) in mono.pontryagin.iter().enumerate() {
                        v *= pont.get(i + 1).copied().unwrap_or(0.0).powi(b as i32);
                    }
                    v
                })
                .sum();
            s * constant * value / euler
        })
        .collect()
}

/// Relative error of `numeric` against `exact`, measured against the larger
/// of `|exact|`, the largest summand magnitude, and [`ABS_FLOOR`].
pub fn relative_error(numeric: f64, exact: f64, summand_scale: f64) -> f64 {
    (numeric - exact).abs() / exact.abs().max(summand_scale).max(ABS_FLOOR)
}

/// Compares the floating-point sum of contributions with the exact
/// localization polynomial at `trials` random integer points.
pub fn random_point_oracle(m: &Model, c: &ClassExpr, trials: usize, seed: u64) -> Result<OracleReport, NumcheckError> {
    if trials == 0 {
        return Err(NumcheckError::NoTrials);
    }
    if class_degree(c) == ClassDegree::Inhomogeneous {
        return Err(NumcheckError::Inhomogeneous);
    }
    m.validate().map_err(LocalizationError::from)?;
    let exact = match localization_sum(m, c) {
        Ok(p) => Some(p),
        Err(LocalizationError::NotPolynomial(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let point = draw_point(m, &mut rng)?;
        let xf: Vec<f64> = point.iter().map(|&v| v as f64).collect();
        let terms = contributions_f64(m, c, &xf);
        let numeric: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        let (symbolic, rel_error) = match &exact {
            Some(p) => {
                let xr: Vec<Rational> = point.iter().map(|&v| Rational::from_integer(v.into())).collect();
                let value = rational_to_f64(&p.eval(&xr).expect("dimension matches"));
                (Some(value), Some(relative_error(numeric, value, scale)))
            }
            None => (None, None),
        };
        out.push(TrialResult {
            point,
            numeric,
            symbolic,
            rel_error,
        });
    }
    Ok(OracleReport {
        trials: out,
        not_polynomial: exact.is_none(),
    })
}

fn draw_point(m: &Model, rng: &mut ChaCha8Rng) -> Result<Vec<i64>, NumcheckError> {
    for _ in 0..MAX_RESAMPLES {
        let point: Vec<i64> = (0..m.k).map(|_| rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE)).collect();
        let xr: Vec<Rational> = point.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let on_hyperplane = m.components.iter().any(|comp| {
            let weights = comp.weights.weights.iter();
            let factors = comp.local_integral.iter().flat_map(|li| li.denom_factors());
            weights
                .chain(factors)
                .any(|w| num_traits::Zero::is_zero(&w.eval(&xr).expect("dimension matches")))
        });
        if !on_hyperplane {
            return Ok(point);
        }
    }
    Err(NumcheckError::ResamplingExhausted(MAX_RESAMPLES))
}

/// Parameters for the sphere quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub t: f64,
    /// Intervals along the height coordinate `z ∈ [-1, 1]`.
    pub n_theta: usize,
    /// Points along the angle `φ ∈ [0, 2π)`.
    pub n_phi: usize,
    pub tolerance: f64,
}

impl QuadratureSpec {
    pub fn new(t: f64, n_theta: usize, n_phi: usize, tolerance: f64) -> Result<Self, NumcheckError> {
        let spec = QuadratureSpec {
            t,
            n_theta,
            n_phi,
            tolerance,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NumcheckError> {
        if self.n_theta < 8 || self.n_phi < 8 {
            return Err(NumcheckError::GridTooSmall {
                n_theta: self.n_theta,
                n_phi: self.n_phi,
            });
        }
        if !self.n_theta.is_multiple_of(2) {
            return Err(NumcheckError::OddGrid(self.n_theta));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(NumcheckError::BadTolerance);
        }
        Ok(())
    }
}

/// Tensor-product rule for `∫_{S²} f(z, φ) dA` in cylindrical coordinates
/// (`dA = dz dφ`): composite Simpson with `n_theta` intervals in `z`, periodic
/// trapezoid with `n_phi` points in `φ`.
pub fn sphere_quadrature(n_theta: usize, n_phi: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let h = 2.0 / n_theta as f64;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut total = 0.0;
    for j in 0..n_phi {
        let phi = j as f64 * dphi;
        let mut column = 0.0;
        for i in 0..=n_theta {
            let z = -1.0 + i as f64 * h;
            let w = if i == 0 || i == n_theta {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            column += w * f(z, phi);
        }
        total += column * h / 3.0;
    }
    total * dphi
}

/// `∫_{S²} e^{t z} dA`, the integral of the exponentiated height function.
pub fn dh_quadrature(spec: &QuadratureSpec) -> Result<f64, NumcheckError> {
    spec.validate()?;
    let t = spec.t;
    Ok(sphere_quadrature(spec.n_theta, spec.n_phi, |z, _| (t * z).exp()))
}

/// The same integral as a sum over the two poles of the rotation: height
/// `±1`, weight `±1`, each contributing `2π·e^{t·μ}/(t·weight)`.
pub fn dh_localization(t: f64) -> Result<f64, NumcheckError> {
    if t == 0.0 {
        return Err(NumcheckError::PoleAtZero);
    }
    let poles = [(1.0f64, 1.0f64), (-1.0, -1.0)];
    Ok(poles
        .iter()
        .map(|&(height, weight)| 2.0 * PI * (t * height).exp() / (t * weight))
        .sum())
}

/// `2π(e^t − e^{−t})/t`, with its limit `4π` at zero.
pub fn dh_closed_form(t: f64) -> f64 {
    if t == 0.0 {
        4.0 * PI
    } else {
        2.0 * PI * (t.exp() - (-t).exp()) / t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DhCase {
    pub t: f64,
    pub quadrature: f64,
    pub localization: f64,
    pub abs_error: f64,
    pub passed: bool,
}

/// Quadrature against the fixed-point sum for each `t`.
pub fn dh_suite(ts: &[f64], n_theta: usize, n_phi: usize, tolerance: f64) -> Result<Vec<DhCase>, NumcheckError> {
    ts.iter()
        .map(|&t| {
            let spec = QuadratureSpec::new(t, n_theta, n_phi, tolerance)?;
            let quadrature = dh_quadrature(&spec)?;
            let localization = dh_localization(t)?;
            let abs_error = (quadrature - localization).abs();
            Ok(DhCase {
                t,
                quadrature,
                localization,
                abs_error,
                passed: abs_error < tolerance,
            })
        })
        .collect()
}

/// Error at `n_theta` divided by error at `2·n_theta`, both against the
/// fixed-point sum. Simpson's rule should give about 16 on smooth data.
pub fn dh_refinement_ratio(t: f64, n_theta: usize, n_phi: usize) -> Result<f64, NumcheckError> {
    let exact = dh_localization(t)?;
    let err = |n| -> Result<f64, NumcheckError> {
        let spec = QuadratureSpec::new(t, n, n_phi, 1.0)?;
        Ok((dh_quadrature(&spec)? - exact).abs())
    };
    Ok(err(n_theta)? / err(2 * n_theta)?)
}
