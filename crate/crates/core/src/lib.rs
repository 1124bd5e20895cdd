//! Characteristic numbers of torus actions and Killing foliations from
//! fixed-point data.
//!
//! The engine evaluates an invariant polynomial `p` (in the Pontryagin
//! generators and the Euler class) on the isotropy weights of each closed
//! leaf, divides by the equivariant Euler class of the normal bundle, and sums
//! the contributions exactly. The total must cancel to a polynomial on the
//! structural Lie algebra; its value at zero is the characteristic number.
//!
//! ```
//! use fixloc::localization::characteristic_number;
//! use fixloc::models::builtin_from_spec;
//!
//! let cp2 = builtin_from_spec("cpn:2").unwrap();
//! let p1 = cp2.parse_class("p1").unwrap();
//! assert_eq!(characteristic_number(&cp2, &p1).unwrap().to_string(), "3");
//! ```

pub mod classes;
pub mod localization;
pub mod models;
pub mod numcheck;
pub mod poly;

pub use classes::{ClassDegree, ClassExpr, Sign, WeightSystem};
pub use localization::{
    characteristic_number, component_contribution, ev_zero, localization_sum, verify_model,
    FixedComponent, LocalizationError, Model, SignConvention,
};
pub use poly::{LinearForm, Polynomial, Rational, RationalFraction};
