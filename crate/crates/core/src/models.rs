//! Model documents, the builtin catalog, and products of models.
//!
//! A model document is a JSON object:
//!
//! ```json
//! { "name": "cp2", "k": 3, "q": 4, "sign_convention": "classical",
//!   "components": [
//!     { "id": "P0", "c": "1", "epsilon": 1, "weights": [[-1,1,0], [-1,0,1]] } ],
//!   "metadata": { "description": "CP^2, standard T^3 action" } }
//! ```
//!
//! Weight coefficients are integers or `"a/b"` strings. A component may carry
//! a `local_integral` object with `numerator` (a list of
//! `{"exponents": [..], "coefficient": "a/b"}`), `denom_scalar` and
//! `denom_factors` (a list of k-vectors).

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::classes::{Sign, WeightSystem};
use crate::localization::{FixedComponent, Model, ModelError, SignConvention};
use crate::poly::{format_rational, parse_rational, LinearForm, Polynomial, Rational, RationalFraction};

#[derive(Debug, thiserror::Error)]
pub enum ModelsError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(#[from] ModelError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),
    #[error("invalid parameters for '{name}': {message}")]
    InvalidParams { name: String, message: String },
    #[error("cannot form product: {0}")]
    Product(String),
}

/// Largest exponent accepted in a local-integral numerator.
pub const MAX_LOCAL_EXPONENT: u32 = 64;

fn schema<T>(path: &str, message: impl Into<String>) -> Result<T, ModelsError> {
    Err(ModelsError::Schema {
        path: path.to_string(),
        message: message.into(),
    })
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, ModelsError> {
    obj.get(key).ok_or_else(|| ModelsError::Schema {
        path: path.to_string(),
        message: format!("missing field '{key}'"),
    })
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ModelsError> {
    v.as_object().map_or_else(|| schema(path, "expected an object"), Ok)
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ModelsError> {
    v.as_array().map_or_else(|| schema(path, "expected an array"), Ok)
}

fn as_uint(v: &Value, path: &str) -> Result<u64, ModelsError> {
    v.as_u64()
        .map_or_else(|| schema(path, "expected a non-negative integer"), Ok)
}

fn parse_rational_value(v: &Value, path: &str) -> Result<Rational, ModelsError> {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => Ok(Rational::from_integer(BigInt::from(i))),
            (None, Some(u)) => Ok(Rational::from_integer(BigInt::from(u))),
            _ => schema(path, format!("{n} is not an integer; write non-integers as \"a/b\"")),
        },
        Value::String(s) => parse_rational(s)
            .map_or_else(|| schema(path, format!("invalid rational '{s}'")), Ok),
        _ => schema(path, "expected an integer or a rational string"),
    }
}

fn rational_value(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(i) = r.numer().to_i64() {
            return json!(i);
        }
    }
    Value::String(format_rational(r))
}

fn parse_vector(v: &Value, path: &str) -> Result<LinearForm, ModelsError> {
    let items = as_array(v, path)?;
    let coeffs = items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_rational_value(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LinearForm::new(coeffs))
}

fn vector_value(l: &LinearForm) -> Value {
    Value::Array(l.coeffs().iter().map(rational_value).collect())
}

fn parse_local_integral(v: &Value, k: usize, path: &str) -> Result<RationalFraction, ModelsError> {
    let obj = as_object(v, path)?;
    let mut terms = Vec::new();
    for (i, t) in as_array(field(obj, path, "numerator")?, &format!("{path}.numerator"))?
        .iter()
        .enumerate()
    {
        let tp = format!("{path}.numerator[{i}]");
        let tobj = as_object(t, &tp)?;
        let exps = as_array(field(tobj, &tp, "exponents")?, &format!("{tp}.exponents"))?
            .iter()
            .map(|e| {
                as_uint(e, &format!("{tp}.exponents"))
                    .and_then(|x| match u32::try_from(x) {
                        Ok(x) if x <= MAX_LOCAL_EXPONENT => Ok(x),
                        _ => schema(&tp, format!("exponent exceeds {MAX_LOCAL_EXPONENT}")),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if exps.len() != k {
            return schema(&tp, format!("exponent vector has length {}, expected k = {k}", exps.len()));
        }
        terms.push((exps, parse_rational_value(field(tobj, &tp, "coefficient")?, &tp)?));
    }
    let numerator = Polynomial::from_terms(k, terms).expect("lengths checked");
    let scalar = match obj.get("denom_scalar") {
        Some(s) => parse_rational_value(s, &format!("{path}.denom_scalar"))?,
        None => Rational::one(),
    };
    let factors = match obj.get("denom_factors") {
        Some(f) => as_array(f, &format!("{path}.denom_factors"))?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_vector(x, &format!("{path}.denom_factors[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    for (i, f) in factors.iter().enumerate() {
        if f.num_vars() != k {
            return schema(&format!("{path}.denom_factors[{i}]"), format!("expected {k} coefficients"));
        }
    }
    RationalFraction::new(numerator, scalar, factors).map_or_else(|e| schema(path, e.to_string()), Ok)
}

fn local_integral_value(f: &RationalFraction) -> Value {
    let numerator: Vec<Value> = f
        .numerator()
        .terms()
        .rev()
        .map(|(m, c)| json!({ "exponents": m.exponents(), "coefficient": format_rational(c) }))
        .collect();
    json!({
        "numerator": numerator,
        "denom_scalar": format_rational(f.denom_scalar()),
        "denom_factors": f.denom_factors().iter().map(vector_value).collect::<Vec<_>>(),
    })
}

fn model_from_value(doc: &Value) -> Result<Model, ModelsError> {
    let obj = as_object(doc, "$")?;
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return schema("$.name", "expected a string"),
        None => String::new(),
    };
    let k = usize::try_from(as_uint(field(obj, "$", "k")?, "$.k")?)
        .map_or_else(|_| schema("$.k", "too large"), Ok)?;
    let q = u32::try_from(as_uint(field(obj, "$", "q")?, "$.q")?)
        .map_or_else(|_| schema("$.q", "too large"), Ok)?;
    let sign_convention = match obj.get("sign_convention") {
        None => SignConvention::Classical,
        Some(Value::String(s)) => SignConvention::parse(s).map_or_else(
            || schema("$.sign_convention", format!("unknown convention '{s}' (classical | paper_corollary)")),
            Ok,
        )?,
        Some(_) => return schema("$.sign_convention", "expected a string"),
    };
    let metadata: BTreeMap<String, Value> = match obj.get("metadata") {
        None => BTreeMap::new(),
        Some(v) => as_object(v, "$.metadata")?
            .iter()
            .map(|(key, val)| (key.clone(), val.clone()))
            .collect(),
    };

    let mut components = Vec::new();
    for (i, c) in as_array(field(obj, "$", "components")?, "$.components")?
        .iter()
        .enumerate()
    {
        let path = format!("$.components[{i}]");
        let cobj = as_object(c, &path)?;
        let id = match field(cobj, &path, "id")? {
            Value::String(s) => s.clone(),
            _ => return schema(&format!("{path}.id"), "expected a string"),
        };
        let constant = match cobj.get("c") {
            Some(v) => parse_rational_value(v, &format!("{path}.c"))?,
            None => Rational::one(),
        };
        let sign = match cobj.get("epsilon") {
            None => Sign::Plus,
            Some(v) => v
                .as_i64()
                .and_then(Sign::from_i64)
                .map_or_else(|| schema(&format!("{path}.epsilon"), "epsilon must be 1 or -1"), Ok)?,
        };
        let weights = as_array(field(cobj, &path, "weights")?, &format!("{path}.weights"))?
            .iter()
            .enumerate()
            .map(|(j, w)| parse_vector(w, &format!("{path}.weights[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let local_integral = match cobj.get("local_integral") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_local_integral(v, k, &format!("{path}.local_integral"))?),
        };
        components.push(FixedComponent {
            id,
            weights: WeightSystem::new(weights, sign),
            constant,
            local_integral,
        });
    }
    let model = Model {
        name,
        k,
        q,
        components,
        sign_convention,
        metadata,
    };
    model.validate()?;
    Ok(model)
}

fn model_to_value(m: &Model) -> Value {
    let components: Vec<Value> = m
        .components
        .iter()
        .map(|c| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::String(c.id.clone()));
            obj.insert("c".into(), Value::String(format_rational(&c.constant)));
            obj.insert("epsilon".into(), json!(c.weights.sign.as_i64()));
            obj.insert(
                "weights".into(),
                Value::Array(c.weights.weights.iter().map(vector_value).collect()),
            );
            if let Some(li) = &c.local_integral {
                obj.insert("local_integral".into(), local_integral_value(li));
            }
            Value::Object(obj)
        })
        .collect();
    let metadata: Map<String, Value> = m.metadata.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    json!({
        "name": m.name,
        "k": m.k,
        "q": m.q,
        "sign_convention": m.sign_convention.as_str(),
        "components": components,
        "metadata": metadata,
    })
}

/// Parses and validates a model document.
pub fn load_model_str(text: &str) -> Result<Model, ModelsError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ModelsError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    model_from_value(&doc)
}

pub fn load_model(path: &Path) -> Result<Model, ModelsError> {
    load_model_str(&std::fs::read_to_string(path)?)
}

/// Deterministic document text: sorted keys, rationals rendered as `a/b`.
pub fn save_model(m: &Model) -> String {
    let mut text = serde_json::to_string_pretty(&model_to_value(m)).expect("values serialize");
    text.push('\n');
    text
}

pub fn model_to_json(m: &Model) -> Value {
    model_to_value(m)
}

fn isolated(id: String, weights: Vec<LinearForm>, constant: Rational) -> FixedComponent {
    FixedComponent {
        id,
        weights: WeightSystem::new(weights, Sign::Plus),
        constant,
        local_integral: None,
    }
}

/// Rotation of the round 2-sphere about an axis: two poles with weights `±u`.
pub fn s2_rotation() -> Model {
    let mut m = Model::new(
        "s2_rotation",
        1,
        2,
        vec![
            isolated("N".into(), vec![LinearForm::from_ints(&[1])], Rational::one()),
            isolated("S".into(), vec![LinearForm::from_ints(&[-1])], Rational::one()),
        ],
    )
    .expect("valid builtin");
    m.metadata.insert("description".into(), json!("S^2, rotation about the z-axis"));
    m
}

/// `CP^n` with the standard `T^{n+1}` action: fixed point `P_i` has weights
/// `u_j - u_i` for `j ≠ i`.
pub fn cpn(n: usize) -> Result<Model, ModelsError> {
    if n < 1 {
        return Err(ModelsError::InvalidParams {
            name: "cpn".into(),
            message: "n must be at least 1".into(),
        });
    }
    let k = n + 1;
    let components = (0..k)
        .map(|i| {
            let weights = (0..k)
                .filter(|&j| j != i)
                .map(|j| {
                    let mut c = vec![0i64; k];
                    c[j] = 1;
                    c[i] = -1;
                    LinearForm::from_ints(&c)
                })
                .collect();
            isolated(format!("P{i}"), weights, Rational::one())
        })
        .collect();
    let mut m = Model::new(format!("cp{n}"), k, 2 * n as u32, components)?;
    m.metadata.insert(
        "description".into(),
        json!(format!("CP^{n}, standard T^{k} action (homogeneous coordinates)")),
    );
    Ok(m)
}

/// `S^4 ⊂ C^2 ⊕ R` with `T^2` rotating both complex coordinates.
pub fn s4_t2() -> Model {
    let mut m = Model::new(
        "s4_t2",
        2,
        4,
        vec![
            isolated("N".into(), vec![LinearForm::from_ints(&[1, 0]), LinearForm::from_ints(&[0, 1])], Rational::one()),
            isolated("S".into(), vec![LinearForm::from_ints(&[-1, 0]), LinearForm::from_ints(&[0, 1])], Rational::one()),
        ],
    )
    .expect("valid builtin");
    m.metadata.insert("description".into(), json!("S^4, T^2 acting on C^2 + R"));
    m
}

/// Surrogate for the weighted Hopf flow on `S^3` with rational slope `a/b`:
/// two closed orbits with weights `a·u` and `-b·u`. The constants `1/b` and
/// `1/a` are the orbifold isotropy orders of the leaf space `S^2(a, b)`.
pub fn hopf_flow(a: &Rational, b: &Rational) -> Result<Model, ModelsError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(ModelsError::InvalidParams {
            name: "hopf_flow".into(),
            message: "a and b must be positive".into(),
        });
    }
    let mut m = Model::new(
        "hopf_flow",
        1,
        2,
        vec![
            isolated("L1".into(), vec![LinearForm::new(vec![a.clone()])], b.recip()),
            isolated("L2".into(), vec![LinearForm::new(vec![-b.clone()])], a.recip()),
        ],
    )?;
    m.name = format!("hopf_flow({},{})", format_rational(a), format_rational(b));
    m.metadata.insert("description".into(), json!("weighted Hopf flow on S^3, two closed leaves"));
    m.metadata.insert(
        "caveat".into(),
        json!("constants are orbifold surrogates chosen for consistency, not derived transverse volumes"),
    );
    Ok(m)
}

/// Product action: components are all pairs, weights concatenate in disjoint
/// variable blocks, signs and constants multiply.
///
/// Factors under the `paper_corollary` convention have their sign folded into
/// the constants, so the product is always `classical` and its contributions
/// are exactly the products of the factors' contributions.
pub fn product_model(m1: &Model, m2: &Model) -> Result<Model, ModelsError> {
    if m1.components.iter().chain(&m2.components).any(|c| !c.is_isolated()) {
        return Err(ModelsError::Product("components with a local integral are not supported".into()));
    }
    let k = m1.k + m2.k;
    let s1 = m1.sign_convention.factor(m1.q);
    let s2 = m2.sign_convention.factor(m2.q);
    let mut components = Vec::new();
    for a in &m1.components {
        for b in &m2.components {
            let weights = a
                .weights
                .weights
                .iter()
                .map(|w| w.embed(k, 0))
                .chain(b.weights.weights.iter().map(|w| w.embed(k, m1.k)))
                .collect();
            components.push(FixedComponent {
                id: format!("{}x{}", a.id, b.id),
                weights: WeightSystem::new(weights, a.weights.sign * b.weights.sign),
                constant: &s1 * &a.constant * &s2 * &b.constant,
                local_integral: None,
            });
        }
    }
    let mut m = Model::new(format!("{}*{}", m1.name, m2.name), k, m1.q + m2.q, components)?;
    m.metadata.insert("description".into(), json!(format!("product of {} and {}", m1.name, m2.name)));
    Ok(m)
}

fn bad_params(name: &str, message: impl Into<String>) -> ModelsError {
    ModelsError::InvalidParams {
        name: name.into(),
        message: message.into(),
    }
}

/// Constructs a builtin by name. `params` are the values after the colon in
/// `name:p1,p2`.
pub fn builtin(name: &str, params: &[Rational]) -> Result<Model, ModelsError> {
    let no_params = |m: Model| {
        if params.is_empty() {
            Ok(m)
        } else {
            Err(bad_params(name, "takes no parameters"))
        }
    };
    match name {
        "s2_rotation" | "s2" => no_params(s2_rotation()),
        "s4_t2" | "s4" => no_params(s4_t2()),
        "cpn" => match params {
            [n] if n.is_integer() && !n.is_negative() => {
                let n = n.to_integer().to_usize().ok_or_else(|| bad_params(name, "n too large"))?;
                if n > 12 {
                    return Err(bad_params(name, "n above 12 is not supported"));
                }
                cpn(n)
            }
            [_] => Err(bad_params(name, "n must be a non-negative integer")),
            _ => Err(bad_params(name, "expected one parameter n, as in cpn:2")),
        },
        "hopf_flow" => match params {
            [] => hopf_flow(&Rational::one(), &Rational::one()),
            [a, b] => hopf_flow(a, b),
            _ => Err(bad_params(name, "expected two parameters a,b, as in hopf_flow:2,3")),
        },
        other => {
            // cp2 style shorthand
            if let Some(n) = other.strip_prefix("cp").and_then(|s| s.parse::<i64>().ok()) {
                if params.is_empty() {
                    return builtin("cpn", &[Rational::from_integer(n.into())]);
                }
            }
            Err(ModelsError::UnknownBuiltin(other.to_string()))
        }
    }
}

/// Parses `name`, `name:p1,p2` or a `*`-separated product such as
/// `s2_rotation*cpn:1`.
pub fn builtin_from_spec(spec: &str) -> Result<Model, ModelsError> {
    let mut factors = spec.split('*').map(|part| {
        let part = part.trim();
        let (name, params) = match part.split_once(':') {
            Some((n, p)) => (n.trim(), p),
            None => (part, ""),
        };
        let params = params
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_rational(s).ok_or_else(|| bad_params(name, format!("'{s}' is not a rational"))))
            .collect::<Result<Vec<_>, _>>()?;
        builtin(name, &params)
    });
    let first = factors.next().expect("split yields at least one part")?;
    factors.try_fold(first, |acc, next| product_model(&acc, &next?))
}

/// One row of the builtin listing.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
    /// `(example spec, class, value)` triples.
    pub known: Vec<(&'static str, &'static str, &'static str)>,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "s2_rotation",
            params: "",
            description: "S^2 rotating about an axis; k=1, q=2",
            known: vec![("s2_rotation", "e", "2")],
        },
        CatalogEntry {
            name: "cpn",
            params: "n >= 1",
            description: "CP^n with the standard T^(n+1) action; k=n+1, q=2n",
            known: vec![
                ("cpn:1", "e", "2"),
                ("cpn:2", "e", "3"),
                ("cpn:2", "p1", "3"),
                ("cpn:3", "e", "4"),
                ("cpn:4", "p1^2", "25"),
                ("cpn:4", "p2", "10"),
                ("cpn:5", "e", "6"),
            ],
        },
        CatalogEntry {
            name: "s4_t2",
            params: "",
            description: "S^4 with T^2 rotating C^2; k=2, q=4",
            known: vec![("s4_t2", "e", "2"), ("s4_t2", "p1", "0")],
        },
        CatalogEntry {
            name: "hopf_flow",
            params: "a,b > 0 (default 1,1)",
            description: "weighted Hopf flow on S^3 (surrogate constants); k=1, q=2",
            known: vec![("hopf_flow:1,1", "e", "2"), ("hopf_flow:2,3", "e", "5/6")],
        },
        CatalogEntry {
            name: "A*B",
            params: "any builtins",
            description: "product of builtins; k and q add",
            known: vec![("s2_rotation*s2_rotation", "e", "4"), ("s2_rotation*s2_rotation", "p1", "0")],
        },
    ]
}

/// Concrete catalog instances exercised by the test suites.
pub fn catalog_models() -> Vec<Model> {
    let mut out = vec![s2_rotation()];
    out.extend((1..=5).map(|n| cpn(n).expect("valid n")));
    out.push(s4_t2());
    out.push(hopf_flow(&Rational::one(), &Rational::one()).expect("valid"));
    out.push(hopf_flow(&Rational::from_integer(2.into()), &Rational::from_integer(3.into())).expect("valid"));
    out.push(product_model(&s2_rotation(), &s2_rotation()).expect("valid"));
    out.push(product_model(&s2_rotation(), &cpn(1).expect("valid")).expect("valid"));
    out
}

/// A random structurally valid model (not necessarily consistent fixed-point
/// data), for round-trip and fuzz testing.
pub fn random_model<R: rand::Rng>(rng: &mut R) -> Model {
    let k = rng.gen_range(1..=3);
    let q = 2 * rng.gen_range(1..=2u32);
    let n = rng.gen_range(1..=4);
    let small_rational = |rng: &mut R| {
        let num = rng.gen_range(-5i64..=5);
        let den = if rng.gen_bool(0.3) { rng.gen_range(1i64..=4) } else { 1 };
        Rational::new(num.into(), den.into())
    };
    let components = (0..n)
        .map(|i| {
            let weights = (0..q / 2)
                .map(|_| loop {
                    let w = LinearForm::new((0..k).map(|_| small_rational(rng)).collect());
                    if !w.is_zero() {
                        break w;
                    }
                })
                .collect();
            let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            let constant = loop {
                let c = small_rational(rng);
                if !c.is_zero() {
                    break c;
                }
            };
            FixedComponent {
                id: format!("C{i}"),
                weights: WeightSystem::new(weights, sign),
                constant,
                local_integral: None,
            }
        })
        .collect();
    let mut m = Model::new(format!("random{}", rng.gen::<u16>()), k, q, components).expect("valid by construction");
    if rng.gen_bool(0.5) {
        m.sign_convention = SignConvention::PaperCorollary;
    }
    if rng.gen_bool(0.5) {
        m.metadata.insert("note".into(), json!(rng.gen::<u32>()));
    }
    m
}
