//! Invariant polynomials of `so(q)` and their evaluation on isotropy weights.
//!
//! A [`ClassExpr`] is a rational polynomial in the Pontryagin generators
//! `p1, p2, ..` and the Euler generator (Pfaffian) `e`. Generators are graded
//! cohomologically: `deg p_j = 4j`, `deg e = q`.
//!
//! On a block-diagonal infinitesimal rotation with rates `α_1..α_m` (the
//! weights of a [`WeightSystem`]) the generators evaluate as
//! `p_j ↦ e_j(α_1², .., α_m²)` and `e ↦ ε·Π α_i`, with no `2π` factors.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::{parse_rational, LinearForm, Polynomial, Rational};

/// Largest Pontryagin index accepted by the parser.
pub const MAX_PONTRYAGIN_INDEX: u32 = 16;
/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator index 0 at position {position} (Pontryagin classes start at p1)")]
    ZeroIndex { position: usize },
    #[error("p{index} at position {position} exceeds the supported range p1..p{MAX_PONTRYAGIN_INDEX}")]
    IndexTooLarge { index: u64, position: usize },
    #[error("exponent {exponent} at position {position} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge { exponent: u64, position: usize },
    #[error("codimension must be even and at least 2, got {0}")]
    BadCodimension(u32),
    #[error("expected {expected} weights for codimension {q}, got {got}")]
    WeightCount { q: u32, expected: usize, got: usize },
    #[error("weight {index} is zero")]
    ZeroWeight { index: usize },
    #[error("weights live in different variable counts")]
    WeightDimension,
}

/// Monomial `e^euler · Π p_j^pontryagin[j-1]`, trailing zero exponents trimmed.
///
/// Ordered so that higher powers of lower Pontryagin generators come first,
/// then by the power of `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorMonomial {
    pub euler: u32,
    pub pontryagin: Vec<u32>,
}

impl Ord for GeneratorMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let len = self.pontryagin.len().max(other.pontryagin.len());
        let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
        (0..len)
            .map(|i| at(&other.pontryagin, i).cmp(&at(&self.pontryagin, i)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(self.euler.cmp(&other.euler))
    }
}

impl PartialOrd for GeneratorMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl GeneratorMonomial {
    pub fn one() -> Self {
        GeneratorMonomial {
            euler: 0,
            pontryagin: Vec::new(),
        }
    }

    pub fn euler() -> Self {
        GeneratorMonomial {
            euler: 1,
            pontryagin: Vec::new(),
        }
    }

    pub fn pontryagin(index: u32) -> Self {
        assert!(index >= 1);
        let mut pontryagin = vec![0; index as usize];
        pontryagin[index as usize - 1] = 1;
        GeneratorMonomial { euler: 0, pontryagin }
    }

    fn trimmed(mut self) -> Self {
        while self.pontryagin.last() == Some(&0) {
            self.pontryagin.pop();
        }
        self
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.pontryagin.len().max(other.pontryagin.len());
        let pontryagin = (0..len)
            .map(|i| {
                self.pontryagin.get(i).copied().unwrap_or(0)
                    + other.pontryagin.get(i).copied().unwrap_or(0)
            })
            .collect();
        GeneratorMonomial {
            euler: self.euler + other.euler,
            pontryagin,
        }
        .trimmed()
    }

    pub fn degree(&self, q: u32) -> u32 {
        let pont: u32 = self
            .pontryagin
            .iter()
            .enumerate()
            .map(|(i, &b)| 4 * (i as u32 + 1) * b)
            .sum();
        self.euler * q + pont
    }

    pub fn is_one(&self) -> bool {
        self.euler == 0 && self.pontryagin.is_empty()
    }
}

impl fmt::Display for GeneratorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut push = |name: String, exp: u32| match exp {
            0 => {}
            1 => parts.push(name),
            n => parts.push(format!("{name}^{n}")),
        };
        for (i, &b) in self.pontryagin.iter().enumerate() {
            push(format!("p{}", i + 1), b);
        }
        push("e".to_string(), self.euler);
        f.write_str(&parts.join("*"))
    }
}

/// Cohomological degree of a class expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassDegree {
    /// The zero class, homogeneous of every degree.
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

/// Polynomial in `e, p1, p2, ..` with rational coefficients, tied to a
/// codimension `q` that fixes the degree of `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpr {
    q: u32,
    terms: BTreeMap<GeneratorMonomial, Rational>,
}

fn check_codim(q: u32) -> Result<(), ClassError> {
    if q < 2 || !q.is_multiple_of(2) {
        return Err(ClassError::BadCodimension(q));
    }
    Ok(())
}

impl ClassExpr {
    pub fn zero(q: u32) -> Result<Self, ClassError> {
        check_codim(q)?;
        Ok(ClassExpr {
            q,
            terms: BTreeMap::new(),
        })
    }

    pub fn monomial(q: u32, m: GeneratorMonomial, coeff: Rational) -> Result<Self, ClassError> {
        let mut c = Self::zero(q)?;
        c.add_term(m.trimmed(), coeff);
        Ok(c)
    }

    pub fn parse(text: &str, q: u32) -> Result<Self, ClassError> {
        parse_class_expr(text, q)
    }

    pub fn codimension(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: GeneratorMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn add(mut self, other: &ClassExpr, sign: i64) -> ClassExpr {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * Rational::from_integer(sign.into()));
        }
        self
    }

    fn mul(&self, other: &ClassExpr) -> ClassExpr {
        let mut out = ClassExpr {
            q: self.q,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn pow(&self, exp: u32) -> ClassExpr {
        let mut out = ClassExpr::monomial(self.q, GeneratorMonomial::one(), Rational::one())
            .expect("codimension already validated");
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    pub fn degree(&self) -> ClassDegree {
        class_degree(self)
    }

    /// Splits into homogeneous parts, ascending by degree.
    pub fn homogeneous_parts(&self) -> Vec<(u32, ClassExpr)> {
        let mut parts: BTreeMap<u32, ClassExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree(self.q))
                .or_insert_with(|| ClassExpr {
                    q: self.q,
                    terms: BTreeMap::new(),
                })
                .add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Every generator monomial of cohomological degree exactly `degree`, using
    /// `e` and `p_1..p_{q/2}` (higher Pontryagin generators vanish on weights).
    pub fn monomials_of_degree(q: u32, degree: u32) -> Result<Vec<GeneratorMonomial>, ClassError> {
        check_codim(q)?;
        let m = q / 2;
        let mut out = Vec::new();
        for euler in 0..=degree / q {
            let rest = degree - euler * q;
            if !rest.is_multiple_of(4) {
                continue;
            }
            let mut partitions = Vec::new();
            pontryagin_partitions(rest / 4, m, &mut vec![0; m as usize], 0, &mut partitions);
            for pontryagin in partitions {
                out.push(GeneratorMonomial { euler, pontryagin }.trimmed());
            }
        }
        out.sort();
        Ok(out)
    }
}

// Exponent vectors b with Σ j·b_j = weight, j = 1..=max_index.
fn pontryagin_partitions(weight: u32, max_index: u32, current: &mut Vec<u32>, start: usize, out: &mut Vec<Vec<u32>>) {
    if weight == 0 {
        out.push(current.clone());
        return;
    }
    for idx in start..max_index as usize {
        let j = idx as u32 + 1;
        if j > weight {
            break;
        }
        current[idx] += 1;
        pontryagin_partitions(weight - j, max_index, current, idx, out);
        current[idx] -= 1;
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Common cohomological degree of every monomial in `c`.
pub fn class_degree(c: &ClassExpr) -> ClassDegree {
    let mut degrees = c.terms.keys().map(|m| m.degree(c.q));
    let Some(first) = degrees.next() else {
        return ClassDegree::Zero;
    };
    if degrees.all(|d| d == first) {
        ClassDegree::Homogeneous(first)
    } else {
        ClassDegree::Inhomogeneous
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    q: u32,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ClassError> {
        Err(ClassError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn uint(&mut self) -> Result<(u64, usize), ClassError> {
        self.skip_ws();
        let at = self.pos;
        match self.digits() {
            Some(d) => match d.parse() {
                Ok(v) => Ok((v, at)),
                Err(_) => Err(ClassError::Syntax {
                    position: at,
                    message: "integer too large".into(),
                }),
            },
            None => self.error("expected an unsigned integer"),
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, ClassError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, 1);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, -1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ClassExpr, ClassError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ClassExpr, ClassError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(ClassExpr::zero(self.q)?.add(&inner, -1));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let (exp, at) = self.uint()?;
            if exp > MAX_EXPONENT as u64 {
                return Err(ClassError::ExponentTooLarge { exponent: exp, position: at });
            }
            return Ok(base.pow(exp as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ClassExpr, ClassError> {
        let q = self.q;
        match self.peek() {
            Some(b'e') => {
                self.pos += 1;
                ClassExpr::monomial(q, GeneratorMonomial::euler(), Rational::one())
            }
            Some(b'p') => {
                self.pos += 1;
                let at = self.pos;
                let Some(d) = self.digits() else {
                    return self.error("expected an index after 'p'");
                };
                let index: u64 = d.parse().unwrap_or(u64::MAX);
                if index == 0 {
                    return Err(ClassError::ZeroIndex { position: at });
                }
                if index > MAX_PONTRYAGIN_INDEX as u64 {
                    return Err(ClassError::IndexTooLarge { index, position: at });
                }
                ClassExpr::monomial(q, GeneratorMonomial::pontryagin(index as u32), Rational::one())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.digits();
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    if self.digits().is_none() {
                        return self.error("expected a denominator after '/'");
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match parse_rational(text) {
                    Some(r) => ClassExpr::monomial(q, GeneratorMonomial::one(), r),
                    None => Err(ClassError::Syntax {
                        position: start,
                        message: format!("invalid rational literal '{text}'"),
                    }),
                }
            }
            Some(c) => self.error(format!("unexpected character '{}'", c as char)),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a class expression.
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | atom ('^' uint)?
/// atom   := 'e' | 'p' uint | uint ('/' uint)? | '(' expr ')'
/// ```
pub fn parse_class_expr(text: &str, q: u32) -> Result<ClassExpr, ClassError> {
    check_codim(q)?;
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        q,
    };
    let c = parser.expr()?;
    if parser.peek().is_some() {
        return parser.error("unexpected trailing input");
    }
    Ok(c)
}

/// Orientation sign `ε` of a normal space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_rational(self) -> Rational {
        Rational::from_integer(self.as_i64().into())
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Isotropy weights of one closed leaf (or fixed point) and the orientation
/// sign relating the product of weights to the oriented Euler class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    pub weights: Vec<LinearForm>,
    pub sign: Sign,
}

impl WeightSystem {
    pub fn new(weights: Vec<LinearForm>, sign: Sign) -> Self {
        WeightSystem { weights, sign }
    }

    pub fn codimension(&self) -> u32 {
        2 * self.weights.len() as u32
    }

    pub fn num_vars(&self) -> Option<usize> {
        self.weights.first().map(LinearForm::num_vars)
    }

    /// Checks that the weights are nonzero, share a variable count, and
    /// number `q/2`.
    pub fn validate(&self, q: u32) -> Result<(), ClassError> {
        check_codim(q)?;
        let expected = (q / 2) as usize;
        if self.weights.len() != expected {
            return Err(ClassError::WeightCount {
                q,
                expected,
                got: self.weights.len(),
            });
        }
        let k = self.weights[0].num_vars();
        for (index, w) in self.weights.iter().enumerate() {
            if w.num_vars() != k {
                return Err(ClassError::WeightDimension);
            }
            if w.is_zero() {
                return Err(ClassError::ZeroWeight { index });
            }
        }
        Ok(())
    }
}

/// `e_j(values)`; `e_0 = 1` and `e_j = 0` for `j > values.len()`.
pub fn elementary_symmetric(j: usize, values: &[Polynomial], num_vars: usize) -> Polynomial {
    elementary_symmetric_all(values, num_vars)
        .into_iter()
        .nth(j)
        .unwrap_or_else(|| Polynomial::zero(num_vars))
}

/// `[e_0, e_1, .., e_n]` of `n` values.
pub fn elementary_symmetric_all(values: &[Polynomial], num_vars: usize) -> Vec<Polynomial> {
    let mut e = vec![Polynomial::zero(num_vars); values.len() + 1];
    e[0] = Polynomial::one(num_vars);
    for (n, v) in values.iter().enumerate() {
        for j in (1..=n + 1).rev() {
            let t = &e[j - 1] * v;
            e[j] = &e[j] + &t;
        }
    }
    e
}

/// `ε · Π α` for the weights of `w`.
pub fn equivariant_euler(w: &WeightSystem) -> Result<Polynomial, ClassError> {
    let k = w.num_vars().ok_or(ClassError::WeightCount {
        q: 0,
        expected: 1,
        got: 0,
    })?;
    let mut out = Polynomial::constant(k, w.sign.to_rational());
    for (index, a) in w.weights.iter().enumerate() {
        if a.num_vars() != k {
            return Err(ClassError::WeightDimension);
        }
        if a.is_zero() {
            return Err(ClassError::ZeroWeight { index });
        }
        out = &out * &a.to_polynomial();
    }
    Ok(out)
}

/// Substitutes `p_j ↦ e_j(α²)` and `e ↦ ε·Πα` into `c`.
pub fn eval_at_weights(c: &ClassExpr, w: &WeightSystem) -> Result<Polynomial, ClassError> {
    w.validate(c.q)?;
    let k = w.weights[0].num_vars();
    let squares: Vec<Polynomial> = w.weights.iter().map(|a| a.to_polynomial().pow(2)).collect();
    let pont = elementary_symmetric_all(&squares, k);
    let euler = equivariant_euler(w)?;

    let mut out = Polynomial::zero(k);
    for (m, coeff) in &c.terms {
        let mut value = euler.pow(m.euler);
        for (i, &b) in m.pontryagin.iter().enumerate() {
            if b == 0 {
                continue;
            }
            match pont.get(i + 1) {
                Some(pj) => value = &value * &pj.pow(b),
                None => {
                    value = Polynomial::zero(k);
                    break;
                }
            }
        }
        out = &out + &value.scale(coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ws(weights: &[&[i64]], sign: Sign) -> WeightSystem {
        WeightSystem::new(weights.iter().map(|c| LinearForm::from_ints(c)).collect(), sign)
    }

    #[test]
    fn parse_euler() {
        let c = parse_class_expr("e", 2).unwrap();
        assert_eq!(c.degree(), ClassDegree::Homogeneous(2));
        assert_eq!(c.to_string(), "e");
    }

    #[test]
    fn parse_homogeneous_pontryagin() {
        let c = parse_class_expr("p1^2 - 4*p2", 8).unwrap();
        assert_eq!(c.degree(), ClassDegree::Homogeneous(8));
        assert_eq!(c.to_string(), "p1^2 - 4*p2");
    }

    #[test]
    fn parse_flags_inhomogeneous() {
        let c = parse_class_expr("e + p1", 2).unwrap();
        assert_eq!(c.degree(), ClassDegree::Inhomogeneous);
        let parts = c.homogeneous_parts();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 2);
        assert_eq!(parts[1].0, 4);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(class_degree(&parse_class_expr("e", 4).unwrap()), ClassDegree::Homogeneous(4));
        assert_eq!(class_degree(&parse_class_expr("p1", 4).unwrap()), ClassDegree::Homogeneous(4));
        assert_eq!(class_degree(&parse_class_expr("1", 4).unwrap()), ClassDegree::Homogeneous(0));
        assert_eq!(class_degree(&parse_class_expr("e - e", 4).unwrap()), ClassDegree::Zero);
    }

    #[test]
    fn parse_arithmetic() {
        let c = parse_class_expr(" ( e + 1/2 ) * ( e - 1/2 ) ", 2).unwrap();
        let d = parse_class_expr("e^2 - 1/4", 2).unwrap();
        assert_eq!(c, d);
        let neg = parse_class_expr("-e^2", 2).unwrap();
        assert_eq!(neg.to_string(), "-e^2");
        assert_eq!(parse_class_expr("3*p1*e", 4).unwrap().to_string(), "3*p1*e");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_class_expr("p0", 2), Err(ClassError::ZeroIndex { position: 1 })));
        assert!(matches!(
            parse_class_expr("p17", 2),
            Err(ClassError::IndexTooLarge { index: 17, .. })
        ));
        assert!(matches!(parse_class_expr("e +", 2), Err(ClassError::Syntax { position: 3, .. })));
        assert!(matches!(parse_class_expr("e x", 2), Err(ClassError::Syntax { position: 2, .. })));
        assert!(matches!(parse_class_expr("(e", 2), Err(ClassError::Syntax { .. })));
        assert!(matches!(parse_class_expr("p", 2), Err(ClassError::Syntax { .. })));
        assert!(matches!(parse_class_expr("1/0", 2), Err(ClassError::Syntax { .. })));
        assert!(matches!(parse_class_expr("e^", 2), Err(ClassError::Syntax { .. })));
        assert!(matches!(parse_class_expr("e^65", 2), Err(ClassError::ExponentTooLarge { .. })));
        assert!(matches!(parse_class_expr("", 2), Err(ClassError::Syntax { .. })));
        assert_eq!(parse_class_expr("e", 3), Err(ClassError::BadCodimension(3)));
        assert_eq!(parse_class_expr("e", 0), Err(ClassError::BadCodimension(0)));
    }

    #[test]
    fn elementary_symmetric_examples() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(2, 1);
        let sq = [a.pow(2), b.pow(2)];
        assert_eq!(elementary_symmetric(0, &sq, 2), Polynomial::one(2));
        assert_eq!(elementary_symmetric(1, &sq, 2), &a.pow(2) + &b.pow(2));
        assert_eq!(elementary_symmetric(2, &sq, 2), &a.pow(2) * &b.pow(2));
        assert!(elementary_symmetric(3, &sq, 2).is_zero());
    }

    #[test]
    fn euler_on_weights() {
        let (u1, u2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let e = parse_class_expr("e", 4).unwrap();
        assert_eq!(eval_at_weights(&e, &ws(&[&[1, 0], &[0, 1]], Sign::Plus)).unwrap(), &u1 * &u2);
    }

    #[test]
    fn first_pontryagin_on_weights() {
        let (u1, u2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let p1 = parse_class_expr("p1", 4).unwrap();
        let got = eval_at_weights(&p1, &ws(&[&[-1, 0], &[-1, 1]], Sign::Plus)).unwrap();
        // u1² + (u2 − u1)² expanded by hand
        let expected = &(&u1.pow(2).scale(&rat(2)) - &(&u1 * &u2).scale(&rat(2))) + &u2.pow(2);
        assert_eq!(got, expected);

        let a = Polynomial::var(1, 0);
        let p1 = parse_class_expr("p1", 2).unwrap();
        assert_eq!(eval_at_weights(&p1, &ws(&[&[1]], Sign::Plus)).unwrap(), a.pow(2));
    }

    #[test]
    fn high_pontryagin_vanishes() {
        let p2 = parse_class_expr("p2 + 1", 2).unwrap();
        let got = eval_at_weights(&p2, &ws(&[&[3]], Sign::Plus)).unwrap();
        assert_eq!(got, Polynomial::one(1));
    }

    #[test]
    fn weight_count_mismatch() {
        let e = parse_class_expr("e", 4).unwrap();
        assert_eq!(
            eval_at_weights(&e, &ws(&[&[1]], Sign::Plus)),
            Err(ClassError::WeightCount { q: 4, expected: 2, got: 1 })
        );
    }

    #[test]
    fn equivariant_euler_examples() {
        let u = Polynomial::var(1, 0);
        assert_eq!(equivariant_euler(&ws(&[&[1]], Sign::Plus)).unwrap(), u);
        let (u1, u2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        assert_eq!(
            equivariant_euler(&ws(&[&[1, 0], &[0, 1]], Sign::Minus)).unwrap(),
            -&(&u1 * &u2)
        );
        assert_eq!(equivariant_euler(&ws(&[&[1, -1]], Sign::Plus)).unwrap(), &u1 - &u2);
        assert_eq!(
            equivariant_euler(&ws(&[&[1, 0], &[0, 0]], Sign::Plus)),
            Err(ClassError::ZeroWeight { index: 1 })
        );
    }

    #[test]
    fn monomial_enumeration() {
        let names = |q, d| -> Vec<String> {
            ClassExpr::monomials_of_degree(q, d)
                .unwrap()
                .iter()
                .map(ToString::to_string)
                .collect()
        };
        assert_eq!(names(2, 0), vec!["1"]);
        assert_eq!(names(2, 2), vec!["e"]);
        assert_eq!(names(2, 4), vec!["p1", "e^2"]);
        assert_eq!(names(4, 4), vec!["p1", "e"]);
        assert_eq!(names(8, 8), vec!["p1^2", "p2", "e"]);
        assert!(names(4, 2).is_empty());
    }
}
