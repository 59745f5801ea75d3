//! Multivariate integer polynomials: the left-hand side `D` of a Diophantine
//! equation `D(x1, ..., xk) = 0`.
//!
//! A [`Polynomial`] is always kept in canonical form: fully expanded, no zero
//! coefficients, and only variables that actually occur in some term. The
//! variable order is the tensor-factor order used by every operator built
//! from the polynomial.

mod parser;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("empty equation")]
    Empty,
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("exponent at offset {position} must be a non-negative integer literal")]
    BadExponent { position: usize },
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("polynomial has no variables")]
    NoVariables,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
}

/// Exponent vector, one entry per variable.
///
/// Ordered so that iteration visits terms in decreasing graded-lexicographic
/// order: higher total degree first, ties broken lexicographically with
/// larger exponents on earlier variables first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical multivariate polynomial with arbitrary-precision integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { variables: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(value: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        let value = value.into();
        if !value.is_zero() {
            terms.insert(Monomial::one(0), value);
        }
        Self { variables: Vec::new(), terms }
    }

    /// The polynomial consisting of a single variable.
    pub fn variable(name: &str) -> Result<Self, PolyError> {
        if !is_identifier(name) {
            return Err(PolyError::InvalidVariable(name.to_string()));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), BigInt::one());
        Ok(Self { variables: vec![name.to_string()], terms })
    }

    /// Builds a polynomial from explicit terms. Like exponents are merged,
    /// zero coefficients dropped and unused variables removed.
    pub fn from_terms<I>(variables: Vec<String>, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(PolyError::InvalidVariable(v.clone()));
            }
            if variables[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != variables.len() {
                return Err(PolyError::Arity { expected: variables.len(), got: exps.len() });
            }
            *map.entry(Monomial(exps)).or_insert_with(BigInt::zero) += coeff;
        }
        Ok(Self::canonical(variables, map))
    }

    fn canonical(variables: Vec<String>, mut terms: BTreeMap<Monomial, BigInt>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..variables.len()).map(|i| terms.keys().any(|m| m.0[i] != 0)).collect();
        if used.iter().all(|&u| u) {
            return Self { variables, terms };
        }
        let keep = |i: &usize| used[*i];
        let vars = (0..variables.len()).filter(keep).map(|i| variables[i].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(m, c)| (Monomial((0..m.0.len()).filter(keep).map(|i| m.0[i]).collect()), c))
            .collect();
        Self { variables: vars, terms }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms in canonical (decreasing graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(m, c)| (m.exponents(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Option<&BigInt> {
        self.terms.get(&Monomial(exponents.to_vec()))
    }

    /// Exact value at `point`, one value per variable in variable order.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt, PolyError> {
        if point.len() != self.num_vars() {
            return Err(PolyError::Arity { expected: self.num_vars(), got: point.len() });
        }
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e != 0 {
                    term *= x.pow(e);
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn evaluate_i64(&self, point: &[i64]) -> Result<BigInt, PolyError> {
        let point: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
        self.evaluate(&point)
    }

    /// The single equation `D(x)^2 + Σ (x_i - y_i^2)^2` in the `k` original
    /// variables followed by `k` fresh root variables. It vanishes at an
    /// integer point exactly when `D(x) = 0` and every `x_i` is the square of
    /// `y_i`, so solvability over perfect squares reduces to plain integer
    /// solvability of one polynomial.
    pub fn to_hilbert_tenth_instance(&self) -> Result<Polynomial, PolyError> {
        if self.num_vars() == 0 {
            return Err(PolyError::NoVariables);
        }
        let mut result = self * self;
        let mut taken = self.variables.clone();
        for name in &self.variables {
            let mut root = format!("r_{name}");
            while taken.contains(&root) {
                root.push('_');
            }
            taken.push(root.clone());
            let x = Polynomial::variable(name)?;
            let y = Polynomial::variable(&root)?;
            let diff = &x - &y.pow(2);
            result = &result + &(&diff * &diff);
        }
        Ok(result)
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut acc = Polynomial::constant(1);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Same polynomial with variables permuted into `order`, which must be a
    /// permutation of the current variable names.
    pub fn with_variable_order(&self, order: &[String]) -> Result<Polynomial, PolyError> {
        if order.len() != self.num_vars() {
            return Err(PolyError::Arity { expected: self.num_vars(), got: order.len() });
        }
        let mut map = Vec::with_capacity(order.len());
        for name in order {
            let idx = self
                .variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| PolyError::InvalidVariable(name.clone()))?;
            if map.contains(&idx) {
                return Err(PolyError::DuplicateVariable(name.clone()));
            }
            map.push(idx);
        }
        let terms =
            self.terms.iter().map(|(m, c)| (Monomial(map.iter().map(|&i| m.0[i]).collect()), c.clone())).collect();
        Ok(Polynomial { variables: order.to_vec(), terms })
    }

    /// Equality as functions of named variables, ignoring variable order.
    pub fn same_up_to_variable_order(&self, other: &Polynomial) -> bool {
        other.with_variable_order(&self.variables).is_ok_and(|o| &o == self)
    }

    /// Deterministic textual form, e.g. `x*y + 2*x + y - 10`.
    pub fn print_canonical(&self) -> String {
        self.to_string()
    }

    /// Rewrites both operands over the union of their variables (own
    /// variables first, then new ones from `other` in their order).
    fn aligned(&self, other: &Polynomial) -> (Vec<String>, Vec<Monomial>, Vec<Monomial>) {
        let mut vars = self.variables.clone();
        for v in &other.variables {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let lift = |p: &Polynomial| -> Vec<Monomial> {
            let idx: Vec<usize> = p.variables.iter().map(|v| vars.iter().position(|w| w == v).unwrap()).collect();
            p.terms
                .keys()
                .map(|m| {
                    let mut exps = vec![0; vars.len()];
                    for (&i, &e) in idx.iter().zip(&m.0) {
                        exps[i] = e;
                    }
                    Monomial(exps)
                })
                .collect()
        };
        let (a, b) = (lift(self), lift(other));
        (vars, a, b)
    }

    fn combine(&self, other: &Polynomial, sign: i8) -> Polynomial {
        let (vars, a, b) = self.aligned(other);
        let mut terms = BTreeMap::new();
        for (m, c) in a.into_iter().zip(self.terms.values()) {
            terms.insert(m, c.clone());
        }
        for (m, c) in b.into_iter().zip(other.terms.values()) {
            let slot = terms.entry(m).or_insert_with(BigInt::zero);
            if sign < 0 {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Polynomial::canonical(vars, terms)
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let (vars, a, b) = self.aligned(other);
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in a.iter().zip(self.terms.values()) {
            for (mb, cb) in b.iter().zip(other.terms.values()) {
                *terms.entry(ma.times(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Polynomial::canonical(vars, terms)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, 1)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, -1)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl FromStr for Polynomial {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse(s)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let factors: Vec<String> = self
                .variables
                .iter()
                .zip(&m.0)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse(s).unwrap()
    }

    #[test]
    fn parses_linear_instance() {
        let d = p("x - 16");
        assert_eq!(d.variables(), ["x"]);
        assert_eq!(d.coefficient(&[1]), Some(&BigInt::from(1)));
        assert_eq!(d.coefficient(&[0]), Some(&BigInt::from(-16)));
        assert_eq!(d.num_terms(), 2);
    }

    #[test]
    fn expands_product_instance() {
        let d = p("(x+1)*(y+2) - 12");
        assert_eq!(d.variables(), ["x", "y"]);
        assert_eq!(d.print_canonical(), "x*y + 2*x + y - 10");
    }

    #[test]
    fn zero_polynomial() {
        let z = p("0");
        assert!(z.is_zero());
        assert_eq!(z.num_vars(), 0);
        assert_eq!(z.print_canonical(), "0");
        assert!(p("x - x").is_zero());
    }

    #[test]
    fn printing_rules() {
        assert_eq!(p("x-16").print_canonical(), "x - 16");
        assert_eq!(p("-x^2 + 3*x*y^2 - y").print_canonical(), "3*x*y^2 - x^2 - y");
        assert_eq!(p("-1").print_canonical(), "-1");
        assert_eq!(p("-(x)").print_canonical(), "-x");
    }

    #[test]
    fn unused_variables_are_dropped() {
        let d = p("0*x + y");
        assert_eq!(d.variables(), ["y"]);
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p("x-16").evaluate_i64(&[16]).unwrap(), BigInt::from(0));
        assert_eq!(p("x-7").evaluate_i64(&[9]).unwrap(), BigInt::from(2));
        assert_eq!(p("(x+1)*(y+2)-12").evaluate_i64(&[1, 4]).unwrap(), BigInt::from(0));
        assert_eq!(p("x").evaluate_i64(&[1, 2]), Err(PolyError::Arity { expected: 1, got: 2 }));
    }

    #[test]
    fn evaluation_is_exact_beyond_i64() {
        let d = p("x^5 - 1");
        let big = d.evaluate_i64(&[1_000_000]).unwrap();
        assert_eq!(big, BigInt::from(10u8).pow(30) - 1);
    }

    #[test]
    fn hilbert_tenth_instance_for_linear_equation() {
        let h = p("x - 16").to_hilbert_tenth_instance().unwrap();
        assert_eq!(h.num_vars(), 2);
        assert_eq!(h.variables(), ["x", "r_x"]);
        assert_eq!(h.evaluate_i64(&[16, 4]).unwrap(), BigInt::from(0));
        assert_eq!(h.evaluate_i64(&[16, 3]).unwrap(), BigInt::from(49));
        // (x-16)^2 + (x-y^2)^2 expanded by hand
        let expected = p("x^2 - 32*x + 256 + x^2 - 2*x*r_x^2 + r_x^4");
        assert_eq!(h, expected.with_variable_order(h.variables()).unwrap());
        assert_eq!(Polynomial::constant(3).to_hilbert_tenth_instance(), Err(PolyError::NoVariables));
    }

    #[test]
    fn root_names_avoid_collisions() {
        let h = p("x + r_x").to_hilbert_tenth_instance().unwrap();
        assert_eq!(h.variables(), ["x", "r_x", "r_x_", "r_r_x"]);
    }

    #[test]
    fn arithmetic_aligns_variables_by_name() {
        let a = p("x + y");
        let b = p("y - z");
        let sum = &a + &b;
        assert_eq!(sum.variables(), ["x", "y", "z"]);
        assert_eq!(sum.print_canonical(), "x + 2*y - z");
        assert!((&a - &a).is_zero());
        assert_eq!((&a * &b).evaluate_i64(&[1, 2, 3]).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn from_terms_validates() {
        assert!(matches!(
            Polynomial::from_terms(vec!["x".into(), "x".into()], []),
            Err(PolyError::DuplicateVariable(_))
        ));
        assert!(matches!(
            Polynomial::from_terms(vec!["x".into()], [(vec![1, 2], BigInt::from(1))]),
            Err(PolyError::Arity { .. })
        ));
        let q = Polynomial::from_terms(vec!["x".into()], [(vec![1], BigInt::from(2)), (vec![1], BigInt::from(-2))])
            .unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn reordering_and_equivalence() {
        let a = p("y^2 + x");
        let b = p("x + y^2");
        assert_ne!(a, b);
        assert!(a.same_up_to_variable_order(&b));
    }
}
