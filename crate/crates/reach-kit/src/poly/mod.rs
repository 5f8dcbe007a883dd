//! Multivariate polynomials with complex coefficients in canonical expanded
//! form.
//!
//! A polynomial is a sorted list of monomials over a fixed number of
//! variables. Terms are kept in descending graded-lexicographic order with no
//! duplicate exponent vectors and no (near-)zero coefficients, so equality is
//! term-for-term equality and printing is deterministic.

mod parse;

pub use parse::{parse_system, ParseError};

use crate::C64;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Relative threshold below which coefficients are treated as float dust and
/// dropped after arithmetic.
pub const COEFF_CLEANUP_REL: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("variable index {0} out of range for {1} variables")]
    VarIndexOutOfRange(usize, usize),
    #[error("system is not square: {neqs} equations in {nvars} variables")]
    NonSquare { neqs: usize, nvars: usize },
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("Bezout number overflows u64")]
    BezoutOverflow,
}

/// One coefficient together with a dense exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: C64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Descending graded-lexicographic order: higher total degree first, ties
/// broken by lexicographic comparison of exponent vectors.
fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    db.cmp(&da).then_with(|| b.cmp(a))
}

/// An expanded multivariate polynomial over `C64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn constant(c: C64, nvars: usize) -> Self {
        Polynomial::from_terms(
            nvars,
            vec![Monomial { coeff: c, exponents: vec![0; nvars] }],
        )
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(C64::new(1.0, 0.0), nvars)
    }

    /// The monomial `x_i`.
    pub fn var(index: usize, nvars: usize) -> Result<Self, PolyError> {
        if index >= nvars {
            return Err(PolyError::VarIndexOutOfRange(index, nvars));
        }
        let mut exponents = vec![0; nvars];
        exponents[index] = 1;
        Ok(Polynomial::from_terms(
            nvars,
            vec![Monomial { coeff: C64::new(1.0, 0.0), exponents }],
        ))
    }

    /// Builds a polynomial from arbitrary terms, collecting duplicates,
    /// dropping dust and sorting into canonical order.
    pub fn from_terms(nvars: usize, terms: Vec<Monomial>) -> Self {
        let mut p = Polynomial { nvars, terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        for t in &self.terms {
            assert_eq!(t.exponents.len(), self.nvars, "exponent vector length");
        }
        self.terms.sort_by(|a, b| grlex_desc(&a.exponents, &b.exponents));
        let mut merged: Vec<Monomial> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.exponents == t.exponents => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        let max = merged.iter().map(|t| t.coeff.norm()).fold(0.0f64, f64::max);
        if max > 0.0 {
            merged.retain(|t| t.coeff.norm() >= COEFF_CLEANUP_REL * max);
        } else {
            merged.clear();
        }
        debug_assert!(
            merged.iter().all(|t| t.coeff.re.is_finite() && t.coeff.im.is_finite()),
            "non-finite coefficient"
        );
        self.terms = merged;
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::total_degree).max()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    fn check_same_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::DimensionMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Polynomial::from_terms(self.nvars, terms))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| Monomial {
            coeff: -t.coeff,
            exponents: t.exponents.clone(),
        }));
        Ok(Polynomial::from_terms(self.nvars, terms))
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Monomial { coeff: -t.coeff, exponents: t.exponents.clone() })
                .collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Polynomial {
        Polynomial::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|t| Monomial { coeff: t.coeff * c, exponents: t.exponents.clone() })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut acc: HashMap<Vec<u32>, C64> =
            HashMap::with_capacity(self.terms.len().max(other.terms.len()));
        for a in &self.terms {
            for b in &other.terms {
                let mut e = a.exponents.clone();
                for (ei, bi) in e.iter_mut().zip(&b.exponents) {
                    *ei += bi;
                }
                *acc.entry(e).or_insert(C64::new(0.0, 0.0)) += a.coeff * b.coeff;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(exponents, coeff)| Monomial { coeff, exponents })
            .collect();
        Ok(Polynomial::from_terms(self.nvars, terms))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut out = Polynomial::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base).expect("same nvars");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same nvars");
            }
        }
        out
    }

    /// Value at `point`; the zero polynomial evaluates to 0.
    pub fn evaluate(&self, point: &[C64]) -> Result<C64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch(point.len(), self.nvars));
        }
        let mut sum = C64::new(0.0, 0.0);
        for t in &self.terms {
            let mut v = t.coeff;
            for (z, &e) in point.iter().zip(&t.exponents) {
                if e > 0 {
                    v *= z.powu(e);
                }
            }
            sum += v;
        }
        Ok(sum)
    }

    /// Exact symbolic partial derivative with respect to variable `var_index`.
    pub fn differentiate(&self, var_index: usize) -> Result<Polynomial, PolyError> {
        if var_index >= self.nvars {
            return Err(PolyError::VarIndexOutOfRange(var_index, self.nvars));
        }
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents[var_index] > 0)
            .map(|t| {
                let e = t.exponents[var_index];
                let mut exponents = t.exponents.clone();
                exponents[var_index] = e - 1;
                Monomial { coeff: t.coeff * (e as f64), exponents }
            })
            .collect();
        Ok(Polynomial::from_terms(self.nvars, terms))
    }

    /// Remaps terms into a larger variable space: exponent `i` of `self`
    /// becomes exponent `map[i]` of the result.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Polynomial, PolyError> {
        if map.len() != self.nvars {
            return Err(PolyError::DimensionMismatch(map.len(), self.nvars));
        }
        for &m in map {
            if m >= nvars {
                return Err(PolyError::VarIndexOutOfRange(m, nvars));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exponents = vec![0u32; nvars];
                for (i, &e) in t.exponents.iter().enumerate() {
                    exponents[map[i]] += e;
                }
                Monomial { coeff: t.coeff, exponents }
            })
            .collect();
        Ok(Polynomial::from_terms(nvars, terms))
    }

    fn fmt_with_names(&self, f: &mut fmt::Formatter<'_>, names: Option<&[String]>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (coeff, sign) = if i > 0 && t.coeff.im == 0.0 && t.coeff.re < 0.0 {
                (-t.coeff, " - ")
            } else if i > 0 {
                (t.coeff, " + ")
            } else {
                (t.coeff, "")
            };
            write!(f, "{sign}")?;
            let has_vars = t.exponents.iter().any(|&e| e > 0);
            let mut wrote_coeff = false;
            if coeff.im != 0.0 {
                write!(f, "({}+{}i)", coeff.re, coeff.im)?;
                wrote_coeff = true;
            } else if !has_vars || coeff.re != 1.0 {
                write!(f, "{}", coeff.re)?;
                wrote_coeff = true;
            }
            let mut first_factor = !wrote_coeff;
            for (v, &e) in t.exponents.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_factor {
                    write!(f, "*")?;
                }
                first_factor = false;
                match names {
                    Some(ns) => write!(f, "{}", ns[v])?,
                    None => write!(f, "x{v}")?,
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_names(f, None)
    }
}

/// A list of polynomials over a shared ordered variable list.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    pub var_names: Vec<String>,
    pub polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(var_names: Vec<String>, polys: Vec<Polynomial>) -> Result<Self, PolyError> {
        let nvars = var_names.len();
        for p in &polys {
            if p.nvars() != nvars {
                return Err(PolyError::DimensionMismatch(p.nvars(), nvars));
            }
        }
        Ok(PolySystem { var_names, polys })
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.len() == self.nvars()
    }

    /// Row i, column j holds the partial of polynomial i with respect to
    /// variable j.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.polys
            .iter()
            .map(|p| {
                (0..self.nvars())
                    .map(|j| p.differentiate(j).expect("index in range"))
                    .collect()
            })
            .collect()
    }

    /// Product of total degrees. Errors on non-square systems and when a zero
    /// polynomial is present.
    pub fn bezout_number(&self) -> Result<u64, PolyError> {
        if !self.is_square() {
            return Err(PolyError::NonSquare { neqs: self.len(), nvars: self.nvars() });
        }
        let mut d: u64 = 1;
        for p in &self.polys {
            let deg = p.degree().ok_or(PolyError::ZeroPolynomial)?;
            d = d.checked_mul(deg as u64).ok_or(PolyError::BezoutOverflow)?;
        }
        Ok(d)
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<Vec<C64>, PolyError> {
        self.polys.iter().map(|p| p.evaluate(point)).collect()
    }

    /// Max-norm of the system value at a real point.
    pub fn residual_inf_real(&self, point: &[f64]) -> f64 {
        let z: Vec<C64> = point.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.residual_inf(&z)
    }

    /// Max-norm of the system value at a complex point.
    pub fn residual_inf(&self, point: &[C64]) -> f64 {
        self.polys
            .iter()
            .map(|p| p.evaluate(point).expect("dimension checked by caller").norm())
            .fold(0.0, f64::max)
    }

    /// System scale used to normalize residual thresholds: the largest
    /// coefficient modulus over all polynomials.
    pub fn scale(&self) -> f64 {
        self.polys.iter().map(Polynomial::max_coeff).fold(0.0, f64::max)
    }

    /// Renders the system in the same grammar `parse_system` accepts.
    pub fn to_text(&self) -> String {
        let mut out = String::from("vars:");
        for n in &self.var_names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for p in &self.polys {
            out.push_str(&DisplayInSystem { poly: p, names: &self.var_names }.to_string());
            out.push('\n');
        }
        out
    }
}

struct DisplayInSystem<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for DisplayInSystem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt_with_names(f, Some(self.names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn xy() -> (Polynomial, Polynomial) {
        (Polynomial::var(0, 2).unwrap(), Polynomial::var(1, 2).unwrap())
    }

    #[test]
    fn circle_parses_to_three_terms_degree_two() {
        let sys = parse_system("vars: x y\nx^2 + y^2 - 1").unwrap();
        assert_eq!(sys.polys.len(), 1);
        assert_eq!(sys.polys[0].terms().len(), 3);
        assert_eq!(sys.polys[0].degree(), Some(2));
    }

    #[test]
    fn evaluate_circle_at_point_on_circle() {
        let sys = parse_system("vars: x y\nx^2 + y^2 - 1").unwrap();
        let v = sys.polys[0].evaluate(&[c(1.0), c(0.0)]).unwrap();
        assert_eq!(v, C64::new(0.0, 0.0));
    }

    #[test]
    fn evaluate_at_imaginary_point() {
        let sys = parse_system("vars: x\nx^2 - 1").unwrap();
        let v = sys.polys[0].evaluate(&[C64::new(0.0, 1.0)]).unwrap();
        assert!((v - C64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn differentiate_circle() {
        let sys = parse_system("vars: x y\nx^2 + y^2 - 1").unwrap();
        let px = sys.polys[0].differentiate(0).unwrap();
        let expected = parse_system("vars: x y\n2*x").unwrap().polys[0].clone();
        assert_eq!(px, expected);
    }

    #[test]
    fn differentiate_cubic_in_second_var() {
        let sys = parse_system("vars: x y\nx^3 - x*y^2").unwrap();
        let py = sys.polys[0].differentiate(1).unwrap();
        let expected = parse_system("vars: x y\n0 - 2*x*y").unwrap().polys[0].clone();
        assert_eq!(py, expected);
    }

    #[test]
    fn differentiate_bad_index_errors() {
        let (x, _) = xy();
        assert_eq!(x.differentiate(2), Err(PolyError::VarIndexOutOfRange(2, 2)));
    }

    #[test]
    fn jacobian_of_circle() {
        let sys = parse_system("vars: x y\nx^2 + y^2 - 1").unwrap();
        let j = sys.jacobian();
        assert_eq!(j.len(), 1);
        assert_eq!(j[0][0], parse_system("vars: x y\n2*x").unwrap().polys[0]);
        assert_eq!(j[0][1], parse_system("vars: x y\n2*y").unwrap().polys[0]);
    }

    #[test]
    fn jacobian_of_diagonal_system() {
        let sys = parse_system("vars: x y\nx^2\ny^3").unwrap();
        let j = sys.jacobian();
        assert!(j[0][1].is_zero());
        assert!(j[1][0].is_zero());
        assert_eq!(j[0][0], parse_system("vars: x y\n2*x").unwrap().polys[0]);
        assert_eq!(j[1][1], parse_system("vars: x y\n3*y^2").unwrap().polys[0]);
    }

    #[test]
    fn bezout_of_degrees_two_and_three() {
        let sys = parse_system("vars: x y\nx^2 + y^2 - 1\ny^3 - x").unwrap();
        assert_eq!(sys.bezout_number().unwrap(), 6);
    }

    #[test]
    fn bezout_univariate_quadratic() {
        let sys = parse_system("vars: x\nx^2 - 1").unwrap();
        assert_eq!(sys.bezout_number().unwrap(), 2);
    }

    #[test]
    fn bezout_rejects_non_square_and_zero() {
        let sys = parse_system("vars: x y\nx^2 + y^2 - 1").unwrap();
        assert!(matches!(sys.bezout_number(), Err(PolyError::NonSquare { .. })));
        let zero = PolySystem::new(
            vec!["x".into()],
            vec![Polynomial::zero(1)],
        )
        .unwrap();
        assert_eq!(zero.bezout_number(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn bezout_multiplicative_under_concatenation() {
        let a = parse_system("vars: x y\nx^2 - 1\ny^3 - x").unwrap();
        let b = parse_system("vars: u\nu^2 - 2").unwrap();
        // Side-by-side block system over the union of the variables.
        let mut polys: Vec<Polynomial> =
            a.polys.iter().map(|p| p.embed(3, &[0, 1]).unwrap()).collect();
        polys.extend(b.polys.iter().map(|p| p.embed(3, &[2]).unwrap()));
        let block =
            PolySystem::new(vec!["x".into(), "y".into(), "u".into()], polys).unwrap();
        assert_eq!(
            block.bezout_number().unwrap(),
            a.bezout_number().unwrap() * b.bezout_number().unwrap()
        );
    }

    #[test]
    fn product_of_sum_and_difference() {
        let (x, y) = xy();
        let p = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let expected = parse_system("vars: x y\nx^2 - y^2").unwrap().polys[0].clone();
        assert_eq!(p, expected);
    }

    #[test]
    fn multiplicative_identity() {
        let sys = parse_system("vars: x y\nx^3 - x*y^2 + y + 1").unwrap();
        let p = &sys.polys[0];
        assert_eq!(p.mul(&Polynomial::one(2)).unwrap(), *p);
    }

    #[test]
    fn binomial_cube_coefficients() {
        let sys = parse_system("vars: x\n(x + 1)^3").unwrap();
        let p = &sys.polys[0];
        let coeffs: Vec<f64> = p.terms().iter().map(|t| t.coeff.re).collect();
        assert_eq!(coeffs, vec![1.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn cleanup_drops_float_dust() {
        let p = Polynomial::from_terms(
            1,
            vec![
                Monomial { coeff: c(1.0), exponents: vec![1] },
                Monomial { coeff: c(1e-16), exponents: vec![0] },
            ],
        );
        assert_eq!(p.terms().len(), 1);
    }

    #[test]
    fn degree_of_zero_polynomial_is_none() {
        assert_eq!(Polynomial::zero(3).degree(), None);
        let (x, _) = xy();
        assert_eq!(x.sub(&x).unwrap().degree(), None);
    }

    #[test]
    fn evaluation_is_ring_homomorphism() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rnd = |n: usize| {
            let terms = (0..6)
                .map(|_| Monomial {
                    coeff: C64::new(
                        rng.next_u64() as f64 / u64::MAX as f64 - 0.5,
                        rng.next_u64() as f64 / u64::MAX as f64 - 0.5,
                    ),
                    exponents: (0..n).map(|_| (rng.next_u64() % 4) as u32).collect(),
                })
                .collect();
            Polynomial::from_terms(n, terms)
        };
        for _ in 0..20 {
            let (p, q) = (rnd(3), rnd(3));
            let z: Vec<C64> = (0..3)
                .map(|k| C64::new(0.3 + 0.1 * k as f64, -0.2 + 0.05 * k as f64))
                .collect();
            let lhs = p.mul(&q).unwrap().evaluate(&z).unwrap();
            let rhs = p.evaluate(&z).unwrap() * q.evaluate(&z).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()),
                "homomorphism violated: {lhs} vs {rhs}"
            );
        }
    }
}
