//! Target functions with exact first and second derivatives.
//!
//! [`Polynomial`] is the concrete realization used throughout the crate.
//! Anything else (products with multiple roots, hand-written test functions)
//! plugs in through [`DifferentiableFunction`], usually via [`FnTriple`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Component, NumericError, Result};

/// Value, first and second derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivs {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

impl Derivs {
    pub fn as_tuple(&self) -> (f64, f64, f64) {
        (self.f, self.df, self.d2f)
    }
}

/// Evaluation contract: a point maps to `(f, f', f'')`.
pub trait DifferentiableFunction {
    /// Raw evaluation without finiteness checks.
    fn derivs(&self, x: f64) -> Derivs;

    fn value(&self, x: f64) -> f64 {
        self.derivs(x).f
    }

    /// Checked evaluation; reports which component overflowed.
    fn eval012(&self, x: f64) -> Result<Derivs> {
        let d = self.derivs(x);
        for (v, component) in [
            (d.f, Component::Value),
            (d.df, Component::FirstDerivative),
            (d.d2f, Component::SecondDerivative),
        ] {
            if !v.is_finite() {
                return Err(NumericError::Evaluation { component, x });
            }
        }
        Ok(d)
    }
}

impl<T: DifferentiableFunction + ?Sized> DifferentiableFunction for &T {
    fn derivs(&self, x: f64) -> Derivs {
        (**self).derivs(x)
    }
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
}

/// Free-function form of [`DifferentiableFunction::eval012`].
pub fn eval012<F: DifferentiableFunction + ?Sized>(func: &F, x: f64) -> Result<(f64, f64, f64)> {
    func.eval012(x).map(|d| d.as_tuple())
}

/// Dense real polynomial, coefficients highest degree first.
///
/// The empty coefficient list and `[0]` both denote the zero polynomial;
/// leading zeros are stripped on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs: Vec<f64> = coeffs.into();
        let lead = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    /// Monic polynomial with the given roots (repeated entries give multiplicity).
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Polynomial::new(vec![1.0]), |acc, &r| {
            acc.mul(&Polynomial::new(vec![1.0, -r]))
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Power-rule derivative. Constants (and zero) map to `[0]`.
    pub fn derivative(&self) -> Polynomial {
        let n = self.degree();
        if n == 0 {
            return Polynomial::zero();
        }
        let coeffs: Vec<f64> = self.coeffs[..n]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (n - i) as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

pub fn eval_poly(p: &Polynomial, x: f64) -> f64 {
    p.eval(x)
}

pub fn derivative_poly(p: &Polynomial) -> Polynomial {
    p.derivative()
}

impl DifferentiableFunction for Polynomial {
    fn derivs(&self, x: f64) -> Derivs {
        // Simultaneous Horner for p, p', p''; d2 accumulates p''/2.
        let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &c in &self.coeffs {
            d2 = d2 * x + d1;
            d1 = d1 * x + f;
            f = f * x + c;
        }
        Derivs { f, df: d1, d2f: 2.0 * d2 }
    }

    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("malformed polynomial {input:?}: {reason}")]
pub struct ParsePolynomialError {
    pub input: String,
    pub reason: String,
}

impl FromStr for Polynomial {
    type Err = ParsePolynomialError;

    /// Comma-separated reals, highest degree first: `"1,-3,2"`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = |reason: String| ParsePolynomialError { input: s.to_string(), reason };
        if s.trim().is_empty() {
            return Err(err("no coefficients".into()));
        }
        let coeffs = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>()
                    .ok()
                    .filter(|c| c.is_finite())
                    .ok_or_else(|| err(format!("bad coefficient {tok:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(coeffs))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A function given as three closures for `f`, `f'` and `f''`.
pub struct FnTriple<F, D1, D2> {
    f: F,
    df: D1,
    d2f: D2,
}

impl<F, D1, D2> FnTriple<F, D1, D2>
where
    F: Fn(f64) -> f64,
    D1: Fn(f64) -> f64,
    D2: Fn(f64) -> f64,
{
    pub fn new(f: F, df: D1, d2f: D2) -> Self {
        FnTriple { f, df, d2f }
    }
}

impl<F, D1, D2> DifferentiableFunction for FnTriple<F, D1, D2>
where
    F: Fn(f64) -> f64,
    D1: Fn(f64) -> f64,
    D2: Fn(f64) -> f64,
{
    fn derivs(&self, x: f64) -> Derivs {
        Derivs { f: (self.f)(x), df: (self.df)(x), d2f: (self.d2f)(x) }
    }

    fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quad() -> Polynomial {
        Polynomial::new(vec![1.0, -3.0, 2.0])
    }

    fn naive(p: &Polynomial, x: f64) -> f64 {
        let n = p.degree();
        p.coeffs().iter().enumerate().map(|(i, &c)| c * x.powi((n - i) as i32)).sum()
    }

    #[test]
    fn eval_examples() {
        let p = quad();
        assert_eq!(eval_poly(&p, 0.0), 2.0);
        assert_eq!(eval_poly(&p, 1.0), 0.0);
        assert!((eval_poly(&p, 0.85) - 0.1725).abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let p = quad();
        let d = derivative_poly(&p);
        assert_eq!(d.coeffs(), &[2.0, -3.0]);
        assert_eq!(derivative_poly(&d).coeffs(), &[2.0]);
        assert_eq!(derivative_poly(&Polynomial::new(vec![5.0])).coeffs(), &[0.0]);
        assert!(derivative_poly(&Polynomial::zero()).is_zero());
    }

    #[test]
    fn eval012_examples() {
        let p = quad();
        assert_eq!(eval012(&p, 1.0).unwrap(), (0.0, -1.0, 2.0));
        assert_eq!(eval012(&p, 2.0).unwrap(), (0.0, 1.0, 2.0));
        let (f, df, d2f) = eval012(&p, 1.3).unwrap();
        assert!((f + 0.21).abs() < 1e-15);
        assert!((df + 0.4).abs() < 1e-15);
        assert_eq!(d2f, 2.0);
    }

    #[test]
    fn eval012_reports_overflowing_component() {
        let p = Polynomial::new(vec![1.0, 0.0, 0.0, 0.0]);
        match eval012(&p, 1e120) {
            Err(NumericError::Evaluation { component, .. }) => {
                assert_eq!(component, Component::Value)
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = FnTriple::new(|x| x, |_| 1.0, |_| f64::INFINITY);
        match g.eval012(0.0) {
            Err(NumericError::Evaluation { component, .. }) => {
                assert_eq!(component, Component::SecondDerivative)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_and_display() {
        let p: Polynomial = "1,-3,2".parse().unwrap();
        assert_eq!(p, quad());
        assert_eq!(p.to_string(), "1,-3,2");
        assert_eq!(" 0, 0, 1.5 ".parse::<Polynomial>().unwrap().coeffs(), &[1.5]);
        assert!("".parse::<Polynomial>().is_err());
        assert!("1,,2".parse::<Polynomial>().is_err());
        assert!("1,x".parse::<Polynomial>().is_err());
        assert!("1,inf".parse::<Polynomial>().is_err());
    }

    #[test]
    fn from_roots_builds_products() {
        let p = Polynomial::from_roots(&[1.0, 1.0, 3.0]);
        assert_eq!(p.coeffs(), &[1.0, -5.0, 7.0, -3.0]);
        assert_eq!(Polynomial::from_roots(&[1.0, 2.0]), quad());
    }

    #[test]
    fn derivs_match_derivative_polynomials() {
        let p = Polynomial::new(vec![0.5, -2.0, 3.0, 1.0, -4.0]);
        let d1 = p.derivative();
        let d2 = d1.derivative();
        for &x in &[-1.7, -0.3, 0.0, 0.4, 2.2] {
            let d = p.derivs(x);
            assert!((d.f - p.eval(x)).abs() < 1e-12);
            assert!((d.df - d1.eval(x)).abs() < 1e-12);
            assert!((d.d2f - d2.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_of_quadratic_is_twice_leading() {
        for &a in &[1.0, -2.5, 7.0] {
            let p = Polynomial::new(vec![a, 0.3, -1.1]);
            let dd = p.derivative().derivative();
            assert_eq!(dd.degree(), 0);
            assert_eq!(dd.coeffs()[0], 2.0 * a);
        }
    }

    fn poly_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-5.0f64..5.0, 1..=max_len)
    }

    proptest! {
        #[test]
        fn horner_matches_naive(coeffs in poly_strategy(7), xs in prop::collection::vec(-2.0f64..2.0, 100)) {
            let p = Polynomial::new(coeffs);
            for x in xs {
                prop_assert!((p.eval(x) - naive(&p, x)).abs() <= 1e-12);
            }
        }

        // Within 8 ulp of the evaluation's condition scale sum |c_i x^i|.
        #[test]
        fn horner_within_scaled_ulps(coeffs in poly_strategy(9), x in -10.0f64..10.0) {
            let p = Polynomial::new(coeffs);
            let n = p.degree();
            let scale: f64 = p.coeffs().iter().enumerate()
                .map(|(i, c)| (c * x.powi((n - i) as i32)).abs()).sum();
            let tol = 8.0 * f64::EPSILON * scale * (n as f64 + 1.0);
            prop_assert!((p.eval(x) - naive(&p, x)).abs() <= tol);
        }

        #[test]
        fn derivative_lowers_degree(coeffs in poly_strategy(8)) {
            let p = Polynomial::new(coeffs);
            let d = p.derivative();
            if p.degree() == 0 {
                prop_assert!(d.is_zero());
            } else {
                prop_assert_eq!(d.degree(), p.degree() - 1);
            }
        }
    }
}
