//! Derivatives and curvature of the transformed curve `g(t) = f(t^(1/q))`,
//! asymptotic error constants, and the predicates that decide whether a
//! given exponent `q` converges at least as fast as Newton's method.
//!
//! All comparisons are closed (`<=`) with no epsilon slack. The boundary
//! exponents therefore come out as exact equalities only because both sides
//! of each inequality are built from the same factored subexpressions; keep
//! it that way when touching the formulas.

use serde::{Serialize, Serializer};

use crate::error::{NumericError, Result};
use crate::funcmodel::{Derivs, DifferentiableFunction};
use crate::power::real_pow;

/// Below this `|f''|` (and the convexity sign value) counts as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Everything the transformed-curve formulas share at one point.
#[derive(Debug, Clone, Copy)]
struct Transformed {
    d: Derivs,
    /// `f'' + (1-q) f'/x`
    numer: f64,
    /// `(q x^(q-1))^2 (1 + (f'/(q x^(q-1)))^2)^(3/2)`
    denom: f64,
}

impl Transformed {
    fn at<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<Self> {
        let d = func.eval012(x)?;
        let slope = slope(x, q)?;
        let numer = if q == 1.0 { d.d2f } else { d.d2f + (1.0 - q) * d.df / x };
        let ratio = d.df / slope;
        let denom = slope * slope * (1.0 + ratio * ratio).powf(1.5);
        Ok(Transformed { d, numer, denom })
    }

    fn curvature(&self) -> f64 {
        self.numer / self.denom
    }

    /// Right side of the curvature bound: `|f''| / denom`.
    fn curvature_bound(&self) -> f64 {
        self.d.d2f.abs() / self.denom
    }

    fn newton_curvature_scale(&self) -> f64 {
        (1.0 + self.d.df * self.d.df).powf(1.5)
    }
}

fn check_q(q: f64) -> Result<()> {
    if q == 0.0 || !q.is_finite() {
        return Err(NumericError::InvalidParameter(format!("q must be finite and nonzero, got {q}")));
    }
    Ok(())
}

/// `q x^(q-1)`.
fn slope(x: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if x == 0.0 && q != 1.0 {
        return Err(NumericError::Domain(format!("x^(q-1) at x=0 with q={q}")));
    }
    let s = q * real_pow(x, q - 1.0)?;
    if s == 0.0 || !s.is_finite() {
        return Err(NumericError::DivisionDegenerate { x, q });
    }
    Ok(s)
}

/// `g'(x^q) = f'(x) / (q x^(q-1))`
pub fn g_prime<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<f64> {
    let s = slope(x, q)?;
    Ok(func.eval012(x)?.df / s)
}

/// `g''(x^q) = [x f''(x) + (1-q) f'(x)] / (q^2 x^(2q-1))`
pub fn g_second<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<f64> {
    slope(x, q)?;
    let d = func.eval012(x)?;
    if q == 1.0 {
        return Ok(d.d2f);
    }
    let denom = q * q * real_pow(x, 2.0 * q - 1.0)?;
    if denom == 0.0 || !denom.is_finite() {
        return Err(NumericError::DivisionDegenerate { x, q });
    }
    Ok((x * d.d2f + (1.0 - q) * d.df) / denom)
}

/// Signed curvature `f'' / (1 + f'^2)^(3/2)`.
pub fn curvature_f<F: DifferentiableFunction + ?Sized>(func: &F, x: f64) -> Result<f64> {
    let d = func.eval012(x)?;
    Ok(d.d2f / (1.0 + d.df * d.df).powf(1.5))
}

/// Signed curvature of `g` at `t = x^q`.
pub fn curvature_g<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<f64> {
    Ok(Transformed::at(func, x, q)?.curvature())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvaturePair {
    pub mu_f: f64,
    pub mu_g: f64,
    pub q: f64,
}

pub fn curvature_pair<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<CurvaturePair> {
    Ok(CurvaturePair { mu_f: curvature_f(func, x)?, mu_g: curvature_g(func, x, q)?, q })
}

fn simple_root<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64) -> Result<Derivs> {
    if alpha == 0.0 {
        return Err(NumericError::ZeroRoot);
    }
    let d = func.eval012(alpha)?;
    if d.df == 0.0 {
        return Err(NumericError::NotSimpleRoot { alpha });
    }
    Ok(d)
}

/// Like [`simple_root`] but also requires `f''(alpha) != 0`.
fn curved_simple_root<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64) -> Result<Derivs> {
    let d = simple_root(func, alpha)?;
    if d.d2f.abs() <= DEGENERACY_THRESHOLD {
        return Err(NumericError::Inapplicable("f''(alpha) = 0"));
    }
    Ok(d)
}

/// Newton's quadratic constant `(1/2) f''(a)/f'(a)`.
pub fn newton_constant<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64) -> Result<f64> {
    let d = func.eval012(alpha)?;
    if d.df == 0.0 {
        return Err(NumericError::NotSimpleRoot { alpha });
    }
    Ok(0.5 * d.d2f / d.df)
}

/// Quadratic constant of the extended method, `(1/2)[f''(a)/f'(a) + (1-q)/a]`.
pub fn binomial_constant<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    let d = simple_root(func, alpha)?;
    Ok(0.5 * (d.d2f / d.df + (1.0 - q) / alpha))
}

/// Linear rate `1 - 1/m` at a root of multiplicity `m >= 2`.
pub fn linear_rate(multiplicity: u32) -> Result<f64> {
    if multiplicity < 2 {
        return Err(NumericError::InvalidParameter(format!("multiplicity must be >= 2, got {multiplicity}")));
    }
    Ok(1.0 - 1.0 / multiplicity as f64)
}

/// Limit of `(x^q - a^q) / (x^r - a^r)` as `x -> a`: `(q/r) a^(q-r)`.
pub fn lemma31_ratio(q: f64, r: f64, alpha: f64) -> Result<f64> {
    check_q(q)?;
    check_q(r)?;
    Ok(q / r * real_pow(alpha, q - r)?)
}

/// `0 <= (f'(a)/f''(a)) ((q-1)/a) <= 2`.
pub fn theorem41_predicate<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<bool> {
    check_q(q)?;
    let d = curved_simple_root(func, alpha)?;
    let v = d.df / d.d2f * ((q - 1.0) / alpha);
    Ok((0.0..=2.0).contains(&v))
}

/// Closed interval of `q` accepted by [`theorem41_predicate`]: endpoints
/// `1` and `1 + 2 a f''(a)/f'(a)`, ascending.
pub fn admissible_q_interval<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64) -> Result<(f64, f64)> {
    let d = curved_simple_root(func, alpha)?;
    let c = d.df / (d.d2f * alpha);
    let other = 1.0 + 2.0 / c;
    Ok(if other < 1.0 { (other, 1.0) } else { (1.0, other) })
}

/// With `f''(a) = 0` every `q != 1` has `|mu(a)| = 0 <= |mu_q(a^q)|`.
pub fn theorem42_check<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<bool> {
    check_q(q)?;
    if q == 1.0 {
        return Err(NumericError::InvalidParameter("requires q != 1".into()));
    }
    let d = simple_root(func, alpha)?;
    if d.d2f.abs() > DEGENERACY_THRESHOLD {
        return Err(NumericError::Inapplicable("f''(alpha) != 0"));
    }
    Ok(curvature_f(func, alpha)?.abs() <= curvature_g(func, alpha, q)?.abs())
}

/// Whether `g''(x^q)` and `f''(x)` share sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    Same,
    Opposite,
    Degenerate,
}

impl std::fmt::Display for Convexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Convexity::Same => "same",
            Convexity::Opposite => "opposite",
            Convexity::Degenerate => "degenerate",
        })
    }
}

/// `1 + (f'(x)/f''(x)) ((1-q)/x)`
pub fn lemma43_value<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if x == 0.0 {
        return Err(NumericError::ZeroRoot);
    }
    let d = func.eval012(x)?;
    if d.d2f.abs() <= DEGENERACY_THRESHOLD {
        return Err(NumericError::Inapplicable("f''(x) = 0"));
    }
    Ok(1.0 + d.df / d.d2f * ((1.0 - q) / x))
}

pub fn lemma43_sign<F: DifferentiableFunction + ?Sized>(func: &F, x: f64, q: f64) -> Result<Convexity> {
    let v = lemma43_value(func, x, q)?;
    Ok(if v > DEGENERACY_THRESHOLD {
        Convexity::Same
    } else if v < -DEGENERACY_THRESHOLD {
        Convexity::Opposite
    } else {
        Convexity::Degenerate
    })
}

/// `|g''(a^q)| <= |f''(a)| / (q a^(q-1))^2`.
pub fn theorem45_predicate<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<bool> {
    let d = curved_simple_root(func, alpha)?;
    let s = slope(alpha, q)?;
    Ok(g_second(func, alpha, q)?.abs() <= d.d2f.abs() / (s * s))
}

/// `|mu_q(a^q)| <= |f''(a)| / [(q a^(q-1))^2 (1 + (f'(a)/(q a^(q-1)))^2)^(3/2)]`.
pub fn theorem47_predicate<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<bool> {
    curved_simple_root(func, alpha)?;
    let t = Transformed::at(func, alpha, q)?;
    Ok(t.curvature().abs() <= t.curvature_bound())
}

/// Both `|mu_q(a^q)| <= |mu(a)|` and
/// `(q a^(q-1))^2 (1 + (f'(a)/(q a^(q-1)))^2)^(3/2) <= (1 + f'(a)^2)^(3/2)`.
/// Sufficient for [`theorem41_predicate`], not necessary.
pub fn theorem48_predicate<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<bool> {
    curved_simple_root(func, alpha)?;
    let t = Transformed::at(func, alpha, q)?;
    let scale = t.newton_curvature_scale();
    let mu = t.d.d2f / scale;
    Ok(t.curvature().abs() <= mu.abs() && t.denom <= scale)
}

/// Columns of the curvature comparison tables at one `(alpha, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureColumns {
    pub mu_q: f64,
    pub bound: f64,
    pub mu_alpha: f64,
    pub lemma43_abs: f64,
    pub scale_ratio: f64,
}

pub fn curvature_columns<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<CurvatureColumns> {
    let t = Transformed::at(func, alpha, q)?;
    let scale = t.newton_curvature_scale();
    Ok(CurvatureColumns {
        mu_q: t.curvature().abs(),
        bound: t.curvature_bound(),
        mu_alpha: (t.d.d2f / scale).abs(),
        lemma43_abs: lemma43_value(func, alpha, q)?.abs(),
        scale_ratio: t.denom / scale,
    })
}

/// Every comparison verdict at one root and exponent.
///
/// Predicates that need `f''(a) != 0` are `None` when it vanishes; the
/// zero-curvature branch is reported through `t42_applicable` / `t42`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub root: f64,
    pub q: f64,
    pub t41: Option<bool>,
    pub t42_applicable: bool,
    pub t42: Option<bool>,
    pub convexity: Option<Convexity>,
    pub lemma43_value: Option<f64>,
    pub t45: Option<bool>,
    pub t47: Option<bool>,
    pub t48: Option<bool>,
    pub q_interval: Option<(f64, f64)>,
    pub curvatures: CurvaturePair,
    pub newton_constant: f64,
    pub binomial_constant: f64,
}

impl ComparisonReport {
    /// The three equivalent forms agree, and `t48` implies `t41`.
    pub fn is_consistent(&self) -> bool {
        match (self.t41, self.t45, self.t47, self.t48) {
            (Some(a), Some(b), Some(c), Some(d)) => a == b && a == c && (!d || a),
            (None, None, None, None) => true,
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Serialize)]
struct FlatReport {
    root: f64,
    q: f64,
    t41: Option<bool>,
    t42_applicable: bool,
    t42: Option<bool>,
    convexity: Option<Convexity>,
    lemma43_value: Option<f64>,
    t45: Option<bool>,
    t47: Option<bool>,
    t48: Option<bool>,
    q_interval: Option<[f64; 2]>,
    mu_f: f64,
    mu_g: f64,
    newton_constant: f64,
    binomial_constant: f64,
}

impl Serialize for ComparisonReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FlatReport {
            root: self.root,
            q: self.q,
            t41: self.t41,
            t42_applicable: self.t42_applicable,
            t42: self.t42,
            convexity: self.convexity,
            lemma43_value: self.lemma43_value,
            t45: self.t45,
            t47: self.t47,
            t48: self.t48,
            q_interval: self.q_interval.map(|(a, b)| [a, b]),
            mu_f: self.curvatures.mu_f,
            mu_g: self.curvatures.mu_g,
            newton_constant: self.newton_constant,
            binomial_constant: self.binomial_constant,
        }
        .serialize(serializer)
    }
}

/// Fills a [`ComparisonReport`]. Fails only when `alpha = 0`, `f'(alpha) = 0`
/// or the transformed curve is undefined at `alpha`.
pub fn comparison_report<F: DifferentiableFunction + ?Sized>(func: &F, alpha: f64, q: f64) -> Result<ComparisonReport> {
    check_q(q)?;
    let d = simple_root(func, alpha)?;
    let curvatures = curvature_pair(func, alpha, q)?;
    let curved = d.d2f.abs() > DEGENERACY_THRESHOLD;
    let verdict = |r: Result<bool>| if curved { r.ok() } else { None };
    Ok(ComparisonReport {
        root: alpha,
        q,
        t41: verdict(theorem41_predicate(func, alpha, q)),
        t42_applicable: !curved,
        t42: if !curved && q != 1.0 { theorem42_check(func, alpha, q).ok() } else { None },
        convexity: if curved { lemma43_sign(func, alpha, q).ok() } else { None },
        lemma43_value: if curved { lemma43_value(func, alpha, q).ok() } else { None },
        t45: verdict(theorem45_predicate(func, alpha, q)),
        t47: verdict(theorem47_predicate(func, alpha, q)),
        t48: verdict(theorem48_predicate(func, alpha, q)),
        q_interval: if curved { admissible_q_interval(func, alpha).ok() } else { None },
        curvatures,
        newton_constant: newton_constant(func, alpha)?,
        binomial_constant: binomial_constant(func, alpha, q)?,
    })
}
