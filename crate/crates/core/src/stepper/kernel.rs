//! Single-step iteration kernels.

use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};
use crate::funcmodel::DifferentiableFunction;
use crate::power::{as_int, is_odd_integer, real_pow};

/// How `S^(1/q)` is resolved when `S` may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Always the principal positive root; `S <= 0` is a domain error.
    Principal,
    /// Signed real root for odd integer `q`, principal root otherwise.
    #[default]
    SignedOdd,
}

/// Selects one member of the iteration family: exponent `q` and the number
/// of expansion terms beyond the zeroth, `m`. Table labels count terms from
/// one, so "3 term" is `m = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    q: f64,
    m: u32,
    branch: Branch,
}

impl MethodSpec {
    pub fn new(q: f64, m: u32, branch: Branch) -> Result<Self> {
        if q == 0.0 || !q.is_finite() {
            return Err(NumericError::InvalidParameter(format!("q must be finite and nonzero, got {q}")));
        }
        if m == 0 {
            return Err(NumericError::InvalidParameter("m must be at least 1".into()));
        }
        Ok(MethodSpec { q, m, branch })
    }

    /// From the table vocabulary: `terms` counts the zeroth term too.
    pub fn from_terms(q: f64, terms: u32) -> Result<Self> {
        if terms < 2 {
            return Err(NumericError::InvalidParameter(format!("terms must be at least 2, got {terms}")));
        }
        Self::new(q, terms - 1, Branch::default())
    }

    pub fn newton() -> Self {
        MethodSpec { q: 1.0, m: 1, branch: Branch::default() }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> u32 {
        self.m + 1
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Integer `q >= 1` with `m >= q`: the truncation keeps every nonzero
    /// term, so the sum is exactly `(x - f/f')^q`.
    pub fn is_complete_expansion(&self) -> bool {
        as_int(self.q).is_some_and(|n| n >= 1 && self.m as i64 >= n as i64)
    }
}

/// `C(r, i) = r (r-1) ... (r-i+1) / i!` for real `r`.
pub fn general_binomial_coefficient(r: f64, i: u32) -> f64 {
    let mut c = 1.0;
    for j in 0..i {
        c = c * (r - j as f64) / (j + 1) as f64;
    }
    c
}

/// `f/f'` at `x` with the failure modes every kernel shares.
fn newton_correction<F: DifferentiableFunction + ?Sized>(func: &F, x: f64) -> Result<f64> {
    let d = func.eval012(x).map_err(|_| NumericError::Diverged { x })?;
    if d.df == 0.0 {
        return Err(NumericError::DerivativeVanished { x });
    }
    let c = d.f / d.df;
    if !c.is_finite() {
        return Err(NumericError::Diverged { x });
    }
    Ok(c)
}

/// `x - f(x)/f'(x)`.
pub fn newton_step<F: DifferentiableFunction + ?Sized>(func: &F, x: f64) -> Result<f64> {
    let next = x - newton_correction(func, x)?;
    if next.is_finite() {
        Ok(next)
    } else {
        Err(NumericError::Diverged { x })
    }
}

/// `|s|^(1/n)` for a positive integer `n`, exact where a dedicated routine exists.
fn abs_root_int(a: f64, n: i32) -> f64 {
    match n {
        1 => a,
        2 => a.sqrt(),
        3 => a.cbrt(),
        4 => a.sqrt().sqrt(),
        _ => a.powf(1.0 / n as f64),
    }
}

/// Real `q`-th root of `s` under a branch policy.
pub fn qth_root_with(s: f64, q: f64, branch: Branch) -> Result<f64> {
    if q == 0.0 {
        return Err(NumericError::InvalidParameter("q must be nonzero".into()));
    }
    let signed = branch == Branch::SignedOdd && is_odd_integer(q);
    if !signed && s <= 0.0 {
        return Err(NumericError::Domain(format!("no principal {q}-th root of {s}")));
    }
    let magnitude = match as_int(q) {
        Some(n) => {
            let r = abs_root_int(s.abs(), n.abs());
            if n < 0 {
                1.0 / r
            } else {
                r
            }
        }
        None => s.powf(1.0 / q),
    };
    Ok(magnitude.copysign(if signed { s } else { 1.0 }))
}

/// Real `q`-th root: signed for odd integer `q`, principal otherwise.
///
/// `sign_hint` is the previous iterate; it never changes the branch chosen.
pub fn real_qth_root(s: f64, q: f64, sign_hint: f64) -> Result<f64> {
    let _ = sign_hint;
    qth_root_with(s, q, Branch::SignedOdd)
}

/// The truncated expansion `S = sum_{i=0}^{m} C(q,i) x^(q-i) (-f/f')^i`.
///
/// Terms whose coefficient is exactly zero are skipped, so integer `q`
/// never touches the singular powers `x^(q-i)` for `i > q`.
pub fn binomial_power_sum<F: DifferentiableFunction + ?Sized>(
    func: &F,
    x: f64,
    spec: &MethodSpec,
) -> Result<f64> {
    let h = -newton_correction(func, x)?;
    power_sum_with_correction(x, h, spec)
}

fn power_sum_with_correction(x: f64, h: f64, spec: &MethodSpec) -> Result<f64> {
    let q = spec.q();
    let mut sum = 0.0;
    let mut h_pow = 1.0;
    for i in 0..=spec.m() {
        let c = general_binomial_coefficient(q, i);
        if c != 0.0 {
            sum += c * real_pow(x, q - i as f64)? * h_pow;
        }
        h_pow *= h;
    }
    Ok(sum)
}

/// One step of the binomial-expansion family.
///
/// `q = 1` is Newton's step exactly. When the expansion is complete
/// (integer `q >= 1`, `m >= q`) the sum is evaluated in its closed form
/// `(x - f/f')^q`, which avoids the cancellation of summing its terms.
pub fn binomial_newton_step<F: DifferentiableFunction + ?Sized>(
    func: &F,
    x: f64,
    spec: &MethodSpec,
) -> Result<f64> {
    let h = -newton_correction(func, x)?;
    let s = if spec.is_complete_expansion() {
        // as_int succeeded inside is_complete_expansion
        (x + h).powi(spec.q() as i32)
    } else {
        power_sum_with_correction(x, h, spec)?
    };
    if !s.is_finite() {
        return Err(NumericError::Diverged { x });
    }
    let next = qth_root_with(s, spec.q(), spec.branch())?;
    if next.is_finite() {
        Ok(next)
    } else {
        Err(NumericError::Diverged { x })
    }
}
