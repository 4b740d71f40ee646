//! Locale-independent number formatting.

/// Seventeen significant digits: enough to round-trip any `f64` bit-exactly.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// `%g`-style formatting with `digits` significant digits and trailing
/// zeros removed.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for &v in &[0.1, 1.0 / 3.0, -2.220446049250313e-16, 6.195386388, 1e300, 5e-324] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt17(f64::NAN), "NaN");
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(-3.0, 12), "-3");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(0.1725, 12), "0.1725");
        assert_eq!(fmt_sig(0.9826923076923078, 12), "0.982692307692");
        assert_eq!(fmt_sig(6.661338147750939e-15, 12), "6.66133814775e-15");
        assert_eq!(fmt_sig(44858040.14, 12), "44858040.14");
        assert_eq!(fmt_sig(1.5e13, 12), "1.5e13");
        assert_eq!(fmt_sig(0.00012, 12), "0.00012");
        assert_eq!(fmt_sig(f64::INFINITY, 12), "inf");
    }
}
