//! Number formatting for CSV output.

/// Formats `v` with `sig` significant digits, like C's `%.{sig}g`.
pub(crate) fn sig(v: f64, sig: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", sig.saturating_sub(1), v);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
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
    use super::sig;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig(0.0, 12), "0");
        assert_eq!(sig(1.0, 12), "1");
        assert_eq!(sig(-0.13002791751898066, 12), "-0.130027917519");
        assert_eq!(sig(0.8f64.powi(40), 12), "0.000132922799578");
        assert_eq!(sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(sig(999999999999.7, 12), "1e12");
    }
}
