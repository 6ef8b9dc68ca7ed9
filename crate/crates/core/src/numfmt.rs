//! Number formatting shared by the CSV writer, the CLI and the cheat-sheet
//! renderer.

/// Formats `v` with at most `digits` significant digits, like C's `%g`:
/// fixed notation for moderate exponents, scientific otherwise, trailing
/// zeros removed.
pub fn sig(v: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
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

/// Shortest decimal text that parses back to exactly `v`.
pub fn shortest(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    v.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_matches_printf_g() {
        assert_eq!(sig(0.0077, 6), "0.0077");
        assert_eq!(sig(0.4, 6), "0.4");
        assert_eq!(sig(1.0 / 3.0, 6), "0.333333");
        assert_eq!(sig(100000.0, 6), "100000");
        assert_eq!(sig(1e6, 6), "1e+06");
        assert_eq!(sig(1.5e-5, 6), "1.5e-05");
        assert_eq!(sig(-0.25, 6), "-0.25");
        assert_eq!(sig(60000.0, 6), "60000");
        assert_eq!(sig(2.0 / 3.0, 3), "0.667");
    }

    #[test]
    fn shortest_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5] {
            assert_eq!(shortest(v).parse::<f64>().unwrap(), v);
        }
    }
}
