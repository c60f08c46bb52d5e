//! printf-style `%g` number formatting shared by the CSV writer and the CLI.

/// Formats `value` like C's `%.{digits}g`, or `%#.{digits}g` when
/// `keep_trailing_zeros` is set: fixed notation when the decimal exponent lies in
/// `[-4, digits)`, scientific otherwise, exponent written with a sign and at
/// least two digits.
pub fn format_significant(value: f64, digits: usize, keep_trailing_zeros: bool) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    if value == 0.0 {
        let sign = if value.is_sign_negative() { "-" } else { "" };
        return if keep_trailing_zeros && digits > 1 {
            format!("{sign}0.{}", "0".repeat(digits - 1))
        } else {
            format!("{sign}0")
        };
    }

    // Exponent after rounding to `digits` significant digits.
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("LowerExp always has an exponent");
    let exp: i32 = exp.parse().expect("LowerExp exponent is an integer");

    if exp < -4 || exp >= digits as i32 {
        let mantissa = if keep_trailing_zeros { mantissa.to_string() } else { trim_zeros(mantissa) };
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, value);
        if keep_trailing_zeros {
            if decimals == 0 {
                format!("{fixed}.")
            } else {
                fixed
            }
        } else {
            trim_zeros(&fixed)
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
