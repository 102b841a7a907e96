//! Text formatting shared by the CSV writers.

/// Significant digits written for every number in CSV output.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` rounded to [`SIG_DIGITS`] significant digits, positional for
/// moderate magnitudes and scientific otherwise, without trailing zeros.
///
/// ```
/// use coexist::format::sig;
/// assert_eq!(sig(3.459431618637297), "3.45943161864");
/// assert_eq!(sig(1e-9), "1e-9");
/// assert_eq!(sig(-0.0), "0");
/// ```
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let rounded: f64 = sci.parse().expect("round trip");
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{rounded:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// [`sig`] for an optional value; `None` becomes an empty field.
pub fn sig_opt(x: Option<f64>) -> String {
    x.map(sig).unwrap_or_default()
}
