//! Locale-independent number formatting for reports.

use spinxfer_core::Complex64;

fn nonfinite(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Drops the sign of a value that rounds to zero.
fn unsign_zero(s: String) -> String {
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

/// Six decimal places, used for fidelities and probabilities.
pub fn fixed6(x: f64) -> String {
    if !x.is_finite() {
        return nonfinite(x);
    }
    unsign_zero(format!("{x:.6}"))
}

/// Nine significant digits. Positional notation for exponents in [-4, 9),
/// scientific otherwise.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return nonfinite(x);
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        unsign_zero(format!("{x:.decimals$}"))
    } else {
        sci
    }
}

/// `re+imi` with both parts at nine significant digits.
pub fn complex9(z: Complex64) -> String {
    let im = sig9(z.im);
    match im.strip_prefix('-') {
        Some(mag) => format!("{}-{mag}i", sig9(z.re)),
        None => format!("{}+{im}i", sig9(z.re)),
    }
}
