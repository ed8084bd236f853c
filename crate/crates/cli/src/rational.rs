use std::str::FromStr;

use hardybox::boxspace::Rational;
use num_bigint::BigInt;
use num_traits::Zero;

/// Parses `p/q` or `p`.
///
/// In strict mode the text must already be canonical: reduced, positive
/// denominator, no `/1`, no sign other than a leading `-`, no whitespace.
pub fn parse_rational(text: &str, strict: bool) -> Result<Rational, String> {
    let trimmed = if strict { text } else { text.trim() };
    let (num, den) = match trimmed.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (trimmed, None),
    };
    let int = |part: &str| {
        let part = if strict { part } else { part.trim() };
        BigInt::from_str(part).map_err(|_| format!("{text:?} is not a rational of the form p/q"))
    };
    let num = int(num)?;
    let den = match den {
        Some(q) => int(q)?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(format!("{text:?} has a zero denominator"));
    }
    let value = Rational::new(num, den);
    if strict && value.to_string() != text {
        return Err(format!(
            "{text:?} is not in canonical form (expected {value:?})",
            value = value.to_string()
        ));
    }
    Ok(value)
}
