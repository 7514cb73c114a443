//! Plain-text polynomial form: `"c0 c1 c2 ..."` with each coefficient
//! written as `re+imi`.

use std::fmt;
use std::str::FromStr;

use super::{Coeff, CPoly, Poly};
use crate::{Error, Result, C64};

/// `re+imi` (or `re-imi`), round-tripping every finite `f64` exactly.
pub fn format_c64(c: C64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", c.re, sign, c.im.abs())
}

/// Parses `re+imi`, `re-imi`, a bare real `re`, or a bare imaginary `imi`.
pub fn parse_c64(s: &str) -> Result<C64> {
    let bad = |why: &str| Error::parse(s, why);
    let t = s.trim();
    if t.is_empty() {
        return Err(bad("empty coefficient"));
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad("not a number"));
    };
    // Split at the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "+" | "" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad("bad real part"))?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad("bad imaginary part"))?;
    Ok(C64::new(re, im))
}

impl<T: Coeff> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0+0i");
        }
        let parts: Vec<String> = self.coeffs().iter().map(|c| format_c64(c.to_c64())).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for CPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(parse_c64).collect::<Result<Vec<_>>>().map(CPoly::new)
    }
}
