//! Angles given as radians or as rational multiples of pi.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};

/// Parses `0.5`, `pi`, `pi/4`, `3pi/8` or `3*pi/8`. `π` is accepted for `pi`.
///
/// Fractions are reduced first, so `2pi/4` is the same double as `pi/2`, and
/// denominators with a library constant use it directly.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s
        .to_lowercase()
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let bad = || format!("`{s}` is neither a number nor a rational multiple of pi");
    let Some(at) = t.find("pi") else {
        return match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(bad()),
        };
    };
    let head = &t[..at];
    let head = head.strip_suffix('*').unwrap_or(head);
    let num: i64 = match head {
        "" => 1,
        "-" => -1,
        h => h.parse().map_err(|_| bad())?,
    };
    let den: i64 = match &t[at + 2..] {
        "" => 1,
        tail => tail
            .strip_prefix('/')
            .and_then(|d| d.parse().ok())
            .ok_or_else(bad)?,
    };
    if den <= 0 {
        return Err(format!("`{s}`: denominator must be a positive integer"));
    }
    Ok(multiple_of_pi(num, den))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn multiple_of_pi(num: i64, den: i64) -> f64 {
    let g = gcd(num.unsigned_abs(), den as u64) as i64;
    let (n, d) = (num / g, den / g);
    let unit = match d {
        1 => PI,
        2 => FRAC_PI_2,
        3 => FRAC_PI_3,
        4 => FRAC_PI_4,
        6 => FRAC_PI_6,
        8 => FRAC_PI_8,
        _ => return PI * n as f64 / d as f64,
    };
    unit * n as f64
}
