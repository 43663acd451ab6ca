//! Argument parsers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use webendo::families::{FamilyTag, Orientation};
use webendo::{Field, Q};

pub fn family(s: &str) -> Result<FamilyTag, String> {
    s.parse().map_err(|e: webendo::Error| e.to_string())
}

pub fn orientation(s: &str) -> Result<Orientation, String> {
    s.parse().map_err(|e: webendo::Error| e.to_string())
}

pub fn tau(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || format!("expected RE,IM, got {s:?}");
    match parts.as_slice() {
        [re, im] => {
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok([re, im])
        }
        _ => Err(bad()),
    }
}

/// An exact number: integer, "n/d" or a terminating decimal.
pub fn rational(s: &str) -> Result<Q, String> {
    let t = s.trim();
    if !t.contains('.') {
        return Q::parse_text(t).map_err(|e| e.to_string());
    }
    let bad = || format!("not a number: {t:?}");
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').ok_or_else(bad)?;
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let q = Q::new(digits, scale);
    Ok(if neg { -q } else { q })
}

/// Comma-separated exact coefficients.
pub fn rational_list(s: &str) -> Result<Vec<Q>, String> {
    let v: Vec<Q> = s.split(',').map(rational).collect::<Result<_, _>>()?;
    if v.iter().all(|c| c.is_zero()) {
        return Err(format!("coefficient list {s:?} is zero"));
    }
    Ok(v)
}

/// "NUM" or "NUM;DEN" as affine coefficient lists.
pub fn affine_map(s: &str) -> Result<(Vec<Q>, Vec<Q>), String> {
    match s.split_once(';') {
        Some((n, d)) => Ok((rational_list(n)?, rational_list(d)?)),
        None => Ok((rational_list(s)?, vec![Q::one()])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn rationals_in_every_spelling() {
        assert_eq!(rational("-3").unwrap(), q(-3, 1));
        assert_eq!(rational("6/4").unwrap(), q(3, 2));
        assert_eq!(rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(rational(".5").unwrap(), q(1, 2));
        assert!(rational("1/0").is_err());
        assert!(rational("1.2.3").is_err());
        assert!(rational("x").is_err());
    }

    #[test]
    fn affine_maps_split_on_semicolon() {
        let (n, d) = affine_map("-2,0,1").unwrap();
        assert_eq!(n, vec![q(-2, 1), q(0, 1), q(1, 1)]);
        assert_eq!(d, vec![q(1, 1)]);
        let (n, d) = affine_map("1;0,1").unwrap();
        assert_eq!((n.len(), d.len()), (1, 2));
        assert!(affine_map("0,0").is_err());
    }

    #[test]
    fn tau_and_names() {
        assert_eq!(tau("0,1").unwrap(), [0.0, 1.0]);
        assert_eq!(tau("-0.5, 0.9").unwrap(), [-0.5, 0.9]);
        assert!(tau("1").is_err());
        assert_eq!(family("conic-line").unwrap(), FamilyTag::ConicLine);
        assert!(family("quartic").is_err());
        assert_eq!(orientation("-").unwrap(), Orientation::Minus);
    }
}
