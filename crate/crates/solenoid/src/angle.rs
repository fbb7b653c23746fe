//! Extension parameters: angles on the circle (−π/2, π/2] with the two
//! ends identified.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};

/// A point of the circle (−π/2, π/2] whose ends are identified, stored
/// as its representative in (−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    /// The identified endpoint ±π/2.
    pub const HALF_PI: Angle = Angle(FRAC_PI_2);
    pub const ZERO: Angle = Angle(0.0);

    /// Reduces `radians` modulo π into (−π/2, π/2].
    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::InvalidParameter(format!("extension angle {radians} is not finite")));
        }
        let mut x = radians;
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&x) {
            x -= PI * (x / PI).round();
        }
        if x <= -FRAC_PI_2 {
            x = FRAC_PI_2;
        }
        Ok(Angle(x))
    }

    /// Parses a literal such as `0.3`, `pi/2`, `-pi/4`, `3pi/8` or `-0.5*pi`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse angle '{text}'"));
        let s: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = s.find("pi").or_else(|| s.find('π')) else {
            return Angle::new(s.parse::<f64>().map_err(|_| bad())?);
        };
        let token_len = if s[pos..].starts_with("pi") { 2 } else { 'π'.len_utf8() };
        let head = s[..pos].trim_end_matches('*');
        let tail = &s[pos + token_len..];
        let coef = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let denom = match tail {
            "" => 1.0,
            t => t.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
        };
        if denom == 0.0 {
            return Err(bad());
        }
        // Exact for the common literals: PI/2 and PI/4 are the f64 constants.
        Angle::new(coef * PI / denom)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// True at the identified endpoint ±π/2.
    pub fn is_half_pi(self) -> bool {
        self.0 == FRAC_PI_2
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn sin(self) -> f64 {
        if self.is_half_pi() {
            1.0
        } else {
            self.0.sin()
        }
    }

    pub fn cos(self) -> f64 {
        if self.is_half_pi() {
            0.0
        } else {
            self.0.cos()
        }
    }

    /// tan λ, or `None` at the endpoint.
    pub fn tan(self) -> Option<f64> {
        if self.is_half_pi() {
            None
        } else {
            Some(self.0.tan())
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn endpoints_are_identified() {
        assert!(Angle::new(-FRAC_PI_2).unwrap().is_half_pi());
        assert!(Angle::new(FRAC_PI_2).unwrap().is_half_pi());
        assert_eq!(Angle::HALF_PI.cos(), 0.0);
        assert_eq!(Angle::HALF_PI.tan(), None);
    }

    #[test]
    fn reduction_modulo_pi() {
        let a = Angle::new(0.3 + PI).unwrap();
        assert!((a.radians() - 0.3).abs() < 1e-15);
        let b = Angle::new(-2.0).unwrap();
        assert!((b.radians() - (PI - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn literal_tokens() {
        assert!(Angle::parse("pi/2").unwrap().is_half_pi());
        assert!(Angle::parse("-pi/2").unwrap().is_half_pi());
        assert_eq!(Angle::parse("-pi/4").unwrap().radians(), -FRAC_PI_4);
        assert_eq!(Angle::parse("0.25").unwrap().radians(), 0.25);
        assert!((Angle::parse("3pi/8").unwrap().radians() - 3.0 * PI / 8.0).abs() < 1e-16);
        assert!((Angle::parse("-0.1*pi").unwrap().radians() + 0.1 * PI).abs() < 1e-16);
        assert!(Angle::parse("pi/").is_err());
        assert!(Angle::parse("abc").is_err());
    }
}
