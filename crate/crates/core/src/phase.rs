use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::Error;

/// Relative phase of the rotated component.
///
/// Phases given as rational multiples of pi keep the exact fraction so that
/// interference factors `1 + exp(i(phi + n pi/2))` vanish exactly instead of
/// to within rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    radians: f64,
    pi_fraction: Option<(i64, u64)>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn quarter_turn(k: i128) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Phase {
    pub const ZERO: Phase = Phase { radians: 0.0, pi_fraction: Some((0, 1)) };

    pub fn from_radians(radians: f64) -> Self {
        if radians == 0.0 {
            return Phase::ZERO;
        }
        Phase { radians, pi_fraction: None }
    }

    /// `num/den * pi`, kept exact.
    pub fn pi_fraction(num: i64, den: u64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let g = gcd(num.unsigned_abs(), den).max(1);
        let (num, den) = (num / g as i64, den / g);
        Phase { radians: PI * num as f64 / den as f64, pi_fraction: Some((num, den)) }
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn as_pi_fraction(&self) -> Option<(i64, u64)> {
        self.pi_fraction
    }

    /// `exp(i(phi + n pi/2))`.
    pub fn rotated_cis(&self, n: usize) -> Complex64 {
        match self.pi_fraction {
            Some((p, q)) => {
                // angle = (2p + n q) / (2q) * pi, reduced modulo 2 pi
                let q = q as i128;
                let t = (2 * p as i128 + n as i128 * q).rem_euclid(4 * q);
                if t % q == 0 {
                    quarter_turn(t / q)
                } else {
                    let angle = PI * t as f64 / (2 * q) as f64;
                    Complex64::new(angle.cos(), angle.sin())
                }
            }
            None => Complex64::new(self.radians.cos(), self.radians.sin()) * quarter_turn(n as i128),
        }
    }

    /// Interference factor `1 + exp(i(phi + n pi/2))` of the n-th Fock amplitude.
    pub fn interference(&self, n: usize) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.rotated_cis(n)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_fraction {
            Some((0, _)) => f.write_str("0"),
            Some((p, q)) => {
                let sign = if p < 0 { "-" } else { "" };
                let a = p.unsigned_abs();
                match (a, q) {
                    (1, 1) => write!(f, "{sign}pi"),
                    (1, q) => write!(f, "{sign}pi/{q}"),
                    (a, 1) => write!(f, "{sign}{a}pi"),
                    (a, q) => write!(f, "{sign}{a}pi/{q}"),
                }
            }
            None => write!(f, "{}", self.radians),
        }
    }
}

/// Accepts plain reals (`0.25`) and pi fractions (`pi`, `-pi/4`, `3pi/2`, `3*pi/2`).
impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = Error::InvalidParameter("phase literal must be a real or a pi fraction like 3pi/2");
        let s = s.trim();
        let Some(pos) = s.find("pi") else {
            let v: f64 = s.parse().map_err(|_| bad.clone())?;
            if !v.is_finite() {
                return Err(bad);
            }
            return Ok(Phase::from_radians(v));
        };
        let (head, tail) = (s[..pos].trim(), s[pos + 2..].trim());
        let (negative, head) = match head.strip_prefix('-') {
            Some(h) => (true, h.trim()),
            None => (false, head.strip_prefix('+').unwrap_or(head).trim()),
        };
        let head = head.strip_suffix('*').unwrap_or(head).trim();
        let num: i64 = if head.is_empty() { 1 } else { head.parse().map_err(|_| bad.clone())? };
        let den: u64 = if tail.is_empty() {
            1
        } else {
            let d = tail.strip_prefix('/').ok_or_else(|| bad.clone())?;
            d.trim().parse().map_err(|_| bad.clone())?
        };
        if den == 0 {
            return Err(bad);
        }
        Ok(Phase::pi_fraction(if negative { -num } else { num }, den))
    }
}
