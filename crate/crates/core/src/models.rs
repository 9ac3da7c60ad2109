//! Built-in nonlinearity functions and their closed-form normalizations.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::nonlinearity::{Kind, NonlinearityFunction};
use crate::special::ln_factorial;
use crate::state::DEFAULT_HARD_CAP;
use crate::{Error, Phase, Result};

/// Laguerre values at or below this count as zeros when scanning the ion model.
pub const LAGUERRE_ZERO_GUARD: f64 = 1e-10;

/// Bargmann index of the SU(1,1) Gilmore-Perelomov states, kept as `2 kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GpParams {
    two_kappa: u32,
}

impl GpParams {
    /// `kappa` must be a positive half-integer.
    pub fn new(kappa: f64) -> Result<Self> {
        let twice = 2.0 * kappa;
        if !(twice >= 1.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::InvalidParameter("kappa must be a positive half-integer (1/2, 1, 3/2, ...)"));
        }
        Ok(GpParams { two_kappa: twice as u32 })
    }

    pub fn from_two_kappa(two_kappa: u32) -> Result<Self> {
        if two_kappa == 0 {
            return Err(Error::InvalidParameter("kappa must be a positive half-integer (1/2, 1, 3/2, ...)"));
        }
        Ok(GpParams { two_kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.two_kappa as f64 / 2.0
    }

    pub fn two_kappa(&self) -> u32 {
        self.two_kappa
    }
}

/// Lamb-Dicke parameter of the trapped-ion model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonParams {
    eta: f64,
}

impl IonParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter("eta must satisfy 0 < eta <= 1"));
        }
        Ok(IonParams { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Harmonious states, `f(n) = 1/sqrt(n)` on the unit disk.
pub fn harmonious_f() -> NonlinearityFunction {
    NonlinearityFunction::new(Kind::Harmonious, "hs".into(), 1.0, None)
}

/// SU(1,1) Gilmore-Perelomov states, `f(n) = 1/sqrt(n + 2 kappa - 1)`.
pub fn gp_su11_f(p: GpParams) -> NonlinearityFunction {
    let label = format!("gp(kappa={})", p.kappa());
    NonlinearityFunction::new(Kind::GilmorePerelomov { two_kappa: p.two_kappa }, label, 1.0, None)
}

/// Trapped-ion centre-of-mass motion, `f(n) = L^1_n(eta^2) / ((n+1) L^0_n(eta^2))`.
pub fn trapped_ion_f(p: IonParams) -> NonlinearityFunction {
    trapped_ion_f_with_cap(p, DEFAULT_HARD_CAP)
}

/// Like [`trapped_ion_f`] but scanning Laguerre values only up to `hard_cap`.
///
/// The cap is the largest `n` for which `L^0_k(eta^2)` and `L^1_k(eta^2)` stay
/// above [`LAGUERRE_ZERO_GUARD`] for every `k <= n`. Past the first zero of
/// `L^0_n` the ratio diverges and then turns negative.
pub fn trapped_ion_f_with_cap(p: IonParams, hard_cap: usize) -> NonlinearityFunction {
    let x = p.eta * p.eta;
    let l0 = laguerre_table(0, hard_cap, x);
    let l1 = laguerre_table(1, hard_cap, x);
    let mut values = Vec::with_capacity(hard_cap);
    for n in 1..=hard_cap {
        if l0[n] <= LAGUERRE_ZERO_GUARD || l1[n] <= LAGUERRE_ZERO_GUARD {
            break;
        }
        values.push(l1[n] / ((n + 1) as f64 * l0[n]));
    }
    let n_cap = values.len();
    NonlinearityFunction::new(
        Kind::Tabulated(Arc::from(values)),
        format!("ion(eta={})", p.eta),
        f64::INFINITY,
        Some(n_cap),
    )
}

/// Generalized Laguerre polynomial `L^k_n(x)` by forward three-term recurrence.
pub fn laguerre(k: usize, n: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 2..=n {
        let m = m as f64;
        let next = ((2.0 * m - 1.0 + k - x) * cur - (m - 1.0 + k) * prev) / m;
        prev = cur;
        cur = next;
    }
    cur
}

/// `L^k_0(x) ..= L^k_{n_max}(x)`.
pub fn laguerre_table(k: usize, n_max: usize, x: f64) -> Vec<f64> {
    let kf = k as f64;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max >= 1 {
        out.push(1.0 + kf - x);
    }
    for m in 2..=n_max {
        let mf = m as f64;
        let next = ((2.0 * mf - 1.0 + kf - x) * out[m - 1] - (mf - 1.0 + kf) * out[m - 2]) / mf;
        out.push(next);
    }
    out
}

fn check_unit_disk(alpha: Complex64) -> Result<f64> {
    let r = alpha.norm();
    if r >= 1.0 {
        return Err(Error::Domain { modulus: r, radius: 1.0 });
    }
    Ok(r)
}

fn ns_from_bracket(bracket: f64) -> Result<f64> {
    if !(bracket > 0.0) {
        return Err(Error::DegenerateState("superposition norm vanishes"));
    }
    Ok(bracket.powf(-0.5))
}

/// Closed-form superposition normalization `N_s` for harmonious states.
pub fn hs_closed_ns(alpha: Complex64, phi: Phase) -> Result<f64> {
    let r2 = check_unit_disk(alpha)?.powi(2);
    let phi = phi.radians();
    ns_from_bracket(1.0 + (1.0 - r2) * (phi.cos() - r2 * phi.sin()) / (1.0 + r2 * r2))
}

/// Closed-form `N_s` for Gilmore-Perelomov states:
/// `{1 + (1-|a|^2)^{2k} Re[e^{i phi} (1 - i|a|^2)^{-2k}]}^{-1/2}`.
pub fn gp_closed_ns(alpha: Complex64, phi: Phase, p: GpParams) -> Result<f64> {
    let r2 = check_unit_disk(alpha)?.powi(2);
    let two_kappa = p.two_kappa as f64;
    let tail = rotated_geometric(r2, phi, two_kappa);
    ns_from_bracket(1.0 + (1.0 - r2).powf(two_kappa) * tail)
}

/// The GP normalization in its literal closed form, with exponent `4 kappa` and a
/// `1/Gamma(2 kappa)` factor. It disagrees with the defining series for every
/// `kappa` and is kept only to document that.
pub fn gp_closed_ns_literal(alpha: Complex64, phi: Phase, p: GpParams) -> Result<f64> {
    let r2 = check_unit_disk(alpha)?.powi(2);
    let two_kappa = p.two_kappa as f64;
    let tail = rotated_geometric(r2, phi, two_kappa);
    ns_from_bracket(1.0 + (1.0 - r2).powf(2.0 * two_kappa) / libm::tgamma(two_kappa) * tail)
}

// Re[e^{i phi} (1 - i r2)^{-s}]
fn rotated_geometric(r2: f64, phi: Phase, s: f64) -> f64 {
    let base = Complex64::new(1.0, -r2);
    let rot = Complex64::new(phi.radians().cos(), phi.radians().sin());
    (rot * base.powf(-s)).re
}

/// `N_s` from its defining series: `{1 + N_f^2 sum |a|^{2n} cos(phi + n pi/2) / (n! [f(n)]!^2)}^{-1/2}`
/// with `N_f^{-2} = sum |a|^{2n} / (n! [f(n)]!^2)`, both summed over `n = 0..=n_terms`.
pub fn series_ns(alpha: Complex64, phi: Phase, f: &NonlinearityFunction, n_terms: usize) -> Result<f64> {
    let r = alpha.norm();
    if r >= f.convergence_radius() {
        return Err(Error::Domain { modulus: r, radius: f.convergence_radius() });
    }
    let logs = f.factorial_logs(n_terms)?;
    let (mut total, mut rotated) = (0.0, 0.0);
    for (n, lf) in logs.iter().enumerate() {
        let w = if n == 0 {
            1.0
        } else if r == 0.0 {
            0.0
        } else {
            (2.0 * n as f64 * r.ln() - ln_factorial(n) - 2.0 * lf).exp()
        };
        total += w;
        rotated += w * phi.rotated_cis(n).re;
    }
    ns_from_bracket(1.0 + rotated / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn harmonious_values() {
        let f = harmonious_f();
        assert_eq!(f.eval(4).unwrap(), 0.5);
        assert_eq!(f.eval(1).unwrap(), 1.0);
        let fact = crate::f_factorial_log(&f, 3).unwrap().exp();
        assert!((fact - 0.408248).abs() < 1e-6);
        assert_eq!(f.convergence_radius(), 1.0);
    }

    #[test]
    fn gp_values() {
        let f = gp_su11_f(GpParams::new(1.5).unwrap());
        assert_eq!(f.eval(2).unwrap(), 0.5);
        let half = gp_su11_f(GpParams::new(0.5).unwrap());
        let hs = harmonious_f();
        for n in 1..200 {
            assert_eq!(half.eval(n).unwrap(), hs.eval(n).unwrap());
        }
    }

    #[test]
    fn gp_factorial_matches_gamma_identity() {
        // n! [f(n)]!^2 = n! Gamma(3) / Gamma(n + 3) = 2 / ((n+1)(n+2)) for kappa = 3/2
        let f = gp_su11_f(GpParams::new(1.5).unwrap());
        for n in 0..60usize {
            let lhs = (ln_factorial(n) + 2.0 * crate::f_factorial_log(&f, n).unwrap()).exp();
            let rhs = 2.0 / ((n + 1) as f64 * (n + 2) as f64);
            assert!((lhs / rhs - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn gp_params_validation() {
        assert!(GpParams::new(0.0).is_err());
        assert!(GpParams::new(0.75).is_err());
        assert!(GpParams::new(-1.0).is_err());
        assert!(GpParams::new(f64::NAN).is_err());
        assert_eq!(GpParams::new(2.0).unwrap().two_kappa(), 4);
        assert!(IonParams::new(0.0).is_err());
        assert!(IonParams::new(1.5).is_err());
    }

    #[test]
    fn laguerre_values() {
        assert!((laguerre(0, 2, 0.04) - 0.9208).abs() < 1e-15);
        assert_eq!(laguerre(1, 0, 3.7), 1.0);
        assert!((laguerre(1, 3, 0.0) - 4.0).abs() < 1e-15);
        // L^2_3(x) = (-x^3 + 15x^2 - 60x + 60) / 6
        let x = 0.7f64;
        let explicit = (-x.powi(3) + 15.0 * x * x - 60.0 * x + 60.0) / 6.0;
        assert!((laguerre(2, 3, x) - explicit).abs() < 1e-13);
        let table = laguerre_table(2, 3, x);
        assert_eq!(table[3], laguerre(2, 3, x));
    }

    #[test]
    fn laguerre_zero_argument_is_binomial() {
        for k in 0..4usize {
            let mut binom = 1.0f64;
            for n in 0..30usize {
                if n > 0 {
                    binom *= (n + k) as f64 / n as f64;
                }
                assert!((laguerre(k, n, 0.0) / binom - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ion_first_value_and_cap() {
        let f = trapped_ion_f(IonParams::new(0.2).unwrap());
        assert!((f.eval(1).unwrap() - 1.96 / 1.92).abs() < 1e-12);
        assert!((f.eval(1).unwrap() - 1.020833).abs() < 1e-6);
        // L^0_n(0.04) changes sign between n = 35 and n = 36
        assert_eq!(f.n_cap(), Some(35));
        for n in 1..=35 {
            let v = f.eval(n).unwrap();
            assert!(v.is_finite() && v > 0.0);
        }
        assert!(f.eval(36).is_err());
    }

    #[test]
    fn ion_small_eta_limit() {
        let f = trapped_ion_f(IonParams::new(1e-6).unwrap());
        for n in 1..=50 {
            assert!((f.eval(n).unwrap() - 1.0).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn hs_closed_ns_values() {
        let v = hs_closed_ns(c(0.5), Phase::ZERO).unwrap();
        assert!((v - 0.76565).abs() < 1e-5);
        let v = hs_closed_ns(c(1e-9), Phase::ZERO).unwrap();
        assert!((v - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        let v = hs_closed_ns(c(0.5), Phase::pi_fraction(1, 2)).unwrap();
        let expected = (1.0f64 - 0.75 * 0.25 / 1.0625).powf(-0.5);
        assert!((v - expected).abs() < 1e-14);
        assert!(matches!(hs_closed_ns(c(1.0), Phase::ZERO), Err(Error::Domain { .. })));
        assert!(matches!(hs_closed_ns(c(0.0), Phase::pi_fraction(1, 1)), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn gp_half_is_hs() {
        let p = GpParams::new(0.5).unwrap();
        for &a in &[0.1, 0.37, 0.8] {
            for phi in [0.0, PI / 4.0, 2.0] {
                let phi = Phase::from_radians(phi);
                let lhs = gp_closed_ns(c(a), phi, p).unwrap();
                let rhs = hs_closed_ns(c(a), phi).unwrap();
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gp_closed_matches_series() {
        let p = GpParams::new(1.5).unwrap();
        let f = gp_su11_f(p);
        let closed = gp_closed_ns(c(0.5), Phase::ZERO, p).unwrap();
        let series = series_ns(c(0.5), Phase::ZERO, &f, 200).unwrap();
        assert!((closed - series).abs() < 1e-12);
        assert!(matches!(
            gp_closed_ns(c(0.0), Phase::pi_fraction(1, 1), p),
            Err(Error::DegenerateState(_))
        ));
    }
}
