//! Wigner function of a pure state on a truncated Fock basis.
//!
//! Convention: `x = (a + a^dag)/2`, `p = (a - a^dag)/2i`, `beta = x + ip`.
//! The vacuum is `(2/pi) exp(-2(x^2 + p^2))`.
//!
//! [`wigner_point`] sums the Fock-basis Laguerre kernel. [`wigner_oracle_point`]
//! integrates the position wavefunction instead and shares nothing with it.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::ln_factorial;
use crate::{Error, Result, StateVector};

/// Steps above this are flagged as too coarse for the figures.
pub const COARSE_STEP: f64 = 0.25;
/// Lower bound of a pure-state Wigner function in this convention.
pub const WIGNER_FLOOR: f64 = -FRAC_2_PI;

/// Rescaling threshold for the Laguerre recurrence.
const LAGUERRE_RESCALE: f64 = 1e200;

/// Fock-kernel evaluator with the factorial table cached.
#[derive(Debug, Clone)]
pub struct WignerKernel<'a> {
    coeffs: &'a [Complex64],
    ln_fact: Vec<f64>,
}

impl<'a> WignerKernel<'a> {
    pub fn new(state: &'a StateVector) -> Self {
        let coeffs = state.coeffs();
        WignerKernel { coeffs, ln_fact: (0..coeffs.len()).map(ln_factorial).collect() }
    }

    /// Double sum `sum_{m,n} c_m conj(c_n) K_nm(beta)`, including the Hermitian partner terms.
    pub fn evaluate_complex(&self, x: f64, p: f64) -> Complex64 {
        let c = self.coeffs;
        let dim = c.len();
        let r2 = x * x + p * p;
        let r = r2.sqrt();
        let arg = 4.0 * r2;
        // unit vector of conj(beta)
        let unit = if r > 0.0 { Complex64::new(x / r, -p / r) } else { Complex64::new(1.0, 0.0) };
        let ln_2r = (2.0 * r).ln();
        let mut total = Complex64::new(0.0, 0.0);
        let mut rot = Complex64::new(1.0, 0.0);
        for k in 0..dim {
            if k > 0 {
                if r == 0.0 {
                    break;
                }
                rot *= unit;
            }
            let ln_k = if k == 0 { 0.0 } else { k as f64 * ln_2r };
            let kf = k as f64;
            // L_n^k(arg) with a running log scale
            let (mut prev, mut cur, mut ln_scale) = (0.0, 1.0, 0.0);
            let mut upper = Complex64::new(0.0, 0.0);
            let mut lower = Complex64::new(0.0, 0.0);
            for n in 0..dim - k {
                if n == 1 {
                    prev = cur;
                    cur = 1.0 + kf - arg;
                } else if n > 1 {
                    let nf = (n - 1) as f64;
                    let next = ((2.0 * nf + 1.0 + kf - arg) * cur - (nf + kf) * prev) / (nf + 1.0);
                    prev = cur;
                    cur = next;
                }
                if cur.abs() > LAGUERRE_RESCALE {
                    prev /= LAGUERRE_RESCALE;
                    cur /= LAGUERRE_RESCALE;
                    ln_scale += LAGUERRE_RESCALE.ln();
                }
                let m = n + k;
                let ln_mag = 0.5 * (self.ln_fact[n] - self.ln_fact[m]) + ln_k - 2.0 * r2 + ln_scale;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let kernel = sign * cur * ln_mag.exp();
                upper += c[m] * c[n].conj() * kernel;
                if k > 0 {
                    lower += c[n] * c[m].conj() * kernel;
                }
            }
            total += upper * rot + lower * rot.conj();
        }
        total * FRAC_2_PI
    }

    pub fn evaluate(&self, x: f64, p: f64) -> f64 {
        self.evaluate_complex(x, p).re
    }
}

/// `W(x, p)` by the Fock-basis kernel.
pub fn wigner_point(state: &StateVector, x: f64, p: f64) -> f64 {
    WignerKernel::new(state).evaluate(x, p)
}

/// Unreduced complex double sum; its imaginary part is rounding noise.
pub fn wigner_point_complex(state: &StateVector, x: f64, p: f64) -> Complex64 {
    WignerKernel::new(state).evaluate_complex(x, p)
}

/// Rectangular phase-space window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRanges {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl GridRanges {
    pub fn square(half_width: f64) -> Self {
        GridRanges { x_min: -half_width, x_max: half_width, p_min: -half_width, p_max: half_width }
    }

    pub fn validate(&self, step: f64) -> Result<()> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter("grid step must be positive"));
        }
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo <= hi;
        if !ok(self.x_min, self.x_max) || !ok(self.p_min, self.p_max) {
            return Err(Error::InvalidParameter("grid ranges must be finite with min <= max"));
        }
        Ok(())
    }

    /// Sample abscissae `min + i*step` up to `max`, inclusive within rounding.
    /// Values are snapped to 12 decimals so `0.07` prints as `0.07`.
    pub fn axis(min: f64, max: f64, step: f64) -> Vec<f64> {
        let count = ((max - min) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| snap(min + i as f64 * step)).collect()
    }

    pub fn xs(&self, step: f64) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, step)
    }

    pub fn ps(&self, step: f64) -> Vec<f64> {
        Self::axis(self.p_min, self.p_max, step)
    }
}

fn snap(v: f64) -> f64 {
    if v.abs() >= 1e3 {
        return v;
    }
    let scaled = (v * 1e12).round() / 1e12;
    if scaled == 0.0 { 0.0 } else { scaled }
}

/// Sampled Wigner function. `values[i * ps.len() + j]` is `W(xs[i], ps[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<f64>,
    pub min_value: f64,
    pub min_location: (f64, f64),
    /// Set when `step` exceeds [`COARSE_STEP`].
    pub coarse: bool,
}

impl WignerGrid {
    /// Assembles a grid from rows evaluated independently, one per `x`.
    pub fn from_rows(ranges: GridRanges, step: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        ranges.validate(step)?;
        let xs = ranges.xs(step);
        let ps = ranges.ps(step);
        if rows.len() != xs.len() || rows.iter().any(|r| r.len() != ps.len()) {
            return Err(Error::InvalidParameter("row shape does not match the grid"));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        let (mut min_value, mut min_location) = (f64::INFINITY, (f64::NAN, f64::NAN));
        for (i, &x) in xs.iter().enumerate() {
            for (j, &p) in ps.iter().enumerate() {
                let w = values[i * ps.len() + j];
                if w < min_value {
                    min_value = w;
                    min_location = (x, p);
                }
            }
        }
        Ok(WignerGrid {
            x_min: ranges.x_min,
            x_max: ranges.x_max,
            p_min: ranges.p_min,
            p_max: ranges.p_max,
            step,
            xs,
            ps,
            values,
            min_value,
            min_location,
            coarse: step > COARSE_STEP,
        })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ps.len() + j]
    }

    /// Riemann sum `sum W * step^2`.
    pub fn norm_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.step * self.step
    }

    /// `sum_p W(x, p) * step` for each `x`.
    pub fn x_marginal(&self) -> Vec<f64> {
        self.values.chunks(self.ps.len()).map(|row| row.iter().sum::<f64>() * self.step).collect()
    }
}

/// One row `W(x, p)` over the `p` axis of `ranges`.
pub fn wigner_row(kernel: &WignerKernel<'_>, x: f64, ranges: &GridRanges, step: f64) -> Vec<f64> {
    ranges.ps(step).into_iter().map(|p| kernel.evaluate(x, p)).collect()
}

/// Dense evaluation of [`wigner_point`] on the grid, row by row.
pub fn wigner_grid(state: &StateVector, ranges: GridRanges, step: f64) -> Result<WignerGrid> {
    ranges.validate(step)?;
    let kernel = WignerKernel::new(state);
    let rows = ranges.xs(step).into_iter().map(|x| wigner_row(&kernel, x, &ranges, step)).collect();
    WignerGrid::from_rows(ranges, step, rows)
}

/// Oscillator eigenfunctions `phi_0..phi_{len-1}` at `x`, with `phi_0 = (2/pi)^{1/4} e^{-x^2}`.
pub fn oscillator_functions(len: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; len];
    if len == 0 {
        return out;
    }
    let xi = core::f64::consts::SQRT_2 * x;
    out[0] = (2.0 / PI).powf(0.25) * (-x * x).exp();
    if len > 1 {
        out[1] = core::f64::consts::SQRT_2 * xi * out[0];
    }
    for n in 1..len.saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * xi * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
    out
}

/// `psi(x) = sum c_n phi_n(x)`.
pub fn position_wavefunction(state: &StateVector, x: f64) -> Complex64 {
    let c = state.coeffs();
    oscillator_functions(c.len(), x).into_iter().zip(c).map(|(phi, cn)| cn * phi).sum()
}

/// Evaluation budget of the oracle quadrature.
pub const ORACLE_BUDGET: usize = 400_000;
const ORACLE_PANELS: usize = 64;
const ORACLE_TOLERANCE: f64 = 1e-11;
const ORACLE_MAX_DEPTH: u32 = 40;

struct Simpson<'a, F> {
    f: &'a F,
    evaluations: usize,
    budget: usize,
}

impl<F: Fn(f64) -> Complex64> Simpson<'_, F> {
    fn eval(&mut self, y: f64) -> Result<Complex64> {
        self.evaluations += 1;
        if self.evaluations > self.budget {
            return Err(Error::QuadratureFailure { evaluations: self.evaluations });
        }
        Ok((self.f)(y))
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<Complex64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
}

/// `W(x, p) = (2/pi) int conj(psi(x+y)) psi(x-y) e^{4ipy} dy` on `[-L, L]`,
/// `L = 5 (1 + sqrt(<n>))`, by adaptive Simpson over fixed panels.
pub fn wigner_oracle_point(state: &StateVector, x: f64, p: f64) -> Result<f64> {
    wigner_oracle_point_with_budget(state, x, p, ORACLE_BUDGET)
}

pub fn wigner_oracle_point_with_budget(state: &StateVector, x: f64, p: f64, budget: usize) -> Result<f64> {
    let n_mean: f64 = state.coeffs().iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum();
    let half = 5.0 * (1.0 + n_mean.sqrt());
    let integrand = |y: f64| {
        position_wavefunction(state, x + y).conj()
            * position_wavefunction(state, x - y)
            * Complex64::from_polar(1.0, 4.0 * p * y)
    };
    let mut s = Simpson { f: &integrand, evaluations: 0, budget };
    let width = 2.0 * half / ORACLE_PANELS as f64;
    let tol = ORACLE_TOLERANCE / ORACLE_PANELS as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut fa = s.eval(-half)?;
    for i in 0..ORACLE_PANELS {
        let a = -half + i as f64 * width;
        let b = a + width;
        let fm = s.eval(0.5 * (a + b))?;
        let fb = s.eval(b)?;
        let whole = (fa + fm * 4.0 + fb) * (width / 6.0);
        total += s.refine(a, b, fa, fm, fb, whole, tol, ORACLE_MAX_DEPTH)?;
        fa = fb;
    }
    Ok(total.re * FRAC_2_PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::harmonious_f;
    use crate::state::{build_nlcs, Component, SuperpositionSpec, TruncationPolicy};
    use crate::{NonlinearityFunction, Phase};
    use approx::assert_abs_diff_eq;

    #[test]
    fn anchors() {
        assert_abs_diff_eq!(wigner_point(&StateVector::vacuum(6), 0.0, 0.0), FRAC_2_PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wigner_point(&StateVector::fock(1, 6), 0.0, 0.0), -FRAC_2_PI, epsilon = 1e-12);
        let vac = StateVector::vacuum(6);
        assert_abs_diff_eq!(wigner_point(&vac, 0.3, -0.4), FRAC_2_PI * (-0.5f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn coherent_peak_tracks_alpha() {
        for alpha in [Complex64::new(0.5, 0.0), Complex64::new(0.3, -0.6)] {
            let s = build_nlcs(alpha, &NonlinearityFunction::identity(), &TruncationPolicy::default()).unwrap();
            assert_abs_diff_eq!(wigner_point(&s, alpha.re, alpha.im), FRAC_2_PI, epsilon = 1e-9);
            let (dx, dp) = (0.1, -0.2);
            let expected = FRAC_2_PI * (-2.0 * (dx * dx + dp * dp)).exp();
            assert_abs_diff_eq!(wigner_point(&s, alpha.re + dx, alpha.im + dp), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn hermitian_sum_is_real() {
        let spec = SuperpositionSpec::new(Complex64::new(0.5, 0.2), Phase::pi_fraction(1, 3), harmonious_f());
        let s = spec.build(Component::Superposition).unwrap();
        for (x, p) in [(0.0, 0.0), (0.4, -1.1), (-2.0, 0.7)] {
            assert!(wigner_point_complex(&s, x, p).im.abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_matches_kernel() {
        let vac = StateVector::vacuum(6);
        assert_abs_diff_eq!(wigner_oracle_point(&vac, 0.0, 0.0).unwrap(), FRAC_2_PI, epsilon = 1e-9);
        let one = StateVector::fock(1, 6);
        let (k, o) = (wigner_point(&one, 0.3, -0.2), wigner_oracle_point(&one, 0.3, -0.2).unwrap());
        assert!((k - o).abs() < 1e-9, "{k} {o}");
        let s = build_nlcs(Complex64::new(0.3, -0.6), &NonlinearityFunction::identity(), &TruncationPolicy::default())
            .unwrap();
        let (k, o) = (wigner_point(&s, 0.1, -0.5), wigner_oracle_point(&s, 0.1, -0.5).unwrap());
        assert!((k - o).abs() < 1e-9, "{k} {o}");
    }

    #[test]
    fn oracle_budget_exhaustion() {
        let vac = StateVector::vacuum(6);
        assert!(matches!(
            wigner_oracle_point_with_budget(&vac, 0.0, 0.0, 10),
            Err(Error::QuadratureFailure { .. })
        ));
    }

    #[test]
    fn vacuum_grid_normalizes() {
        let g = wigner_grid(&StateVector::vacuum(6), GridRanges::square(4.0), 0.05).unwrap();
        assert_eq!(g.xs.len(), 161);
        assert!((g.norm_sum() - 1.0).abs() < 5e-3);
        assert!(!g.coarse);
        assert!(g.min_value > -1e-12);
    }

    #[test]
    fn marginal_matches_density() {
        let s = StateVector::fock(2, 6);
        let g = wigner_grid(&s, GridRanges::square(4.0), 0.05).unwrap();
        let marginal = g.x_marginal();
        for (i, &x) in g.xs.iter().enumerate() {
            assert!((marginal[i] - position_wavefunction(&s, x).norm_sqr()).abs() < 5e-3);
        }
    }

    #[test]
    fn grid_validation() {
        let vac = StateVector::vacuum(4);
        assert!(wigner_grid(&vac, GridRanges::square(1.0), 0.0).is_err());
        let bad = GridRanges { x_min: 1.0, x_max: -1.0, p_min: 0.0, p_max: 1.0 };
        assert!(wigner_grid(&vac, bad, 0.1).is_err());
        assert!(wigner_grid(&vac, GridRanges::square(1.0), 0.5).unwrap().coarse);
    }
}
