//! Construction of nonlinear coherent states and their superpositions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::nonlinearity::NonlinearityFunction;
use crate::special::ln_factorial;
use crate::{Error, Phase, Result};

pub const DEFAULT_HARD_CAP: usize = 512;
pub const DEFAULT_TAIL_EPSILON: f64 = 1e-14;
/// Number of trailing terms whose mass is compared against `tail_epsilon`.
pub const TAIL_WINDOW: usize = 10;
/// Interference factors smaller than this count as exact zeros.
pub const DEGENERATE_COEFFICIENT: f64 = 1e-12;
/// Fixed truncation used for the trapped-ion model.
pub const ION_FIXED_TERMS: usize = 50;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationMode {
    /// Grow `N` until the last [`TAIL_WINDOW`] weights carry less than `tail_epsilon`.
    Adaptive { tail_epsilon: f64 },
    Fixed { n_max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub mode: TruncationMode,
    pub hard_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::adaptive(DEFAULT_TAIL_EPSILON)
    }
}

impl TruncationPolicy {
    pub fn adaptive(tail_epsilon: f64) -> Self {
        TruncationPolicy { mode: TruncationMode::Adaptive { tail_epsilon }, hard_cap: DEFAULT_HARD_CAP }
    }

    pub fn fixed(n_max: usize) -> Self {
        TruncationPolicy { mode: TruncationMode::Fixed { n_max }, hard_cap: DEFAULT_HARD_CAP.max(n_max) }
    }

    /// Fixed `min(50, n_cap)` terms, the default for models with a finite safe range.
    pub fn for_capped(f: &NonlinearityFunction) -> Self {
        TruncationPolicy::fixed(f.n_cap().map_or(ION_FIXED_TERMS, |cap| cap.min(ION_FIXED_TERMS)))
    }

    pub fn with_hard_cap(mut self, hard_cap: usize) -> Self {
        self.hard_cap = hard_cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            TruncationMode::Adaptive { tail_epsilon } => {
                if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
                    return Err(Error::InvalidParameter("tail_epsilon must lie in (0, 1)"));
                }
                if self.hard_cap < 1 {
                    return Err(Error::InvalidParameter("hard_cap must be at least 1"));
                }
            }
            TruncationMode::Fixed { n_max } => {
                if n_max < 1 {
                    return Err(Error::InvalidParameter("n_max must be at least 1"));
                }
                if self.hard_cap < n_max {
                    return Err(Error::InvalidParameter("hard_cap must be at least n_max"));
                }
            }
        }
        Ok(())
    }
}

/// Where a state came from. Raw states carry `model = "raw"`.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub model: String,
    pub alpha: Complex64,
    pub phi: f64,
}

impl Provenance {
    pub fn raw() -> Self {
        Provenance { model: "raw".into(), alpha: Complex64::new(0.0, 0.0), phi: 0.0 }
    }
}

/// Normalized Fock amplitudes `c_0 ..= c_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    coeffs: Vec<Complex64>,
    provenance: Provenance,
}

fn norm_sqr(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm_sqr()).sum()
}

impl StateVector {
    /// Normalizes arbitrary amplitudes into a raw state.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::normalized(coeffs, Provenance::raw())
    }

    /// Accepts already-normalized amplitudes as they are, without rescaling.
    pub fn from_raw_parts(coeffs: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite and nonempty"));
        }
        if (norm_sqr(&coeffs) - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter("coefficients are not normalized"));
        }
        Ok(StateVector { coeffs, provenance })
    }

    pub(crate) fn normalized(mut coeffs: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        let norm = norm_sqr(&coeffs).sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::DegenerateState("all retained coefficients vanish"));
        }
        for c in coeffs.iter_mut() {
            *c /= norm;
        }
        Ok(StateVector { coeffs, provenance })
    }

    /// Number state `|n>` on `0..=n_max`.
    pub fn fock(n: usize, n_max: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max.max(n) + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        StateVector { coeffs, provenance: Provenance::raw() }
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, n_max)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.coeffs)
    }

    /// Copy extended with zeros to `n_max`; never truncates.
    pub fn padded(&self, n_max: usize) -> StateVector {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < n_max + 1 {
            coeffs.resize(n_max + 1, Complex64::new(0.0, 0.0));
        }
        StateVector { coeffs, provenance: self.provenance.clone() }
    }
}

/// Which state of the superposition family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    /// `|psi_f> ~ |alpha, f> + e^{i phi} |i alpha, f>`.
    Superposition,
    /// `|alpha, f>`.
    Plus,
    /// `|i alpha, f>`.
    Rotated,
}

impl Component {
    pub fn name(&self) -> &'static str {
        match self {
            Component::Superposition => "superposition",
            Component::Plus => "plus",
            Component::Rotated => "rotated",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuperpositionSpec {
    pub alpha: Complex64,
    pub phi: Phase,
    pub f: NonlinearityFunction,
    pub truncation: TruncationPolicy,
}

impl SuperpositionSpec {
    pub fn new(alpha: Complex64, phi: Phase, f: NonlinearityFunction) -> Self {
        let truncation = f.default_truncation();
        SuperpositionSpec { alpha, phi, f, truncation }
    }

    pub fn with_truncation(mut self, truncation: TruncationPolicy) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_alpha(&self, alpha: Complex64) -> Self {
        SuperpositionSpec { alpha, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        check_domain(self.alpha, &self.f)?;
        self.truncation.validate()
    }

    pub fn build(&self, component: Component) -> Result<StateVector> {
        match component {
            Component::Superposition => build_superposition(self),
            Component::Plus => build_nlcs(self.alpha, &self.f, &self.truncation),
            Component::Rotated => build_nlcs(self.alpha * Complex64::i(), &self.f, &self.truncation),
        }
    }
}

fn check_domain(alpha: Complex64, f: &NonlinearityFunction) -> Result<()> {
    let r = alpha.norm();
    if !r.is_finite() || r >= f.convergence_radius() {
        return Err(Error::Domain { modulus: r, radius: f.convergence_radius() });
    }
    Ok(())
}

/// Unnormalized `ln |c_n|^2` of `|alpha, f>` for `n = 0..=N`, with `N` chosen by the policy.
fn log_weights(alpha: Complex64, f: &NonlinearityFunction, trunc: &TruncationPolicy) -> Result<Vec<f64>> {
    check_domain(alpha, f)?;
    trunc.validate()?;
    let ln_r = alpha.norm().ln();
    let weight = |n: usize, ln_fact: f64| -> f64 {
        if n == 0 {
            0.0
        } else {
            2.0 * n as f64 * ln_r - ln_factorial(n) - 2.0 * ln_fact
        }
    };
    match trunc.mode {
        TruncationMode::Fixed { n_max } => {
            let logs = f.factorial_logs(n_max)?;
            Ok(logs.iter().enumerate().map(|(n, &lf)| weight(n, lf)).collect())
        }
        TruncationMode::Adaptive { tail_epsilon } => {
            let limit = f.n_cap().map_or(trunc.hard_cap, |cap| cap.min(trunc.hard_cap));
            let mut out = Vec::with_capacity(64);
            out.push(0.0);
            // Running maximum keeps the relative sums finite for large |alpha|.
            let mut ln_fact = 0.0;
            for n in 1..=limit {
                ln_fact += f.eval(n)?.ln();
                out.push(weight(n, ln_fact));
                if n >= TAIL_WINDOW {
                    let peak = out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let total: f64 = out.iter().map(|w| (w - peak).exp()).sum();
                    let tail: f64 = out[n + 1 - TAIL_WINDOW..].iter().map(|w| (w - peak).exp()).sum();
                    if tail / total < tail_epsilon {
                        return Ok(out);
                    }
                }
            }
            let peak = out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let total: f64 = out.iter().map(|w| (w - peak).exp()).sum();
            let start = out.len().saturating_sub(TAIL_WINDOW);
            let tail: f64 = out[start..].iter().map(|w| (w - peak).exp()).sum();
            Err(Error::ConvergenceFailure { hard_cap: limit, tail: tail / total })
        }
    }
}

/// Normalized amplitudes of `|alpha, f>`: `c_n ~ alpha^n / (sqrt(n!) [f(n)]!)`.
fn nlcs_coeffs(alpha: Complex64, f: &NonlinearityFunction, trunc: &TruncationPolicy) -> Result<Vec<Complex64>> {
    let logs = log_weights(alpha, f, trunc)?;
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_total = peak + logs.iter().map(|w| (w - peak).exp()).sum::<f64>().ln();
    let r = alpha.norm();
    let unit = if r > 0.0 { alpha / r } else { Complex64::new(1.0, 0.0) };
    let mut phase = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(logs.len());
    for (n, w) in logs.iter().enumerate() {
        if n > 0 {
            phase *= unit;
        }
        let mag = if n > 0 && r == 0.0 { 0.0 } else { (0.5 * (w - ln_total)).exp() };
        out.push(phase * mag);
    }
    Ok(out)
}

/// The nonlinear coherent state `|alpha, f>`.
pub fn build_nlcs(alpha: Complex64, f: &NonlinearityFunction, trunc: &TruncationPolicy) -> Result<StateVector> {
    let coeffs = nlcs_coeffs(alpha, f, trunc)?;
    let provenance = Provenance { model: f.label().into(), alpha, phi: 0.0 };
    StateVector::normalized(coeffs, provenance)
}

/// Superposition and the factor `N_s` that normalizes
/// `(|alpha, f> + e^{i phi} |i alpha, f>) / sqrt(2)`.
pub fn build_superposition_with_norm(spec: &SuperpositionSpec) -> Result<(StateVector, f64)> {
    spec.validate()?;
    let plus = nlcs_coeffs(spec.alpha, &spec.f, &spec.truncation)?;
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    let raw: Vec<Complex64> =
        plus.iter().enumerate().map(|(n, c)| c * spec.phi.interference(n) * scale).collect();
    let norm = norm_sqr(&raw).sqrt();
    let provenance = Provenance { model: spec.f.label().into(), alpha: spec.alpha, phi: spec.phi.radians() };
    let state = StateVector::normalized(raw, provenance)?;
    Ok((state, 1.0 / norm))
}

/// `|psi_f>` with `c_n ~ alpha^n (1 + e^{i(phi + n pi/2)}) / (sqrt(n!) [f(n)]!)`.
pub fn build_superposition(spec: &SuperpositionSpec) -> Result<StateVector> {
    build_superposition_with_norm(spec).map(|(s, _)| s)
}

/// `<s1|s2>`, padding the shorter vector with zeros.
pub fn inner_product(s1: &StateVector, s2: &StateVector) -> Complex64 {
    s1.coeffs.iter().zip(&s2.coeffs).map(|(a, b)| a.conj() * b).sum()
}

/// Nonlinearity `f_s(n)` that makes the superposition an eigenstate of `a f_s(n)`:
/// `[1 - e^{i(phi + (n+1) pi/2)}] / [1 + e^{i(phi + n pi/2)}] f(n)`.
pub fn superposed_nonlinearity(f: &NonlinearityFunction, phi: Phase, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter("f_s(n) is defined for n >= 1"));
    }
    let den = phi.interference(n);
    if den.norm() < DEGENERATE_COEFFICIENT {
        return Err(Error::DegenerateCoefficient { n });
    }
    let num = Complex64::new(1.0, 0.0) - phi.rotated_cis(n + 1);
    Ok(num / den * f.eval(n)?)
}

/// Rebuilds the superposition from `C_n = alpha C_{n-1} / (sqrt(n) f_s(n))`, `C_0 = 1`.
pub fn reconstruct_from_fs(
    alpha: Complex64,
    phi: Phase,
    f: &NonlinearityFunction,
    trunc: &TruncationPolicy,
) -> Result<StateVector> {
    let n_max = log_weights(alpha, f, trunc)?.len() - 1;
    if phi.interference(0).norm() < DEGENERATE_COEFFICIENT {
        return Err(Error::DegenerateCoefficient { n: 0 });
    }
    // The log of |C_n| is tracked separately so large n cannot underflow before renormalizing.
    let mut ln_mag = 0.0f64;
    let mut phase = Complex64::new(1.0, 0.0);
    let mut mags = vec![0.0f64];
    let mut phases = vec![phase];
    for n in 1..=n_max {
        let fs = superposed_nonlinearity(f, phi, n)?;
        if fs.norm() < DEGENERATE_COEFFICIENT {
            return Err(Error::DegenerateCoefficient { n: n - 1 });
        }
        let step = alpha / ((n as f64).sqrt() * fs);
        let m = step.norm();
        if m == 0.0 {
            mags.push(f64::NEG_INFINITY);
            phases.push(phase);
            continue;
        }
        ln_mag += m.ln();
        phase *= step / m;
        mags.push(ln_mag);
        phases.push(phase);
    }
    let peak = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coeffs = mags.iter().zip(&phases).map(|(m, p)| p * (m - peak).exp()).collect();
    let provenance = Provenance { model: f.label().into(), alpha, phi: phi.radians() };
    StateVector::normalized(coeffs, provenance)
}

/// `|| A^4 psi - alpha^4 psi ||` over indices `0..=N-4`, with `A = a f(n)`.
pub fn verify_a4_eigenstate(state: &StateVector, alpha: Complex64, f: &NonlinearityFunction) -> Result<f64> {
    let n_max = state.n_max();
    if n_max < 8 {
        return Err(Error::TruncationTooSmall { n_max, required: 8 });
    }
    let ladder: Vec<f64> = (1..=n_max).map(|n| Ok((n as f64).sqrt() * f.eval(n)?)).collect::<Result<_>>()?;
    let mut v = state.coeffs.clone();
    for _ in 0..4 {
        v = (0..v.len() - 1).map(|n| v[n + 1] * ladder[n]).collect();
    }
    let eigen = alpha.powi(4);
    let residual: f64 = v.iter().zip(&state.coeffs).map(|(a, c)| (a - eigen * c).norm_sqr()).sum();
    Ok(residual.sqrt())
}
