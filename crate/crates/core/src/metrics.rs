//! Photon statistics and squeezing witnesses.
//!
//! Moments come from the coefficient-shift engine [`moments_shift`]. The
//! dense-matrix path [`matrix_oracle_moments`] shares no code with it and is
//! used to validate it; [`series_crosscheck`] evaluates the closed series
//! written in terms of `alpha`, `phi` and `[f(n)]!` against both.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::ln_factorial;
use crate::state::{build_superposition, Component, SuperpositionSpec};
use crate::{Error, Result, StateVector};

/// Padding of the oracle matrices beyond `n_max`.
pub const ORACLE_PADDING: usize = 5;
/// `g2` is undefined when `<n>` is at or below this.
pub const VACUUM_N_MEAN: f64 = 1e-12;

/// Expectation values `<a>, <a^2>, <a^4>, <a^dag a>, <a^dag^2 a^2>, <a^2 a^dag^2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub a_mean: Complex64,
    pub a2_mean: Complex64,
    pub a4_mean: Complex64,
    pub n_mean: f64,
    pub adag2a2_mean: f64,
    pub a2adag2_mean: f64,
}

impl MomentSet {
    /// Largest componentwise absolute difference.
    pub fn max_deviation(&self, other: &MomentSet) -> f64 {
        [
            (self.a_mean - other.a_mean).norm(),
            (self.a2_mean - other.a2_mean).norm(),
            (self.a4_mean - other.a4_mean).norm(),
            (self.n_mean - other.n_mean).abs(),
            (self.adag2a2_mean - other.adag2a2_mean).abs(),
            (self.a2adag2_mean - other.a2adag2_mean).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `<a^2 a^dag^2> - <a^dag^2 a^2> - 4 <n> - 2`, zero for every state.
    pub fn ordering_residual(&self) -> f64 {
        self.a2adag2_mean - self.adag2a2_mean - 4.0 * self.n_mean - 2.0
    }

    /// `(I1, I2)`: negative values witness squeezing in `x` or `y`.
    pub fn quadrature(&self) -> (f64, f64) {
        let (a, a2, n) = (self.a_mean, self.a2_mean, self.n_mean);
        let (ad, ad2) = (a.conj(), a2.conj());
        let i1 = a2 + ad2 - a * a - ad * ad - 2.0 * a * ad + 2.0 * n;
        let i2 = -a2 - ad2 + a * a + ad * ad - 2.0 * a * ad + 2.0 * n;
        (i1.re, i2.re)
    }

    /// `(I3, I4)`: negative values witness amplitude-squared squeezing in `X` or `Y`.
    pub fn amplitude_squared(&self) -> (f64, f64) {
        let (a2, a4, n) = (self.a2_mean, self.a4_mean, self.n_mean);
        let (ad2, ad4) = (a2.conj(), a4.conj());
        let normal = self.adag2a2_mean + self.a2adag2_mean;
        let i3 = (a4 + ad4 + normal - a2 * a2 - ad2 * ad2 - 2.0 * a2 * ad2) * 0.25 - n - 0.5;
        let i4 = (-a4 - ad4 + normal + a2 * a2 + ad2 * ad2 - 2.0 * a2 * ad2) * 0.25 - n - 0.5;
        (i3.re, i4.re)
    }

    pub fn g2(&self) -> Result<f64> {
        if self.n_mean <= VACUUM_N_MEAN {
            return Err(Error::DegenerateState("g2 is undefined at vanishing mean photon number"));
        }
        Ok(self.adag2a2_mean / (self.n_mean * self.n_mean))
    }
}

/// All diagnostics of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub pn: Vec<f64>,
    /// `None` at the vacuum, where `g2` is undefined.
    pub g2: Option<f64>,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub moments: MomentSet,
}

impl MetricsReport {
    pub fn compute(state: &StateVector) -> Result<Self> {
        let moments = moments_shift(state)?;
        let (i1, i2) = moments.quadrature();
        let (i3, i4) = moments.amplitude_squared();
        Ok(MetricsReport { pn: photon_distribution(state), g2: moments.g2().ok(), i1, i2, i3, i4, moments })
    }
}

/// `P(n) = |c_n|^2`.
pub fn photon_distribution(state: &StateVector) -> Vec<f64> {
    state.coeffs().iter().map(|c| c.norm_sqr()).collect()
}

fn ladder_mean(c: &[Complex64], k: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..c.len().saturating_sub(k) {
        let weight: f64 = (n + 1..=n + k).map(|m| m as f64).product::<f64>().sqrt();
        acc += c[n].conj() * c[n + k] * weight;
    }
    acc
}

/// Moments by shifting coefficients: `<a^k> = sum conj(c_n) c_{n+k} sqrt((n+1)...(n+k))`.
pub fn moments_shift(state: &StateVector) -> Result<MomentSet> {
    let n_max = state.n_max();
    if n_max < 4 {
        return Err(Error::TruncationTooSmall { n_max, required: 4 });
    }
    let c = state.coeffs();
    let (mut n_mean, mut adag2a2, mut a2adag2) = (0.0, 0.0, 0.0);
    for (n, amp) in c.iter().enumerate() {
        let (p, n) = (amp.norm_sqr(), n as f64);
        n_mean += n * p;
        adag2a2 += n * (n - 1.0) * p;
        a2adag2 += (n + 1.0) * (n + 2.0) * p;
    }
    Ok(MomentSet {
        a_mean: ladder_mean(c, 1),
        a2_mean: ladder_mean(c, 2),
        a4_mean: ladder_mean(c, 4),
        n_mean,
        adag2a2_mean: adag2a2,
        a2adag2_mean: a2adag2,
    })
}

/// Square row-major real matrix; the ladder operators have real entries.
#[derive(Debug, Clone, PartialEq)]
struct Dense {
    dim: usize,
    data: Vec<f64>,
}

impl Dense {
    fn zeros(dim: usize) -> Self {
        Dense { dim, data: vec![0.0; dim * dim] }
    }

    /// `a |n> = sqrt(n) |n-1>`.
    fn annihilation(dim: usize) -> Self {
        let mut m = Dense::zeros(dim);
        for n in 1..dim {
            m.data[(n - 1) * dim + n] = (n as f64).sqrt();
        }
        m
    }

    fn adjoint(&self) -> Self {
        let mut m = Dense::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.data[j * self.dim + i] = self.data[i * self.dim + j];
            }
        }
        m
    }

    fn mul(&self, rhs: &Dense) -> Dense {
        let d = self.dim;
        let mut out = Dense::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let lhs = self.data[i * d + k];
                if lhs == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += lhs * rhs.data[k * d + j];
                }
            }
        }
        out
    }

    /// `<psi|M|psi>`.
    fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..d {
                row += psi[j] * self.data[i * d + j];
            }
            acc += psi[i].conj() * row;
        }
        acc
    }
}

/// Moments from dense `(N+1+5) x (N+1+5)` operator matrices.
pub fn matrix_oracle_moments(state: &StateVector) -> MomentSet {
    let dim = state.n_max() + 1 + ORACLE_PADDING;
    let mut psi = state.coeffs().to_vec();
    psi.resize(dim, Complex64::new(0.0, 0.0));
    let a = Dense::annihilation(dim);
    let ad = a.adjoint();
    let a2 = a.mul(&a);
    let ad2 = ad.mul(&ad);
    let a4 = a2.mul(&a2);
    MomentSet {
        a_mean: a.expectation(&psi),
        a2_mean: a2.expectation(&psi),
        a4_mean: a4.expectation(&psi),
        n_mean: ad.mul(&a).expectation(&psi).re,
        adag2a2_mean: ad2.mul(&a2).expectation(&psi).re,
        a2adag2_mean: a2.mul(&ad2).expectation(&psi).re,
    }
}

/// `[<a^dag>, <a^dag^2>, <a^dag^4>]` by shifting coefficients downward.
pub fn creation_means_shift(state: &StateVector) -> [Complex64; 3] {
    let c = state.coeffs();
    [1, 2, 4].map(|k| {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..c.len().saturating_sub(k) {
            let weight: f64 = (n + 1..=n + k).map(|m| m as f64).product::<f64>().sqrt();
            acc += c[n + k].conj() * c[n] * weight;
        }
        acc
    })
}

/// `[<a^dag>, <a^dag^2>, <a^dag^4>]` from dense creation-operator matrices.
pub fn creation_means_oracle(state: &StateVector) -> [Complex64; 3] {
    let dim = state.n_max() + 1 + ORACLE_PADDING;
    let mut psi = state.coeffs().to_vec();
    psi.resize(dim, Complex64::new(0.0, 0.0));
    let ad = Dense::annihilation(dim).adjoint();
    let ad2 = ad.mul(&ad);
    let ad4 = ad2.mul(&ad2);
    [ad.expectation(&psi), ad2.expectation(&psi), ad4.expectation(&psi)]
}

/// `g2(0) = <a^dag^2 a^2> / <a^dag a>^2`.
pub fn g2(state: &StateVector) -> Result<f64> {
    moments_shift(state)?.g2()
}

/// `(I1, I2)`; equal to `4 Var(x) - 1` and `4 Var(y) - 1`.
pub fn quadrature_squeezing(state: &StateVector) -> Result<(f64, f64)> {
    Ok(moments_shift(state)?.quadrature())
}

/// `(I3, I4)`; `I3 = Var(X) - <n> - 1/2` and likewise for `Y`.
pub fn amp_squared_squeezing(state: &StateVector) -> Result<(f64, f64)> {
    Ok(moments_shift(state)?.amplitude_squared())
}

/// One entry of a [`ConformanceReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConformanceEntry {
    pub key: &'static str,
    pub quantity: &'static str,
    /// Absolute deviation between series and oracle.
    pub deviation: f64,
    /// Pass bar; `None` for deviations that are only recorded.
    pub tolerance: Option<f64>,
    /// For `<a^2>`: `|series + oracle|`, small when the series carries the opposite sign.
    pub negated_deviation: Option<f64>,
}

impl ConformanceEntry {
    pub fn passes(&self) -> Option<bool> {
        self.tolerance.map(|t| self.deviation < t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConformanceReport {
    pub n_max: usize,
    pub entries: Vec<ConformanceEntry>,
}

impl ConformanceReport {
    pub fn entry(&self, key: &str) -> Option<&ConformanceEntry> {
        self.entries.iter().find(|e| e.key == key)
    }

    /// True when every entry with a pass bar meets it.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passes() != Some(false))
    }
}

/// Conformance tolerance for the series that are expected to match.
pub const SERIES_TOLERANCE: f64 = 1e-8;

/// Evaluates the closed photon-number and moment series term by term and
/// compares each against the dense-matrix oracle on the constructed state.
///
/// Sums run over `n` with every referenced index `n + k <= N`, the same
/// window the constructed state occupies. `N_f` and `N_s` come from their
/// defining series over that window.
pub fn series_crosscheck(spec: &SuperpositionSpec) -> Result<ConformanceReport> {
    let state = build_superposition(spec)?;
    let oracle = matrix_oracle_moments(&state);
    let n_max = state.n_max();
    let alpha = spec.alpha;
    let r = alpha.norm();
    let lf = spec.f.factorial_logs(n_max)?;
    let ln_r = r.ln();
    // r^{2n} / (n! [f(n)]!^2) in log form
    let ln_w = |n: usize| if n == 0 { 0.0 } else { 2.0 * n as f64 * ln_r - ln_factorial(n) - 2.0 * lf[n] };
    let w = |n: usize| if n > 0 && r == 0.0 { 0.0 } else { ln_w(n).exp() };
    let cos_t = |n: usize| spec.phi.rotated_cis(n).re;
    let sin_t = |n: usize| spec.phi.rotated_cis(n).im;

    let nf2 = 1.0 / (0..=n_max).map(w).sum::<f64>();
    let ns2 = 1.0 / (1.0 + nf2 * (0..=n_max).map(|n| w(n) * cos_t(n)).sum::<f64>());
    let pref = ns2 * nf2;

    let pn_series: Vec<f64> = (0..=n_max).map(|n| pref * w(n) * (1.0 + cos_t(n))).collect();
    let pn_dev = pn_series
        .iter()
        .zip(photon_distribution(&state))
        .map(|(s, p)| (s - p).abs())
        .fold(0.0, f64::max);

    // r^{2(n+1)} / (n! [f(n+1)]!^2)
    let n_series: f64 = (0..n_max)
        .map(|n| {
            let t = if r == 0.0 {
                0.0
            } else {
                (2.0 * (n + 1) as f64 * ln_r - ln_factorial(n) - 2.0 * lf[n + 1]).exp()
            };
            t * (1.0 - sin_t(n))
        })
        .sum::<f64>()
        * pref;

    let adag2a2_series: f64 =
        (0..=n_max).map(|n| w(n) * (n * n.saturating_sub(1)) as f64 * (1.0 + cos_t(n))).sum::<f64>() * pref;

    // alpha^{n+k} conj(alpha)^n / (n! [f(n)]! [f(n+k)]!) = alpha^k r^{2n} / (n! [f(n)]! [f(n+k)]!)
    let shifted = |n: usize, k: usize| -> Complex64 {
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let ln_mag = 2.0 * n as f64 * ln_r - ln_factorial(n) - lf[n] - lf[n + k];
        alpha.powi(k as i32) * ln_mag.exp()
    };
    let i = Complex64::i();
    let a_series: Complex64 = (0..n_max)
        .map(|n| {
            let bracket = Complex64::new(1.0, 1.0) + spec.phi.rotated_cis(n).conj() + spec.phi.rotated_cis(n + 1);
            shifted(n, 1) * bracket
        })
        .sum::<Complex64>()
        * (pref / 2.0);
    let a2_series: Complex64 =
        (0..n_max.saturating_sub(1)).map(|n| i * shifted(n, 2) * sin_t(n)).sum::<Complex64>() * pref;
    let a4_series: Complex64 =
        (0..n_max.saturating_sub(3)).map(|n| shifted(n, 4) * (1.0 + cos_t(n))).sum::<Complex64>() * pref;
    // literal form: 1/2 prefactor and a single [f(n)]! in the denominator
    let a2adag2_series: f64 = (0..=n_max)
        .map(|n| {
            let t = if n > 0 && r == 0.0 {
                0.0
            } else {
                let ln_mag = if n == 0 { 0.0 } else { 2.0 * n as f64 * ln_r - ln_factorial(n) - lf[n] };
                ln_mag.exp()
            };
            t * ((n + 1) * (n + 2)) as f64 * (1.0 + cos_t(n))
        })
        .sum::<f64>()
        * (pref / 2.0);

    let bar = Some(SERIES_TOLERANCE);
    let entries = vec![
        ConformanceEntry { key: "pn", quantity: "P(n)", deviation: pn_dev, tolerance: bar, negated_deviation: None },
        ConformanceEntry {
            key: "n",
            quantity: "<a^dag a>",
            deviation: (n_series - oracle.n_mean).abs(),
            tolerance: bar,
            negated_deviation: None,
        },
        ConformanceEntry {
            key: "adag2_a2",
            quantity: "<a^dag^2 a^2>",
            deviation: (adag2a2_series - oracle.adag2a2_mean).abs(),
            tolerance: bar,
            negated_deviation: None,
        },
        ConformanceEntry {
            key: "a",
            quantity: "<a>",
            deviation: (a_series - oracle.a_mean).norm(),
            tolerance: bar,
            negated_deviation: None,
        },
        ConformanceEntry {
            key: "a2",
            quantity: "|<a^2>|",
            deviation: (a2_series.norm() - oracle.a2_mean.norm()).abs(),
            tolerance: bar,
            negated_deviation: Some((a2_series + oracle.a2_mean).norm()),
        },
        ConformanceEntry {
            key: "a4",
            quantity: "<a^4>",
            deviation: (a4_series - oracle.a4_mean).norm(),
            tolerance: bar,
            negated_deviation: None,
        },
        ConformanceEntry {
            key: "a2_adag2",
            quantity: "<a^2 a^dag^2>",
            deviation: (a2adag2_series - oracle.a2adag2_mean).abs(),
            tolerance: None,
            negated_deviation: None,
        },
    ];
    Ok(ConformanceReport { n_max, entries })
}

/// Quantity tabulated by [`scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    G2,
    I1,
    I2,
    I3,
    I4,
    MeanN,
}

impl Metric {
    pub const ALL: [Metric; 6] = [Metric::G2, Metric::I1, Metric::I2, Metric::I3, Metric::I4, Metric::MeanN];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::G2 => "g2",
            Metric::I1 => "i1",
            Metric::I2 => "i2",
            Metric::I3 => "i3",
            Metric::I4 => "i4",
            Metric::MeanN => "n",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(name))
    }

    /// Classical boundary: 1 for `g2`, 0 for the squeezing witnesses.
    pub fn classical_level(&self) -> f64 {
        match self {
            Metric::G2 => 1.0,
            _ => 0.0,
        }
    }

    pub fn evaluate(&self, state: &StateVector) -> Result<f64> {
        let m = moments_shift(state)?;
        Ok(match self {
            Metric::G2 => m.g2()?,
            Metric::I1 => m.quadrature().0,
            Metric::I2 => m.quadrature().1,
            Metric::I3 => m.amplitude_squared().0,
            Metric::I4 => m.amplitude_squared().1,
            Metric::MeanN => m.n_mean,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub alpha: f64,
    pub component: Component,
    pub value: Result<f64>,
}

/// Evaluates `metric` for each real `alpha` of the grid and each requested
/// component. Construction failures become row-level errors. Rows are ordered
/// by grid position, then by the order of `components`.
pub fn scan(template: &SuperpositionSpec, alpha_grid: &[f64], metric: Metric, components: &[Component]) -> Vec<ScanRow> {
    let mut rows = Vec::with_capacity(alpha_grid.len() * components.len());
    for &alpha in alpha_grid {
        let spec = template.with_alpha(Complex64::new(alpha, 0.0));
        for &component in components {
            let value = spec.build(component).and_then(|s| metric.evaluate(&s));
            rows.push(ScanRow { alpha, component, value });
        }
    }
    rows
}

/// Number of bisection evaluations spent refining a bracketed crossing.
pub const THRESHOLD_REFINEMENTS: usize = 3;

/// First crossing of `level` in a table of `(alpha, value)` pairs.
///
/// Entries with non-finite values are skipped. The bracketing interval is
/// halved [`THRESHOLD_REFINEMENTS`] times with `refine` and the midpoint of
/// the final bracket is returned. A refinement failure ends refinement early.
pub fn find_threshold<F>(table: &[(f64, f64)], level: f64, mut refine: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let pts: Vec<(f64, f64)> = table.iter().copied().filter(|(_, v)| v.is_finite()).collect();
    for pair in pts.windows(2) {
        let ((x0, v0), (x1, v1)) = (pair[0], pair[1]);
        let (d0, d1) = (v0 - level, v1 - level);
        if d0 == 0.0 {
            return Ok(x0);
        }
        if d0.signum() == d1.signum() && d1 != 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut dlo) = (x0, x1, d0);
        for _ in 0..THRESHOLD_REFINEMENTS {
            let mid = 0.5 * (lo + hi);
            let Ok(v) = refine(mid) else { break };
            let d = v - level;
            if d == 0.0 {
                return Ok(mid);
            }
            if d.signum() == dlo.signum() {
                lo = mid;
                dlo = d;
            } else {
                hi = mid;
            }
        }
        return Ok(0.5 * (lo + hi));
    }
    Err(Error::NoSignChange)
}

/// Scans `metric` on the superposition and locates its first crossing of the classical level.
pub fn scan_threshold(template: &SuperpositionSpec, alpha_grid: &[f64], metric: Metric) -> Result<f64> {
    let rows = scan(template, alpha_grid, metric, &[Component::Superposition]);
    let table: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.value.as_ref().ok().map(|v| (r.alpha, *v))).collect();
    find_threshold(&table, metric.classical_level(), |a| {
        template.with_alpha(Complex64::new(a, 0.0)).build(Component::Superposition).and_then(|s| metric.evaluate(&s))
    })
}
