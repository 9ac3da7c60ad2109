//! The deformation function `f(n)` of `A = a f(n)`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;


use crate::expr::Expr;
use crate::{Error, Result, TruncationPolicy};

/// Values at or below this are treated as zeros of `f`.
pub const DEGENERACY_FLOOR: f64 = 1e-300;

#[derive(Clone)]
pub(crate) enum Kind {
    Identity,
    Harmonious,
    /// `1/sqrt(n + 2 kappa - 1)`, stored as `2 kappa`.
    GilmorePerelomov { two_kappa: u32 },
    /// `f(1..=n_cap)` cached from the Laguerre scan.
    Tabulated(Arc<[f64]>),
    Expr(Arc<Expr>),
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

/// A real, positive nonlinearity function together with its domain metadata.
///
/// Values are only defined for `n >= 1`; `f(0)` never enters the coefficient
/// formulas because `[f(0)]!` is the empty product.
#[derive(Clone)]
pub struct NonlinearityFunction {
    kind: Kind,
    label: String,
    convergence_radius: f64,
    n_cap: Option<usize>,
}

impl NonlinearityFunction {
    pub(crate) fn new(kind: Kind, label: String, convergence_radius: f64, n_cap: Option<usize>) -> Self {
        NonlinearityFunction { kind, label, convergence_radius, n_cap }
    }

    /// `f = 1`: the standard Glauber coherent state.
    pub fn identity() -> Self {
        Self::new(Kind::Identity, "identity".into(), f64::INFINITY, None)
    }

    /// Wraps an arbitrary closure. `convergence_radius` may be `f64::INFINITY`.
    pub fn from_fn<F>(label: &str, convergence_radius: f64, n_cap: Option<usize>, f: F) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self::new(Kind::Custom(Arc::new(f)), label.into(), convergence_radius, n_cap)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn convergence_radius(&self) -> f64 {
        self.convergence_radius
    }

    pub fn n_cap(&self) -> Option<usize> {
        self.n_cap
    }

    pub fn with_convergence_radius(mut self, radius: f64) -> Self {
        self.convergence_radius = radius;
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    /// Fixed `min(50, n_cap)` terms for tabulated models, adaptive otherwise.
    pub fn default_truncation(&self) -> TruncationPolicy {
        match self.kind {
            Kind::Tabulated(_) => TruncationPolicy::for_capped(self),
            _ => TruncationPolicy::default(),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    /// `f(n)` for `n >= 1`, rejecting zeros, non-finite values and indices past the cap.
    pub fn eval(&self, n: usize) -> Result<f64> {
        if n == 0 || self.n_cap.is_some_and(|cap| n > cap) {
            return Err(Error::DegenerateNonlinearity { n, value: f64::NAN });
        }
        let value = match &self.kind {
            Kind::Identity => 1.0,
            Kind::Harmonious => 1.0 / (n as f64).sqrt(),
            Kind::GilmorePerelomov { two_kappa } => 1.0 / ((n + *two_kappa as usize - 1) as f64).sqrt(),
            Kind::Tabulated(values) => values.get(n - 1).copied().unwrap_or(f64::NAN),
            Kind::Expr(e) => e.eval(n as f64).unwrap_or(f64::NAN),
            Kind::Custom(f) => f(n),
        };
        if value.is_finite() && value > DEGENERACY_FLOOR {
            Ok(value)
        } else {
            Err(Error::DegenerateNonlinearity { n, value })
        }
    }

    /// `ln [f(k)]!` for `k = 0..=n_max`.
    pub fn factorial_logs(&self, n_max: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut acc = 0.0;
        out.push(acc);
        for k in 1..=n_max {
            acc += self.eval(k)?.ln();
            out.push(acc);
        }
        Ok(out)
    }
}

impl fmt::Debug for NonlinearityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonlinearityFunction")
            .field("label", &self.label)
            .field("convergence_radius", &self.convergence_radius)
            .field("n_cap", &self.n_cap)
            .finish_non_exhaustive()
    }
}

/// `ln [f(n)]! = sum_{k=1..n} ln f(k)`, with `[f(0)]! = 1`.
pub fn f_factorial_log(f: &NonlinearityFunction, n: usize) -> Result<f64> {
    (1..=n).try_fold(0.0, |acc, k| Ok(acc + f.eval(k)?.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::harmonious_f;

    #[test]
    fn empty_product_is_one() {
        assert_eq!(f_factorial_log(&harmonious_f(), 0).unwrap(), 0.0);
        assert_eq!(f_factorial_log(&NonlinearityFunction::identity(), 5).unwrap(), 0.0);
    }

    #[test]
    fn harmonious_three() {
        let v = f_factorial_log(&harmonious_f(), 3).unwrap();
        assert!((v - (1.0 / 6f64.sqrt()).ln()).abs() < 1e-15);
        assert!((v + 0.895880).abs() < 1e-6);
    }

    #[test]
    fn zero_in_range_is_degenerate() {
        let f = NonlinearityFunction::from_fn("kink", f64::INFINITY, None, |n| if n == 3 { 0.0 } else { 1.0 });
        assert_eq!(f_factorial_log(&f, 2).unwrap(), 0.0);
        assert!(matches!(f_factorial_log(&f, 4), Err(Error::DegenerateNonlinearity { n: 3, .. })));
    }

    #[test]
    fn cap_is_enforced() {
        let f = NonlinearityFunction::from_fn("capped", 1.0, Some(4), |_| 1.0);
        assert!(f.eval(4).is_ok());
        assert!(f.eval(5).is_err());
        assert!(f.eval(0).is_err());
    }

    #[test]
    fn cumulative_logs_match_pointwise() {
        let f = harmonious_f();
        let logs = f.factorial_logs(10).unwrap();
        for (n, l) in logs.iter().enumerate() {
            assert!((l - f_factorial_log(&f, n).unwrap()).abs() < 1e-14);
        }
    }
}
