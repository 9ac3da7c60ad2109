//! Parsing of command-line values: complex literals, `min:max:step` ranges and model selection.

use std::fmt;
use std::str::FromStr;

use nlcs_core::expr::{compile_expr, DEFAULT_PROBE_MAX};
use nlcs_core::models::{gp_su11_f, harmonious_f, trapped_ion_f_with_cap, GpParams, IonParams};
use nlcs_core::state::{TruncationPolicy, DEFAULT_HARD_CAP};
use nlcs_core::{Complex64, NonlinearityFunction};

/// Environment variable overriding the truncation hard cap.
pub const HARD_CAP_ENV: &str = "NLCS_HARD_CAP";

/// Parses `0.5`, `0.5+0.2i`, `-1e-3-2i`, `2i`, `-i`.
pub fn parse_complex(src: &str) -> Result<Complex64, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex literal {src:?}, expected a+bi");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // split before the last sign that is not part of an exponent
    let split = body
        .char_indices()
        .filter(|&(i, c)| (c == '+' || c == '-') && i > 0 && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Inclusive grid `min:max:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Range {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if step <= 0.0 {
            return Err(format!("range step must be positive, got {step}"));
        }
        if min > max {
            return Err(format!("range must be well-ordered, got {min} > {max}"));
        }
        Ok(Range { min, max, step })
    }

    pub fn points(&self) -> Vec<f64> {
        nlcs_core::wigner::GridRanges::axis(self.min, self.max, self.step)
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, step] = parts.as_slice() else {
            return Err(format!("invalid range {s:?}, expected min:max:step"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid number {t:?} in range {s:?}"));
        Range::new(num(min)?, num(max)?, num(step)?)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Identity,
    Hs,
    Gp,
    Ion,
    Expr,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Identity => "identity",
            ModelKind::Hs => "hs",
            ModelKind::Gp => "gp",
            ModelKind::Ion => "ion",
            ModelKind::Expr => "expr",
        }
    }
}

/// A model with all its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub kappa: Option<f64>,
    pub eta: Option<f64>,
    pub f_expr: Option<String>,
    pub radius: Option<f64>,
}

impl ModelSpec {
    pub fn simple(kind: ModelKind) -> Self {
        ModelSpec { kind, kappa: None, eta: None, f_expr: None, radius: None }
    }

    pub fn gp(kappa: f64) -> Self {
        ModelSpec { kappa: Some(kappa), ..Self::simple(ModelKind::Gp) }
    }

    pub fn ion(eta: f64) -> Self {
        ModelSpec { eta: Some(eta), ..Self::simple(ModelKind::Ion) }
    }

    /// Builds `f(n)`; messages name the offending flag.
    pub fn build(&self, hard_cap: usize) -> Result<NonlinearityFunction, String> {
        let f = match self.kind {
            ModelKind::Identity => NonlinearityFunction::identity(),
            ModelKind::Hs => harmonious_f(),
            ModelKind::Gp => {
                let kappa = self.kappa.ok_or("--kappa is required for --model gp")?;
                gp_su11_f(GpParams::new(kappa).map_err(|e| format!("--kappa: {e}"))?)
            }
            ModelKind::Ion => {
                let eta = self.eta.ok_or("--eta is required for --model ion")?;
                trapped_ion_f_with_cap(IonParams::new(eta).map_err(|e| format!("--eta: {e}"))?, hard_cap)
            }
            ModelKind::Expr => {
                let src = self.f_expr.as_deref().ok_or("--f-expr is required for --model expr")?;
                compile_expr(src, DEFAULT_PROBE_MAX.min(hard_cap).max(1)).map_err(|e| format!("--f-expr: {e}"))?
            }
        };
        match self.radius {
            Some(r) if !(r > 0.0) => Err(format!("--radius must be positive, got {r}")),
            Some(r) => Ok(f.with_convergence_radius(r)),
            None => Ok(f),
        }
    }
}

/// Hard cap from `NLCS_HARD_CAP`, or the library default.
pub fn hard_cap_from_env() -> Result<usize, String> {
    match std::env::var(HARD_CAP_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(cap),
            _ => Err(format!("{HARD_CAP_ENV} must be a positive integer, got {v:?}")),
        },
        Err(_) => Ok(DEFAULT_HARD_CAP),
    }
}

/// Truncation for `f`, optionally pinned to a fixed `n_max`.
pub fn truncation(f: &NonlinearityFunction, n_max: Option<usize>, hard_cap: usize) -> TruncationPolicy {
    match n_max {
        Some(n) => TruncationPolicy::fixed(n),
        None => f.default_truncation(),
    }
    .with_hard_cap(hard_cap)
}
