//! Factorials and Gamma in log form.

/// `ln n!`, exact summation below 32 and `lgamma` above.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 32 {
        (2..=n).map(|k| libm::log(k as f64)).sum()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}
