//! Aperiodic, periodic and odd correlation functions.
//!
//! Lags follow 1-indexed chips: for `0 <= l < N`,
//! `C(l) = sum_{n=1}^{N-l} conj(x[n+l]) * y[n]`; for `1-N <= l < 0`,
//! `C(l) = sum_{n=1}^{N+l} conj(x[n]) * y[n-l]`; otherwise `C(l) = 0`.
//! Here `x` is the reference user `i` and `y` the interferer `k`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::assignment::circle_distance;
use crate::error::{Error, Result};
use crate::sum::{compensated_complex_sum, compensated_sum};

/// Phase differences closer than this to an integer are treated as coincident.
pub const DEGENERATE_PHASE_TOL: f64 = 1e-12;

fn check_lengths(x: &[Complex64], y: &[Complex64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(x.len())
}

/// Unchecked kernel; callers guarantee equal, non-zero lengths.
pub(crate) fn aperiodic_c_raw(x: &[Complex64], y: &[Complex64], lag: i64) -> Complex64 {
    let n = x.len() as i64;
    if lag.abs() >= n {
        return Complex64::new(0.0, 0.0);
    }
    if lag >= 0 {
        let l = lag as usize;
        compensated_complex_sum(x[l..].iter().zip(y).map(|(a, b)| a.conj() * b))
    } else {
        let l = (-lag) as usize;
        compensated_complex_sum(x.iter().zip(&y[l..]).map(|(a, b)| a.conj() * b))
    }
}

/// Aperiodic partial correlation `C_{i,k}(lag)` of `x` (user i) against `y` (user k).
pub fn aperiodic_c(
    x: impl AsRef<[Complex64]>,
    y: impl AsRef<[Complex64]>,
    lag: i64,
) -> Result<Complex64> {
    let (x, y) = (x.as_ref(), y.as_ref());
    check_lengths(x, y)?;
    Ok(aperiodic_c_raw(x, y, lag))
}

fn check_lag(lag: i64, n: usize) -> Result<()> {
    if lag < 0 || lag >= n as i64 {
        return Err(Error::LagOutOfRange { lag, n });
    }
    Ok(())
}

/// `theta(l) = C(l) + C(l - N)` for `0 <= l < N`.
pub fn periodic_theta(
    x: impl AsRef<[Complex64]>,
    y: impl AsRef<[Complex64]>,
    lag: i64,
) -> Result<Complex64> {
    let (x, y) = (x.as_ref(), y.as_ref());
    let n = check_lengths(x, y)?;
    check_lag(lag, n)?;
    Ok(aperiodic_c_raw(x, y, lag) + aperiodic_c_raw(x, y, lag - n as i64))
}

/// `theta_hat(l) = C(l) - C(l - N)` for `0 <= l < N`.
pub fn odd_theta_hat(
    x: impl AsRef<[Complex64]>,
    y: impl AsRef<[Complex64]>,
    lag: i64,
) -> Result<Complex64> {
    let (x, y) = (x.as_ref(), y.as_ref());
    let n = check_lengths(x, y)?;
    check_lag(lag, n)?;
    Ok(aperiodic_c_raw(x, y, lag) - aperiodic_c_raw(x, y, lag - n as i64))
}

fn phase_sine(rho_i: f64, rho_k: f64) -> f64 {
    (PI * (rho_k - rho_i)).sin().abs()
}

/// `|C_{i,k}(l)| = |sin(pi (N-l)(rho_k - rho_i)) / sin(pi (rho_k - rho_i))|` for Weyl
/// sequences with increments `rho_i`, `rho_k` and `0 <= l < N`.
///
/// When the phases coincide the quotient has a removable singularity; the
/// limit `N - l` is returned inside [`Error::DegeneratePhase`].
pub fn weyl_c_closed_form(rho_i: f64, rho_k: f64, lag: i64, n: usize) -> Result<f64> {
    check_lag(lag, n)?;
    let span = (n as i64 - lag) as f64;
    let denom = phase_sine(rho_i, rho_k);
    if denom < DEGENERATE_PHASE_TOL {
        return Err(Error::DegeneratePhase { limit: span });
    }
    Ok((PI * span * (rho_k - rho_i)).sin().abs() / denom)
}

/// `1 / |sin(pi (rho_i - rho_k))|`, the lag-independent bound on `|C|`.
pub fn cross_bound(rho_i: f64, rho_k: f64) -> Result<f64> {
    let s = (PI * circle_distance(rho_i.rem_euclid(1.0), rho_k.rem_euclid(1.0))).sin();
    if s < DEGENERATE_PHASE_TOL {
        return Err(Error::DegeneratePhase {
            limit: f64::INFINITY,
        });
    }
    Ok(1.0 / s)
}

/// Six-term lag sum entering the Pursley SNR:
///
/// `r = sum_{l=0}^{N-1} |C(l-N)|^2 + Re[C(l-N) conj C(l-N+1)] + |C(l-N+1)|^2
///      + |C(l)|^2 + Re[C(l) conj C(l+1)] + |C(l+1)|^2`.
pub fn r_ik(x: impl AsRef<[Complex64]>, y: impl AsRef<[Complex64]>) -> Result<f64> {
    let (x, y) = (x.as_ref(), y.as_ref());
    let n = check_lengths(x, y)? as i64;
    // C(l) for l in -N..=N
    let c: Vec<Complex64> = (-n..=n).map(|l| aperiodic_c_raw(x, y, l)).collect();
    let at = |l: i64| c[(l + n) as usize];
    Ok(compensated_sum((0..n).map(|l| {
        let (a, b) = (at(l - n), at(l - n + 1));
        let (p, q) = (at(l), at(l + 1));
        a.norm_sqr()
            + (a * b.conj()).re
            + b.norm_sqr()
            + p.norm_sqr()
            + (p * q.conj()).re
            + q.norm_sqr()
    })))
}

/// All correlation functions of one ordered pair, tabulated over lags.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    pub n_chips: usize,
    /// `C(l)` for `l = 1-N ..= N-1`, in order.
    pub c_values: Vec<Complex64>,
    /// `theta(l)` for `l = 0..N`.
    pub theta: Vec<Complex64>,
    /// `theta_hat(l)` for `l = 0..N`.
    pub theta_hat: Vec<Complex64>,
}

impl CorrelationProfile {
    /// `C(lag)`, zero outside `|lag| < N`.
    pub fn c(&self, lag: i64) -> Complex64 {
        let n = self.n_chips as i64;
        if lag.abs() >= n {
            Complex64::new(0.0, 0.0)
        } else {
            self.c_values[(lag + n - 1) as usize]
        }
    }

    pub fn lags(&self) -> std::ops::RangeInclusive<i64> {
        let n = self.n_chips as i64;
        (1 - n)..=(n - 1)
    }
}

pub fn correlation_profile(
    x: impl AsRef<[Complex64]>,
    y: impl AsRef<[Complex64]>,
) -> Result<CorrelationProfile> {
    let (x, y) = (x.as_ref(), y.as_ref());
    let n = check_lengths(x, y)?;
    let ni = n as i64;
    let c_values: Vec<_> = ((1 - ni)..ni).map(|l| aperiodic_c_raw(x, y, l)).collect();
    let c = |l: i64| {
        if l.abs() >= ni {
            Complex64::new(0.0, 0.0)
        } else {
            c_values[(l + ni - 1) as usize]
        }
    };
    let theta = (0..ni).map(|l| c(l) + c(l - ni)).collect();
    let theta_hat = (0..ni).map(|l| c(l) - c(l - ni)).collect();
    Ok(CorrelationProfile {
        n_chips: n,
        c_values,
        theta,
        theta_hat,
    })
}
