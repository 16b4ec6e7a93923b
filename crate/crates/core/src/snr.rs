//! Analytic SNR for asynchronous BPSK CDMA.
//!
//! The general (Pursley) form is `SNR_i = {(6N^3)^-1 sum_{k != i} r_ik + N0/(2E)}^-1/2`.
//! For the `K_max = N` Weyl family `exp(2 pi j n (gamma + sigma/N))` with slots
//! drawn uniformly, the interference term averages to
//!
//! ```text
//! R_i = (K-1)/(18 N^2) * {2(N+1) + (N-2) cos(2 pi (gamma + sigma_i/N))}
//! ```
//!
//! That average is exact when `K = N` (every slot is occupied) and an
//! approximation otherwise; it is most accurate when `K/N` is close to one.

use std::f64::consts::PI;

use crate::correlation::r_ik;
use crate::error::{Error, Result};
use crate::sequence::ChipSequence;
use crate::sum::compensated_sum;

/// Decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Energy-per-bit to noise ratio plus system dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// `E/N0`, linear. `f64::INFINITY` means a noiseless channel.
    pub e_over_n0: f64,
    pub n_chips: usize,
    pub n_users: usize,
}

impl LinkBudget {
    pub fn new(e_over_n0: f64, n_chips: usize, n_users: usize) -> Result<Self> {
        if e_over_n0.is_nan() || e_over_n0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "E/N0 must be positive, got {e_over_n0}"
            )));
        }
        if n_chips < 2 {
            return Err(Error::InvalidParameter(format!(
                "need N >= 2, got {n_chips}"
            )));
        }
        if n_users == 0 {
            return Err(Error::TooFewUsers { k: 0, min: 1 });
        }
        Ok(Self {
            e_over_n0,
            n_chips,
            n_users,
        })
    }

    pub fn from_db(e_over_n0_db: f64, n_chips: usize, n_users: usize) -> Result<Self> {
        Self::new(db_to_linear(e_over_n0_db), n_chips, n_users)
    }

    /// Noise term `N0 / (2E)`.
    pub fn noise_term(&self) -> f64 {
        0.5 / self.e_over_n0
    }
}

/// `SNR_i` from the lag sums `r_ik` of user `user_i` against every other member.
pub fn pursley_snr(user_i: usize, family: &[ChipSequence], budget: &LinkBudget) -> Result<f64> {
    if user_i >= family.len() {
        return Err(Error::InvalidParameter(format!(
            "user {user_i} outside family of {}",
            family.len()
        )));
    }
    let n = budget.n_chips;
    if let Some(bad) = family.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch {
            left: n,
            right: bad.len(),
        });
    }
    let sum = compensated_sum(
        family
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != user_i)
            .map(|(_, s)| r_ik(&family[user_i], s))
            .collect::<Result<Vec<_>>>()?,
    );
    let nf = n as f64;
    Ok((sum / (6.0 * nf * nf * nf) + budget.noise_term()).powf(-0.5))
}

fn slot_cos(sigma: usize, gamma: f64, n: usize) -> f64 {
    (2.0 * PI * (gamma + sigma as f64 / n as f64)).cos()
}

/// `R_i` for the `K_max = N` Weyl family.
pub fn weyl_interference_term(sigma_i: usize, gamma: f64, n_users: usize, n_chips: usize) -> f64 {
    let (k, n) = (n_users as f64, n_chips as f64);
    (k - 1.0) / (18.0 * n * n) * (2.0 * (n + 1.0) + (n - 2.0) * slot_cos(sigma_i, gamma, n_chips))
}

/// `{R_i + N0/(2E)}^-1/2` using `budget.n_users` and `budget.n_chips`.
pub fn expected_weyl_snr(sigma_i: usize, gamma: f64, budget: &LinkBudget) -> Result<f64> {
    if sigma_i >= budget.n_chips {
        return Err(Error::InvalidSlot {
            sigma: sigma_i,
            k_max: budget.n_chips,
        });
    }
    let r = weyl_interference_term(sigma_i, gamma, budget.n_users, budget.n_chips);
    Ok((r + budget.noise_term()).powf(-0.5))
}

/// Worst case over the cosine: `{(K-1)/(6N) + N0/(2E)}^-1/2`.
pub fn snr_lower_bound(budget: &LinkBudget) -> f64 {
    let (k, n) = (budget.n_users as f64, budget.n_chips as f64);
    ((k - 1.0) / (6.0 * n) + budget.noise_term()).powf(-0.5)
}

/// `sum_{k=1}^{n-1} 1 / sin^2(pi k / n)` by direct summation; equals `(n^2 - 1)/3`.
pub fn csc2_sum(n: usize) -> f64 {
    assert!(n >= 2, "csc2_sum needs n >= 2");
    let nf = n as f64;
    compensated_sum((1..n).map(|k| {
        let s = (PI * k as f64 / nf).sin();
        1.0 / (s * s)
    }))
}

/// `sum_{q=1}^{n-1} cot(pi q / n)`, which vanishes by symmetry.
pub fn cot_sum(n: usize) -> f64 {
    let nf = n as f64;
    compensated_sum((1..n).map(|q| {
        let a = PI * q as f64 / nf;
        a.cos() / a.sin()
    }))
}

/// Closed-form `r_ik` for two members of the `K_max = N` Weyl family:
///
/// `N {4 + cos(2 pi (gamma + sigma_k/N)) + cos(2 pi (gamma + sigma_i/N))} / (1 - cos(2 pi (sigma_k - sigma_i)/N))`.
pub fn r_ik_closed(sigma_i: usize, sigma_k: usize, gamma: f64, n_chips: usize) -> Result<f64> {
    if sigma_i == sigma_k {
        return Err(Error::DuplicateSlots);
    }
    let n = n_chips as f64;
    let gap = sigma_k as f64 - sigma_i as f64;
    let denom = 1.0 - (2.0 * PI * gap / n).cos();
    Ok(n * (4.0 + slot_cos(sigma_k, gamma, n_chips) + slot_cos(sigma_i, gamma, n_chips)) / denom)
}

/// Expectation of `sum_{k != i} r_ik` over uniformly drawn distinct slots,
/// split into the constant and cosine parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedRSum {
    /// `E[sum 4N / (1 - cos)]`.
    pub constant: f64,
    /// `E[sum N (cos_k + cos_i) / (1 - cos)]`.
    pub cosine: f64,
}

impl ExpectedRSum {
    pub fn total(&self) -> f64 {
        self.constant + self.cosine
    }
}

/// Closed form: `2N(N+1)(K-1)/3` and `N(N-2)(K-1)/3 * cos(2 pi (gamma + sigma_i/N))`.
pub fn expected_r_sum(sigma_i: usize, gamma: f64, n_users: usize, n_chips: usize) -> ExpectedRSum {
    let (k, n) = (n_users as f64, n_chips as f64);
    ExpectedRSum {
        constant: 2.0 * n * (n + 1.0) * (k - 1.0) / 3.0,
        cosine: n * (n - 2.0) * (k - 1.0) / 3.0 * slot_cos(sigma_i, gamma, n_chips),
    }
}

/// The same expectation as an explicit weighted sum over offsets
/// `q = 1..N`, each interferer sitting at `sigma_i + q mod N` with
/// probability `1/(N-1)`.
pub fn expected_r_sum_by_enumeration(
    sigma_i: usize,
    gamma: f64,
    n_users: usize,
    n_chips: usize,
) -> ExpectedRSum {
    let n = n_chips as f64;
    let weight = (n_users as f64 - 1.0) / (n - 1.0);
    let ci = slot_cos(sigma_i, gamma, n_chips);
    let mut constant = Vec::with_capacity(n_chips);
    let mut cosine = Vec::with_capacity(n_chips);
    for q in 1..n_chips {
        let sk = (sigma_i + q) % n_chips;
        let denom = 1.0 - (2.0 * PI * q as f64 / n).cos();
        constant.push(4.0 * n / denom);
        cosine.push(n * (slot_cos(sk, gamma, n_chips) + ci) / denom);
    }
    ExpectedRSum {
        constant: weight * compensated_sum(constant),
        cosine: weight * compensated_sum(cosine),
    }
}
