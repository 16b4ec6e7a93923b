//! Optimal phase placement for the Weyl class.
//!
//! The program minimises `sum_{i<k} 1 / sin(pi t_ik)` over sorted phases
//! `rho_1 <= ... <= rho_K` in `[0, 1]` and slacks `t_ik`, subject to
//!
//! ```text
//! c_ik = t_ik + rho_i - rho_k       <= 0
//! d_ik = t_ik - 1 - rho_i + rho_k   <= 0
//! e_i  = rho_i - rho_{i+1}          <= 0
//! g_1  = -rho_1                     <= 0
//! g_K  = rho_K - 1                  <= 0
//! h_ik = -t_ik                      <= 0
//! ```
//!
//! The objective and constraints are convex, so the equispaced placement
//! `rho_i = gamma + (i-1)/K` is certified globally optimal by exhibiting
//! multipliers satisfying the KKT system; [`kkt_residual`] checks that
//! system numerically.
//!
//! The decision vector is `x = (rho_1..rho_K, t_12, t_13, .., t_1K, t_23, .., t_{K-1,K})`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// `min(|a - b|, 1 - |a - b|)` for phases in `[0, 1)`.
pub fn circle_distance(rho_i: f64, rho_k: f64) -> f64 {
    let diff = (rho_i - rho_k).abs();
    diff.min(1.0 - diff)
}

/// Position of pair `(i, k)`, `i < k`, zero-based, in the packed upper triangle.
#[inline]
pub fn pair_index(i: usize, k: usize, n_users: usize) -> usize {
    debug_assert!(i < k && k < n_users);
    i * (2 * n_users - i - 1) / 2 + (k - i - 1)
}

fn pair_count(n_users: usize) -> usize {
    n_users * n_users.saturating_sub(1) / 2
}

fn pairs(n_users: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n_users).flat_map(move |i| ((i + 1)..n_users).map(move |k| (i, k)))
}

/// A sorted placement of K phases.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment {
    pub rhos: Vec<f64>,
    /// Offset of the first phase.
    pub gamma: f64,
}

impl PhaseAssignment {
    pub fn n_users(&self) -> usize {
        self.rhos.len()
    }
}

/// Strictly upper-triangular slack values `t_ik`, packed row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackMatrix {
    n_users: usize,
    values: Vec<f64>,
}

impl SlackMatrix {
    pub fn from_fn(n_users: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let values = pairs(n_users).map(|(i, k)| f(i, k)).collect();
        Self { n_users, values }
    }

    /// Slacks equal to the circle distances of `rhos`.
    pub fn binding(rhos: &[f64]) -> Self {
        Self::from_fn(rhos.len(), |i, k| circle_distance(rhos[i], rhos[k]))
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[pair_index(i, k, self.n_users)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }
}

/// Objective `sum_{i<k} 1 / sin(pi d(rho_i, rho_k))`. Coincident phases make it
/// `+inf`.
pub fn objective(rhos: &[f64]) -> f64 {
    let terms = pairs(rhos.len()).map(|(i, k)| {
        let s = (PI * circle_distance(rhos[i], rhos[k])).sin();
        if s > 0.0 {
            1.0 / s
        } else {
            f64::INFINITY
        }
    });
    let mut acc = Vec::with_capacity(pair_count(rhos.len()));
    for t in terms {
        if t.is_infinite() {
            return f64::INFINITY;
        }
        acc.push(t);
    }
    compensated_sum(acc)
}

/// Same objective counted over ordered pairs `i != k`; exactly twice [`objective`].
pub fn ordered_pair_objective(rhos: &[f64]) -> f64 {
    let k = rhos.len();
    let mut acc = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let s = (PI * circle_distance(rhos[i], rhos[j])).sin();
            if s <= 0.0 {
                return f64::INFINITY;
            }
            acc.push(1.0 / s);
        }
    }
    compensated_sum(acc)
}

/// Objective of the slack form, `sum 1 / sin(pi t_ik)`.
pub fn slack_objective(t: &SlackMatrix) -> f64 {
    compensated_sum(t.values.iter().map(|&v| 1.0 / (PI * v).sin()))
}

/// Closed-form global optimum: equispaced phases `gamma + (i-1)/K (mod 1)`,
/// sorted, with slacks at their binding values.
///
/// The returned `gamma` is the effective offset `gamma mod 1/K`, i.e. the
/// smallest phase, which keeps `rho_1 >= 0` and `rho_K <= 1`.
pub fn global_solution(n_users: usize, gamma: f64) -> Result<(PhaseAssignment, SlackMatrix)> {
    if n_users < 2 {
        return Err(Error::TooFewUsers { k: n_users, min: 2 });
    }
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    let kf = n_users as f64;
    let mut rhos: Vec<f64> = (0..n_users)
        .map(|i| (gamma + i as f64 / kf).rem_euclid(1.0))
        .collect();
    rhos.sort_by(f64::total_cmp);
    let t = SlackMatrix::binding(&rhos);
    let gamma = rhos[0];
    Ok((PhaseAssignment { rhos, gamma }, t))
}

/// Slack value prescribed for index gap `m`: `min(m/K, 1 - m/K)`.
pub fn optimal_slack(gap: usize, n_users: usize) -> f64 {
    let r = gap as f64 / n_users as f64;
    r.min(1.0 - r)
}

/// `alpha(t) = pi cos(pi t) / sin^2(pi t)`, minus the derivative of `1/sin(pi t)`.
pub fn alpha(t: f64) -> f64 {
    let s = (PI * t).sin();
    PI * (PI * t).cos() / (s * s)
}

/// `alpha` evaluated at the optimal slack for index gap `m`.
pub fn alpha_tilde(gap: usize, n_users: usize) -> f64 {
    alpha(optimal_slack(gap, n_users))
}

/// Lagrange multipliers for the constraint families `c, d, e, g_1, g_K, h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeMultipliers {
    pub lambda: SlackMatrix,
    pub mu: SlackMatrix,
    pub nu: Vec<f64>,
    pub xi_1: f64,
    pub xi_k: f64,
    pub o: SlackMatrix,
}

/// Multipliers certifying the equispaced optimum.
///
/// `nu`, `o`, `xi_1`, `xi_K` vanish. For a pair with index gap `m = k - i`,
/// `lambda = alpha~(m)` when `m < K/2` and `mu = alpha~(m)` when `m > K/2`;
/// for even `K` and `m = K/2` both constraints bind and the weight splits in
/// half.
pub fn construct_multipliers(solution: &PhaseAssignment) -> LagrangeMultipliers {
    let k_users = solution.n_users();
    let zero = SlackMatrix::from_fn(k_users, |_, _| 0.0);
    let split = |i: usize, k: usize, upper: bool| -> f64 {
        let gap = k - i;
        let a = alpha_tilde(gap, k_users);
        match (2 * gap).cmp(&k_users) {
            std::cmp::Ordering::Less => {
                if upper {
                    a
                } else {
                    0.0
                }
            }
            std::cmp::Ordering::Equal => a / 2.0,
            std::cmp::Ordering::Greater => {
                if upper {
                    0.0
                } else {
                    a
                }
            }
        }
    };
    LagrangeMultipliers {
        lambda: SlackMatrix::from_fn(k_users, |i, k| split(i, k, true)),
        mu: SlackMatrix::from_fn(k_users, |i, k| split(i, k, false)),
        nu: vec![0.0; k_users.saturating_sub(1)],
        xi_1: 0.0,
        xi_k: 0.0,
        o: zero,
    }
}

/// Constraint values `(c, d, e, g_1, g_K, h)` at `(rhos, t)`.
struct Constraints {
    c: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
    g_1: f64,
    g_k: f64,
    h: Vec<f64>,
}

fn constraints(rhos: &[f64], t: &SlackMatrix) -> Constraints {
    let k = rhos.len();
    Constraints {
        c: pairs(k)
            .map(|(i, j)| t.get(i, j) + rhos[i] - rhos[j])
            .collect(),
        d: pairs(k)
            .map(|(i, j)| t.get(i, j) - 1.0 - rhos[i] + rhos[j])
            .collect(),
        e: rhos.windows(2).map(|w| w[0] - w[1]).collect(),
        g_1: -rhos[0],
        g_k: rhos[k - 1] - 1.0,
        h: t.values.iter().map(|v| -v).collect(),
    }
}

/// Gradient of the Lagrangian with respect to `x = (rho, t)`.
pub fn stationarity_vector(
    assignment: &PhaseAssignment,
    t: &SlackMatrix,
    m: &LagrangeMultipliers,
) -> Vec<f64> {
    let k = assignment.n_users();
    let np = pair_count(k);
    let mut grad = vec![0.0; k + np];
    for (i, j) in pairs(k) {
        let p = pair_index(i, j, k);
        let (lam, mu, o) = (m.lambda.get(i, j), m.mu.get(i, j), m.o.get(i, j));
        // grad f: d/dt 1/sin(pi t) = -alpha(t)
        grad[k + p] += -alpha(t.get(i, j)) + lam + mu - o;
        grad[i] += lam - mu;
        grad[j] += -lam + mu;
    }
    for (i, nu) in m.nu.iter().enumerate() {
        grad[i] += nu;
        grad[i + 1] -= nu;
    }
    grad[0] -= m.xi_1;
    grad[k - 1] += m.xi_k;
    grad
}

/// Breakdown of the KKT check. Every component is a max-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResidual {
    /// Stationarity, phase block (first K components).
    pub stationarity_phase: f64,
    /// Stationarity, slack block (last K(K-1)/2 components).
    pub stationarity_slack: f64,
    /// Largest `|multiplier * constraint|`.
    pub complementary_slackness: f64,
    /// Largest positive constraint value.
    pub primal_infeasibility: f64,
    /// Largest negative multiplier magnitude.
    pub dual_infeasibility: f64,
}

impl KktResidual {
    pub fn stationarity(&self) -> f64 {
        self.stationarity_phase.max(self.stationarity_slack)
    }

    /// Stationarity plus complementary slackness plus any feasibility violation.
    pub fn total(&self) -> f64 {
        self.stationarity()
            + self.complementary_slackness
            + self.primal_infeasibility
            + self.dual_infeasibility
    }
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn kkt_residual(
    assignment: &PhaseAssignment,
    t: &SlackMatrix,
    m: &LagrangeMultipliers,
) -> KktResidual {
    let k = assignment.n_users();
    let grad = stationarity_vector(assignment, t, m);
    let cons = constraints(&assignment.rhos, t);

    let products = cons
        .c
        .iter()
        .zip(m.lambda.values())
        .chain(cons.d.iter().zip(m.mu.values()))
        .chain(cons.e.iter().zip(&m.nu))
        .chain(std::iter::once((&cons.g_1, &m.xi_1)))
        .chain(std::iter::once((&cons.g_k, &m.xi_k)))
        .chain(cons.h.iter().zip(m.o.values()))
        .map(|(g, mult)| g * mult);

    let all_cons = cons
        .c
        .iter()
        .chain(&cons.d)
        .chain(&cons.e)
        .chain([&cons.g_1, &cons.g_k])
        .chain(&cons.h);
    let all_mults = m
        .lambda
        .values()
        .iter()
        .chain(m.mu.values())
        .chain(&m.nu)
        .chain([&m.xi_1, &m.xi_k])
        .chain(m.o.values());

    KktResidual {
        stationarity_phase: max_abs(grad[..k].iter().copied()),
        stationarity_slack: max_abs(grad[k..].iter().copied()),
        complementary_slackness: max_abs(products),
        primal_infeasibility: all_cons.fold(0.0, |acc: f64, &g| acc.max(g)),
        dual_infeasibility: all_mults.fold(0.0, |acc: f64, &v| acc.max(-v)),
    }
}

/// Outcome of the random-sampling falsification check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingReport {
    pub n_users: usize,
    pub samples: usize,
    pub optimum: f64,
    pub min_sampled: f64,
}

impl SamplingReport {
    /// No sample beat the closed-form optimum (to 1e-12).
    pub fn holds(&self) -> bool {
        self.optimum <= self.min_sampled + 1e-12
    }
}

/// Draws `samples` uniformly random sorted phase vectors and records the best
/// objective seen. Sample `s` uses ChaCha8 stream `s` under `seed`, so the
/// result does not depend on thread scheduling.
pub fn verify_optimality_by_sampling(
    n_users: usize,
    samples: usize,
    seed: u64,
) -> Result<SamplingReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let (opt, _) = global_solution(n_users, 0.0)?;
    let optimum = objective(&opt.rhos);
    let min_sampled = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let mut rhos: Vec<f64> = (0..n_users).map(|_| rng.random::<f64>()).collect();
            rhos.sort_by(f64::total_cmp);
            objective(&rhos)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(SamplingReport {
        n_users,
        samples,
        optimum,
        min_sampled,
    })
}
