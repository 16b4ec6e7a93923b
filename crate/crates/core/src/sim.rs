//! Monte-Carlo simulation of asynchronous BPSK CDMA over AWGN.
//!
//! Chip duration is normalised to one, so a symbol lasts `N`. Each trial draws,
//! for every user `k`, a delay `tau_k ~ U[0, N)`, a carrier phase
//! `phi_k ~ U[0, 2 pi)`, the previous and current bits, and (depending on the
//! policy) a slot `sigma_k` selecting the user's sequence from the family's
//! pool. User `i` is demodulated coherently (`tau_i = 0`, `phi_i = 0`), and its
//! decision statistic is
//!
//! ```text
//! Z_i = b_{i,0} + (1/N) sum_{k != i} Re[I_ik(tau_k)] + g,   g ~ N(0, N0/(2E))
//! ```
//!
//! With this scaling `Var(Z_i - b_{i,0}) = (6 N^3)^-1 sum_k r_ik + N0/(2E)`,
//! which is exactly the Pursley SNR denominator.
//!
//! # Reproducibility
//!
//! Trial `u` draws from ChaCha8 stream `u` under the configured seed, so every
//! trial is independent of thread scheduling and chunking. Error counts are
//! integer sums; floating-point statistics are merged in trial order.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::correlation::aperiodic_c_raw;
use crate::error::{Error, Result};
use crate::gold::{gold_code_with_pair, GoldPair};
use crate::sequence::{
    fzc_family_sequence, optimal_weyl_sequence, vdc_assignment, ChipSequence, FzcParams, FzcTriple,
    OptimalWeylParams,
};
use crate::snr::db_to_linear;
use crate::stats::{wilson_interval, RunningStats, Z_95};

/// Trials per parallel work item.
const CHUNK: u64 = 2048;

/// Correlation tables larger than this many entries are not materialised.
const MAX_TABLE_ENTRIES: usize = 1 << 24;

/// Stream reserved for a run-level slot draw in [`SigmaMode::Fixed`].
const FIXED_SIGMA_STREAM: u64 = u64::MAX;

/// Which spreading-sequence family the users draw from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `exp(2 pi j n (gamma + sigma/k_max))` with `k_max` slots.
    Weyl { k_max: usize },
    /// The Weyl family with `k_max = K`: the closed-form optimum.
    Optimal,
    /// Extended FZC sequences; slots are the indices `1 <= M < N` coprime to `N`.
    Fzc { triple: FzcTriple },
    /// Degree-5 Gold codes (N = 31), 33 slots.
    Gold,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Weyl { .. } => "weyl",
            Family::Optimal => "optimal",
            Family::Fzc { .. } => "fzc",
            Family::Gold => "gold",
        }
    }
}

/// How the offset `gamma` is chosen; `HalfOverK` tracks `K` along a users sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaRule {
    Value(f64),
    /// `1 / (2N)`
    HalfOverN,
    /// `1 / (2K)`
    HalfOverK,
}

impl GammaRule {
    pub fn resolve(&self, n_users: usize, n_chips: usize) -> f64 {
        match *self {
            GammaRule::Value(g) => g,
            GammaRule::HalfOverN => 0.5 / n_chips as f64,
            GammaRule::HalfOverK => 0.5 / n_users as f64,
        }
    }
}

impl fmt::Display for GammaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaRule::Value(g) => write!(f, "{g}"),
            GammaRule::HalfOverN => f.write_str("1/(2N)"),
            GammaRule::HalfOverK => f.write_str("1/(2K)"),
        }
    }
}

/// Slot assignment policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentPolicy {
    /// `K` distinct slots sampled without replacement.
    RandomDistinct,
    /// `sigma_k = P * v_k` with `v` the Van der Corput sequence; the pool size
    /// `P` must be a power of two.
    VanDerCorput,
    /// `sigma_k = k - 1`.
    Sequential,
}

impl AssignmentPolicy {
    pub fn label(&self) -> &'static str {
        match self {
            AssignmentPolicy::RandomDistinct => "random",
            AssignmentPolicy::VanDerCorput => "vdc",
            AssignmentPolicy::Sequential => "sequential",
        }
    }
}

/// Whether random slots are redrawn every trial or once per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaMode {
    #[default]
    PerTrial,
    Fixed,
}

impl SigmaMode {
    pub fn label(&self) -> &'static str {
        match self {
            SigmaMode::PerTrial => "per-trial",
            SigmaMode::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_users: usize,
    pub n_chips: usize,
    /// Linear `E/N0`; `f64::INFINITY` disables noise.
    pub e_over_n0: f64,
    pub trials: u64,
    pub seed: u64,
    pub family: Family,
    pub policy: AssignmentPolicy,
    pub gamma: GammaRule,
    pub sigma_mode: SigmaMode,
}

impl SimConfig {
    /// A config with random per-trial slots and `gamma = 1/(2N)`.
    pub fn new(n_users: usize, n_chips: usize, e_over_n0_db: f64, family: Family) -> Self {
        Self {
            n_users,
            n_chips,
            e_over_n0: db_to_linear(e_over_n0_db),
            trials: 10_000,
            seed: 0,
            family,
            policy: AssignmentPolicy::RandomDistinct,
            gamma: GammaRule::HalfOverN,
            sigma_mode: SigmaMode::PerTrial,
        }
    }

    pub fn gamma_value(&self) -> f64 {
        self.gamma.resolve(self.n_users, self.n_chips)
    }

    /// Size of the sequence pool users are assigned from.
    pub fn pool_size(&self) -> usize {
        match self.family {
            Family::Weyl { k_max } => k_max,
            Family::Optimal => self.n_users,
            Family::Fzc { .. } => coprime_indices(self.n_chips).len(),
            Family::Gold => GoldPair::DEGREE_5.family_size(),
        }
    }

    /// Standard deviation of the additive noise sample, `sqrt(N0 / 2E)`.
    pub fn noise_std(&self) -> f64 {
        (0.5 / self.e_over_n0).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_users == 0 {
            return Err(Error::TooFewUsers { k: 0, min: 1 });
        }
        if self.n_chips < 2 {
            return bad(format!("N must be at least 2, got {}", self.n_chips));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.e_over_n0.is_nan() || self.e_over_n0 <= 0.0 {
            return bad(format!("E/N0 must be positive, got {}", self.e_over_n0));
        }
        if !self.gamma_value().is_finite() {
            return Err(Error::NonFinite("gamma"));
        }
        if let Family::Gold = self.family {
            if self.n_chips != GoldPair::DEGREE_5.period() {
                return bad(format!(
                    "Gold family is built for N = 31, got N = {}",
                    self.n_chips
                ));
            }
        }
        let pool = self.pool_size();
        if self.n_users > pool {
            return bad(format!(
                "{} users exceed the {pool} available slots",
                self.n_users
            ));
        }
        if self.policy == AssignmentPolicy::VanDerCorput {
            vdc_assignment(self.n_users, pool)?;
        }
        Ok(())
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integers `1 <= M < N` with `gcd(M, N) = 1`.
pub fn coprime_indices(n: usize) -> Vec<usize> {
    (1..n).filter(|&m| gcd(m, n) == 1).collect()
}

/// Source of aperiodic correlations `C(lag)` between two pool slots.
pub trait CrossCorrelation: Sync {
    fn n_chips(&self) -> usize;
    /// `C_{i,k}(lag)` where `slot_i` is the reference sequence.
    fn c(&self, slot_i: usize, slot_k: usize, lag: i64) -> Complex64;
}

impl CrossCorrelation for [ChipSequence] {
    fn n_chips(&self) -> usize {
        self.first().map_or(0, ChipSequence::len)
    }

    fn c(&self, slot_i: usize, slot_k: usize, lag: i64) -> Complex64 {
        aperiodic_c_raw(self[slot_i].chips(), self[slot_k].chips(), lag)
    }
}

impl CrossCorrelation for Vec<ChipSequence> {
    fn n_chips(&self) -> usize {
        self.as_slice().n_chips()
    }

    fn c(&self, slot_i: usize, slot_k: usize, lag: i64) -> Complex64 {
        self.as_slice().c(slot_i, slot_k, lag)
    }
}

/// Precomputed `C_{a,b}(l)` for every ordered pool pair and `l` in `-N..=N`.
#[derive(Debug, Clone)]
pub struct CorrelationTable {
    pool: usize,
    n: usize,
    values: Vec<Complex64>,
}

impl CorrelationTable {
    pub fn build(seqs: &[ChipSequence]) -> Self {
        let pool = seqs.len();
        let n = seqs.n_chips();
        let width = 2 * n + 1;
        let values = (0..pool * pool)
            .into_par_iter()
            .flat_map_iter(|ab| {
                let (a, b) = (ab / pool, ab % pool);
                (0..width).map(move |w| seqs.c(a, b, w as i64 - n as i64))
            })
            .collect();
        Self { pool, n, values }
    }
}

impl CrossCorrelation for CorrelationTable {
    fn n_chips(&self) -> usize {
        self.n
    }

    #[inline]
    fn c(&self, slot_i: usize, slot_k: usize, lag: i64) -> Complex64 {
        let n = self.n as i64;
        if lag.abs() > n {
            return Complex64::new(0.0, 0.0);
        }
        let width = 2 * self.n + 1;
        self.values[(slot_i * self.pool + slot_k) * width + (lag + n) as usize]
    }
}

/// The sequences of a family plus (when small enough) their correlation table.
#[derive(Debug, Clone)]
pub struct SequencePool {
    seqs: Vec<ChipSequence>,
    table: Option<CorrelationTable>,
}

impl SequencePool {
    pub fn for_config(config: &SimConfig) -> Result<Self> {
        let n = config.n_chips;
        let gamma = config.gamma_value();
        let weyl = |k_max: usize| -> Result<Vec<ChipSequence>> {
            (0..k_max)
                .map(|s| {
                    optimal_weyl_sequence(OptimalWeylParams {
                        gamma,
                        sigma_k: s,
                        k_max,
                        n_chips: n,
                    })
                })
                .collect()
        };
        let seqs = match config.family {
            Family::Weyl { k_max } => weyl(k_max)?,
            Family::Optimal => weyl(config.n_users)?,
            Family::Fzc { triple } => coprime_indices(n)
                .into_iter()
                .map(|m| {
                    fzc_family_sequence(FzcParams {
                        m_k: m as f64,
                        triple,
                        n_chips: n,
                    })
                })
                .collect::<Result<_>>()?,
            Family::Gold => (0..GoldPair::DEGREE_5.family_size())
                .map(|i| gold_code_with_pair(GoldPair::DEGREE_5, i))
                .collect::<Result<_>>()?,
        };
        Ok(Self::from_sequences(seqs))
    }

    pub fn from_sequences(seqs: Vec<ChipSequence>) -> Self {
        let entries = seqs.len() * seqs.len() * (2 * seqs.n_chips() + 1);
        let table = (entries <= MAX_TABLE_ENTRIES).then(|| CorrelationTable::build(&seqs));
        Self { seqs, table }
    }

    pub fn sequences(&self) -> &[ChipSequence] {
        &self.seqs
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn correlations(&self) -> &dyn CrossCorrelation {
        match &self.table {
            Some(t) => t,
            None => &self.seqs,
        }
    }
}

/// Random quantities of one trial, indexed by user.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    /// Delays in `[0, N)` (chip units).
    pub tau: Vec<f64>,
    /// Carrier phases in `[0, 2 pi)`.
    pub phi: Vec<f64>,
    pub bits_prev: Vec<f64>,
    pub bits_cur: Vec<f64>,
    /// Pool slot of each user.
    pub sigma: Vec<usize>,
}

impl TrialDraw {
    /// `l_k = floor(tau_k)`.
    pub fn chip_offset(&self, k: usize) -> i64 {
        self.tau[k].floor() as i64
    }

    pub fn n_users(&self) -> usize {
        self.tau.len()
    }

    /// Draws delays, phases and bits for `sigma.len()` users.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, n_chips: usize, sigma: Vec<usize>) -> Self {
        let k = sigma.len();
        let n = n_chips as f64;
        let mut tau: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * n).collect();
        // guard the half-open interval against rounding up to N
        for t in &mut tau {
            if *t >= n {
                *t = n.next_down();
            }
        }
        let phi = (0..k).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
        let mut bit = || if rng.random::<bool>() { 1.0 } else { -1.0 };
        let bits_prev = (0..k).map(|_| bit()).collect();
        let bits_cur = (0..k).map(|_| bit()).collect();
        Self {
            tau,
            phi,
            bits_prev,
            bits_cur,
            sigma,
        }
    }
}

/// Slots for `n_users` users from a pool of `pool` under `policy`.
pub fn assign_slots<R: Rng + ?Sized>(
    policy: AssignmentPolicy,
    n_users: usize,
    pool: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n_users > pool {
        return Err(Error::InvalidParameter(format!(
            "{n_users} users exceed the {pool} available slots"
        )));
    }
    match policy {
        AssignmentPolicy::RandomDistinct => Ok(index::sample(rng, pool, n_users).into_vec()),
        AssignmentPolicy::VanDerCorput => vdc_assignment(n_users, pool),
        AssignmentPolicy::Sequential => Ok((0..n_users).collect()),
    }
}

/// Interference of user `k` on reference user `i`:
///
/// ```text
/// I_ik = exp(j phi_k) [ (tau_k - l_k)     (b_{k,-1} C(l_k)   + b_{k,0} C(l_k - N))
///                     + (l_k + 1 - tau_k) (b_{k,-1} C(l_k+1) + b_{k,0} C(l_k + 1 - N)) ]
/// ```
pub fn interference<C: CrossCorrelation + ?Sized>(
    i: usize,
    k: usize,
    draw: &TrialDraw,
    corr: &C,
) -> Result<Complex64> {
    if i == k {
        return Err(Error::SameUser(i));
    }
    let n = corr.n_chips() as f64;
    if !(0.0..n).contains(&draw.tau[k]) {
        return Err(Error::InvalidParameter(format!(
            "delay {} outside [0, {n})",
            draw.tau[k]
        )));
    }
    Ok(interference_unchecked(i, k, draw, corr))
}

#[inline]
fn interference_unchecked<C: CrossCorrelation + ?Sized>(
    i: usize,
    k: usize,
    draw: &TrialDraw,
    corr: &C,
) -> Complex64 {
    let n = corr.n_chips() as i64;
    let (si, sk) = (draw.sigma[i], draw.sigma[k]);
    let l = draw.chip_offset(k);
    let frac = draw.tau[k] - l as f64;
    let (prev, cur) = (draw.bits_prev[k], draw.bits_cur[k]);
    let near = corr.c(si, sk, l) * prev + corr.c(si, sk, l - n) * cur;
    let far = corr.c(si, sk, l + 1) * prev + corr.c(si, sk, l + 1 - n) * cur;
    Complex64::cis(draw.phi[k]) * (near * frac + far * (1.0 - frac))
}

/// `sum_{k != i} Re[I_ik] / N`: multiple-access interference at user `i`'s
/// correlator output.
pub fn multiple_access_interference<C: CrossCorrelation + ?Sized>(
    i: usize,
    draw: &TrialDraw,
    corr: &C,
) -> f64 {
    let n = corr.n_chips() as f64;
    let mut acc = 0.0;
    for k in 0..draw.n_users() {
        if k != i {
            acc += interference_unchecked(i, k, draw, corr).re;
        }
    }
    acc / n
}

/// `Z_i = b_{i,0} + MAI_i + noise_std * noise`, with `noise` a standard normal sample.
pub fn decision_statistic<C: CrossCorrelation + ?Sized>(
    i: usize,
    draw: &TrialDraw,
    corr: &C,
    noise_std: f64,
    noise: f64,
) -> f64 {
    draw.bits_cur[i] + multiple_access_interference(i, draw, corr) + noise_std * noise
}

/// Sum over all ordered pairs `i != k` of `I_ik`.
pub fn aggregate_interference<C: CrossCorrelation + ?Sized>(
    draw: &TrialDraw,
    corr: &C,
) -> Complex64 {
    let k = draw.n_users();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                acc += interference_unchecked(i, j, draw, corr);
            }
        }
    }
    acc
}

/// Per-trial generator: ChaCha8 seeded with `seed`, stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Drives trials in fixed chunks and hands each trial's draw and noise samples
/// to `visit`, returning the per-chunk accumulators in order.
struct TrialEngine<'a> {
    config: &'a SimConfig,
    pool: SequencePool,
    fixed_sigma: Option<Vec<usize>>,
}

impl<'a> TrialEngine<'a> {
    fn new(config: &'a SimConfig) -> Result<Self> {
        config.validate()?;
        let pool = SequencePool::for_config(config)?;
        let fixed_sigma = match (config.policy, config.sigma_mode) {
            (AssignmentPolicy::RandomDistinct, SigmaMode::PerTrial) => None,
            (policy, _) => {
                let mut rng = trial_rng(config.seed, FIXED_SIGMA_STREAM);
                Some(assign_slots(policy, config.n_users, pool.len(), &mut rng)?)
            }
        };
        Ok(Self {
            config,
            pool,
            fixed_sigma,
        })
    }

    fn run<T, F>(&self, init: impl Fn() -> T + Sync, visit: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut T, &TrialDraw, &dyn CrossCorrelation, &[f64]) + Sync,
    {
        let cfg = self.config;
        let n_chunks = cfg.trials.div_ceil(CHUNK);
        let corr = self.pool.correlations();
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                let span: Range<u64> = c * CHUNK..((c + 1) * CHUNK).min(cfg.trials);
                let mut noise = vec![0.0; cfg.n_users];
                for trial in span {
                    let mut rng = trial_rng(cfg.seed, trial);
                    let sigma = match &self.fixed_sigma {
                        Some(s) => s.clone(),
                        None => index::sample(&mut rng, self.pool.len(), cfg.n_users).into_vec(),
                    };
                    let draw = TrialDraw::sample(&mut rng, cfg.n_chips, sigma);
                    for g in noise.iter_mut() {
                        *g = rng.sample(StandardNormal);
                    }
                    visit(&mut acc, &draw, corr, &noise);
                }
                acc
            })
            .collect()
    }
}

/// Aggregated bit-error counts of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct BerResult {
    /// Errors per user index.
    pub error_counts: Vec<u64>,
    /// Decisions per user (one per trial).
    pub bits_per_user: u64,
}

impl BerResult {
    pub fn per_user_ber(&self) -> Vec<f64> {
        self.error_counts
            .iter()
            .map(|&e| e as f64 / self.bits_per_user as f64)
            .collect()
    }

    pub fn total_errors(&self) -> u64 {
        self.error_counts.iter().sum()
    }

    pub fn total_bits(&self) -> u64 {
        self.bits_per_user * self.error_counts.len() as u64
    }

    /// `(1/K)(1/U) sum_k sum_u BER_{k,u}`, i.e. total errors over total decisions.
    pub fn mean_ber(&self) -> f64 {
        self.total_errors() as f64 / self.total_bits() as f64
    }

    /// 95% Wilson interval on [`mean_ber`](Self::mean_ber).
    pub fn wilson_95(&self) -> (f64, f64) {
        wilson_interval(self.total_errors(), self.total_bits(), Z_95)
    }

    pub fn half_width_95(&self) -> f64 {
        let (lo, hi) = self.wilson_95();
        0.5 * (hi - lo)
    }
}

/// Runs `config.trials` trials and counts sign errors `Z_k * b_{k,0} < 0`.
pub fn run_ber(config: &SimConfig) -> Result<BerResult> {
    let engine = TrialEngine::new(config)?;
    let k = config.n_users;
    let noise_std = config.noise_std();
    let chunks = engine.run(
        || vec![0u64; k],
        |errs, draw, corr, noise| {
            for (i, e) in errs.iter_mut().enumerate() {
                let z = decision_statistic(i, draw, corr, noise_std, noise[i]);
                if z * draw.bits_cur[i] < 0.0 {
                    *e += 1;
                }
            }
        },
    );
    let mut error_counts = vec![0u64; k];
    for c in chunks {
        for (tot, e) in error_counts.iter_mut().zip(c) {
            *tot += e;
        }
    }
    Ok(BerResult {
        error_counts,
        bits_per_user: config.trials,
    })
}

/// Moments of `Z_i - b_{i,0}`, grouped by the reference user's pool slot.
pub fn decision_noise_by_slot(config: &SimConfig) -> Result<Vec<RunningStats>> {
    let engine = TrialEngine::new(config)?;
    let pool = engine.pool.len();
    let noise_std = config.noise_std();
    let chunks = engine.run(
        || vec![RunningStats::default(); pool],
        |stats, draw, corr, noise| {
            for i in 0..draw.n_users() {
                let z = decision_statistic(i, draw, corr, noise_std, noise[i]);
                stats[draw.sigma[i]].push(z - draw.bits_cur[i]);
            }
        },
    );
    let mut out = vec![RunningStats::default(); pool];
    for c in chunks {
        for (o, s) in out.iter_mut().zip(&c) {
            o.merge(s);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Users,
    Ebn0Db,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::Users => "users",
            SweepAxis::Ebn0Db => "ebn0",
        }
    }
}

/// One point of a sweep, in the CSV column order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub family: &'static str,
    pub policy: &'static str,
    pub gamma: f64,
    pub kmax: usize,
    pub mean_ber: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub bits: u64,
}

impl SweepRow {
    pub const CSV_HEADER: [&'static str; 9] = [
        "axis_value",
        "family",
        "policy",
        "gamma",
        "kmax",
        "mean_ber",
        "wilson_lo",
        "wilson_hi",
        "bits",
    ];

    pub fn to_record(&self) -> [String; 9] {
        [
            format!("{}", self.axis_value),
            self.family.to_string(),
            self.policy.to_string(),
            format!("{:.12e}", self.gamma),
            self.kmax.to_string(),
            format!("{:.12e}", self.mean_ber),
            format!("{:.12e}", self.wilson_lo),
            format!("{:.12e}", self.wilson_hi),
            self.bits.to_string(),
        ]
    }
}

/// Runs `template` once per axis value. `Users` sets `n_users`; `Ebn0Db` sets
/// `E/N0` from decibels.
pub fn sweep(template: &SimConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let mut cfg = template.clone();
            match axis {
                SweepAxis::Users => {
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "user count must be a positive integer, got {v}"
                        )));
                    }
                    cfg.n_users = v as usize;
                }
                SweepAxis::Ebn0Db => cfg.e_over_n0 = db_to_linear(v),
            }
            let res = run_ber(&cfg)?;
            let (lo, hi) = res.wilson_95();
            Ok(SweepRow {
                axis_value: v,
                family: cfg.family.label(),
                policy: cfg.policy.label(),
                gamma: cfg.gamma_value(),
                kmax: cfg.pool_size(),
                mean_ber: res.mean_ber(),
                wilson_lo: lo,
                wilson_hi: hi,
                bits: res.total_bits(),
            })
        })
        .collect()
}
