//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process exits non-zero if any fail.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weyl_cdma::{
    aperiodic_c, construct_multipliers, cross_bound, csc2_sum, decision_noise_by_slot,
    expected_r_sum, expected_r_sum_by_enumeration, expected_weyl_snr, global_solution,
    kkt_residual, optimal_weyl_sequence, periodic_theta, pursley_snr, q_function, r_ik,
    r_ik_closed, run_ber, verify_optimality_by_sampling, weyl_interference_term, weyl_sequence,
    AssignmentPolicy, BerResult, ChipSequence, Family, GammaRule, LinkBudget, OptimalWeylParams,
    SimConfig, WeylParams,
};

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn weyl_family(n: usize, k_max: usize, gamma: f64) -> Vec<ChipSequence> {
    (0..k_max)
        .map(|s| {
            optimal_weyl_sequence(OptimalWeylParams {
                gamma,
                sigma_k: s,
                k_max,
                n_chips: n,
            })
            .unwrap()
        })
        .collect()
}

fn ber(config: &SimConfig) -> BerResult {
    run_ber(config).expect("valid simulation config")
}

fn zero_periodic_crosscorrelation() -> Outcome {
    let n = 31;
    let fam = weyl_family(n, n, 0.0);
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            for l in 0..n as i64 {
                worst = worst.max(periodic_theta(&fam[i], &fam[k], l).unwrap().norm());
            }
        }
    }
    outcome(
        worst < 1e-9,
        format!("max |theta| = {worst:.3e} over 930 pairs x 31 lags"),
    )
}

fn correlation_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut random_cases = 0;
    while random_cases < 1000 {
        let n = rng.random_range(4..=256usize);
        let (ri, rk): (f64, f64) = (rng.random(), rng.random());
        if (PI * (ri - rk)).sin().abs() < 1e-6 {
            continue;
        }
        let x = weyl_sequence(WeylParams::new(ri, rng.random(), n)).unwrap();
        let y = weyl_sequence(WeylParams::new(rk, rng.random(), n)).unwrap();
        let lag = rng.random_range(-(n as i64) + 1..n as i64);
        let c = aperiodic_c(&x, &y, lag).unwrap().norm();
        worst_excess = worst_excess.max(c - cross_bound(ri, rk).unwrap());
        random_cases += 1;
    }

    // |sin(pi (N - l) d)| = 1 when (N - l) d = m + 1/2.
    let mut worst_gap = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(4..=256usize);
        let lag = rng.random_range(-(n as i64) + 1..n as i64);
        let span = n - lag.unsigned_abs() as usize;
        let m = rng.random_range(0..span);
        let d = (m as f64 + 0.5) / span as f64;
        let ri: f64 = rng.random();
        let rk = (ri + if rng.random::<bool>() { d } else { -d }).rem_euclid(1.0);
        let x = weyl_sequence(WeylParams::new(ri, 0.0, n)).unwrap();
        let y = weyl_sequence(WeylParams::new(rk, 0.0, n)).unwrap();
        let c = aperiodic_c(&x, &y, lag).unwrap().norm();
        worst_gap = worst_gap.max((c - cross_bound(ri, rk).unwrap()).abs());
    }
    outcome(
        worst_excess <= 1e-9 && worst_gap <= 1e-9,
        format!(
            "max |C| - bound = {worst_excess:.3e} (1000 random), max equality gap = {worst_gap:.3e} (1000 cases)"
        ),
    )
}

fn cosecant_identity() -> Outcome {
    let worst = (2..=1024usize)
        .map(|n| {
            let exact = ((n * n - 1) as f64) / 3.0;
            ((csc2_sum(n) - exact) / exact).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-12,
        format!("max relative error {worst:.3e} for n = 2..1024"),
    )
}

fn kkt_certification() -> Outcome {
    let mut worst_residual = 0.0f64;
    let mut violations = Vec::new();
    for k in 2..=20 {
        let (a, t) = global_solution(k, 0.0).unwrap();
        let m = construct_multipliers(&a);
        let r = kkt_residual(&a, &t, &m);
        worst_residual = worst_residual.max(r.stationarity() + r.complementary_slackness);
        let report = verify_optimality_by_sampling(k, 10_000, 4 + k as u64).unwrap();
        if !report.holds() {
            violations.push(k);
        }
    }
    outcome(
        worst_residual < 1e-9 && violations.is_empty(),
        format!(
            "max stationarity + slackness residual {worst_residual:.3e}; K beaten by sampling: {violations:?}"
        ),
    )
}

fn snr_bridge() -> Outcome {
    let n = 31;
    let db = 25.0;
    let mut config = SimConfig::new(n, n, db, Family::Weyl { k_max: n });
    config.trials = 100_000;
    config.seed = 5;
    config.policy = AssignmentPolicy::Sequential;
    config.gamma = GammaRule::HalfOverN;
    let gamma = config.gamma_value();
    let noise = 0.5 / config.e_over_n0;

    let stats = decision_noise_by_slot(&config).unwrap();
    let mut worst_var = 0.0f64;
    for (slot, s) in stats.iter().enumerate() {
        let predicted = weyl_interference_term(slot, gamma, n, n) + noise;
        worst_var = worst_var.max((s.variance() / predicted - 1.0).abs());
    }

    let fam = weyl_family(n, n, gamma);
    let budget = LinkBudget::from_db(db, n, n).unwrap();
    let mut worst_snr = 0.0f64;
    let (mut sum_p, mut sum_e) = (0.0, 0.0);
    for i in 0..n {
        let p = pursley_snr(i, &fam, &budget).unwrap();
        let e = expected_weyl_snr(i, gamma, &budget).unwrap();
        worst_snr = worst_snr.max((p / e - 1.0).abs());
        sum_p += p;
        sum_e += e;
    }
    let mean_dev = (sum_p / sum_e - 1.0).abs();
    outcome(
        worst_var < 0.05 && worst_snr < 0.02 && mean_dev < 0.02,
        format!(
            "max variance deviation {:.2}% over 31 slots (1e5 trials); pursley vs expected SNR max {:.2e}%, mean {:.2e}%",
            100.0 * worst_var,
            100.0 * worst_snr,
            100.0 * mean_dev
        ),
    )
}

fn closed_form_r() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_r = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(4..=128usize);
        let si = rng.random_range(0..n);
        let sk = (si + rng.random_range(1..n)) % n;
        let gamma: f64 = rng.random();
        let fam = |s| {
            optimal_weyl_sequence(OptimalWeylParams {
                gamma,
                sigma_k: s,
                k_max: n,
                n_chips: n,
            })
            .unwrap()
        };
        let direct = r_ik(fam(si), fam(sk)).unwrap();
        let closed = r_ik_closed(si, sk, gamma, n).unwrap();
        worst_r = worst_r.max(((closed - direct) / direct).abs());
    }

    let mut worst_sum = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(3..=512usize);
        let k = rng.random_range(2..=n);
        let si = rng.random_range(0..n);
        let gamma: f64 = rng.random();
        let (nf, kf) = (n as f64, k as f64);
        let cos = (2.0 * PI * (gamma + si as f64 / nf)).cos();
        let closed = expected_r_sum(si, gamma, k, n);
        let enumerated = expected_r_sum_by_enumeration(si, gamma, k, n);
        let constant = 2.0 * nf * (nf + 1.0) * (kf - 1.0) / 3.0;
        let cosine_scale = nf * (nf - 2.0) * (kf - 1.0) / 3.0;
        worst_sum = worst_sum
            .max(((closed.constant - constant) / constant).abs())
            .max(((enumerated.constant - constant) / constant).abs())
            .max(((closed.cosine - cosine_scale * cos) / cosine_scale).abs())
            .max(((enumerated.cosine - cosine_scale * cos) / cosine_scale).abs());
    }
    outcome(
        worst_r < 1e-8 && worst_sum < 1e-12,
        format!(
            "r_ik closed vs direct max rel {worst_r:.3e} (100 cases); expected-sum components max rel {worst_sum:.3e}"
        ),
    )
}

fn family_ber_ordering() -> Outcome {
    let (n, k, db) = (31, 10, 25.0);
    let run = |family, policy| {
        let mut c = SimConfig::new(k, n, db, family);
        c.trials = 100_000;
        c.seed = 7;
        c.policy = policy;
        ber(&c)
    };
    let optimal = run(Family::Optimal, AssignmentPolicy::Sequential);
    let weyl = run(Family::Weyl { k_max: n }, AssignmentPolicy::RandomDistinct);
    let gold = run(Family::Gold, AssignmentPolicy::RandomDistinct);
    let (o, w, g) = (optimal.wilson_95(), weyl.wilson_95(), gold.wilson_95());
    let pass = optimal.mean_ber() < weyl.mean_ber()
        && weyl.mean_ber() < gold.mean_ber()
        && o.1 < w.0
        && w.1 < g.0;
    outcome(
        pass,
        format!(
            "{} decisions each: optimal {:.3e} [{:.2e}, {:.2e}] < weyl {:.3e} [{:.2e}, {:.2e}] < gold {:.3e} [{:.2e}, {:.2e}]",
            optimal.total_bits(),
            optimal.mean_ber(), o.0, o.1,
            weyl.mean_ber(), w.0, w.1,
            gold.mean_ber(), g.0, g.1
        ),
    )
}

fn vdc_not_worse_than_random() -> Outcome {
    let n = 32;
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [4, 8, 16] {
        let run = |policy| {
            let mut c = SimConfig::new(k, n, 25.0, Family::Weyl { k_max: n });
            c.trials = 100_000;
            c.seed = 8;
            c.policy = policy;
            ber(&c)
        };
        let vdc = run(AssignmentPolicy::VanDerCorput);
        let random = run(AssignmentPolicy::RandomDistinct);
        let ok = vdc.mean_ber() <= random.mean_ber() || vdc.wilson_95().0 <= random.wilson_95().1;
        pass &= ok;
        parts.push(format!(
            "K={k}: vdc {:.2e} vs random {:.2e}",
            vdc.mean_ber(),
            random.mean_ber()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn optimal_gamma_invariance() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for db in [5.0, 15.0, 25.0] {
        let run = |gamma| {
            let mut c = SimConfig::new(7, 30, db, Family::Optimal);
            c.trials = 100_000;
            c.seed = 9;
            c.policy = AssignmentPolicy::Sequential;
            c.gamma = gamma;
            ber(&c)
        };
        let a = run(GammaRule::HalfOverN);
        let b = run(GammaRule::HalfOverK);
        let diff = (a.mean_ber() - b.mean_ber()).abs();
        let tol = a.half_width_95() + b.half_width_95();
        pass &= diff <= tol;
        parts.push(format!(
            "{db} dB: {:.3e} vs {:.3e} (|diff| {diff:.1e} <= {tol:.1e})",
            a.mean_ber(),
            b.mean_ber()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn single_user_oracle() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for db in [4.0, 8.0] {
        let mut c = SimConfig::new(1, 31, db, Family::Weyl { k_max: 31 });
        c.trials = 1_000_000;
        c.seed = 10;
        let r = ber(&c);
        let (lo, hi) = r.wilson_95();
        let theory = q_function((2.0 * c.e_over_n0).sqrt());
        let dev = (r.mean_ber() - theory).abs();
        pass &= dev <= 3.0 * (hi - lo);
        parts.push(format!(
            "{db} dB: {:.4e} vs Q = {theory:.4e} (|diff| {dev:.1e}, width {:.1e})",
            r.mean_ber(),
            hi - lo
        ));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        (
            "zero periodic crosscorrelation",
            zero_periodic_crosscorrelation,
        ),
        ("aperiodic correlation bound", correlation_bound),
        ("cosecant identity", cosecant_identity),
        ("KKT certification", kkt_certification),
        ("analytic/empirical SNR bridge", snr_bridge),
        ("closed-form r_ik", closed_form_r),
        ("BER ordering optimal < weyl < gold", family_ber_ordering),
        (
            "van der corput vs random assignment",
            vdc_not_worse_than_random,
        ),
        ("gamma 1/(2N) vs 1/(2K)", optimal_gamma_invariance),
        ("single-user oracle", single_user_oracle),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!result.pass);
        println!(
            "[{tag}] criterion {:>2} {name}: {} ({:.2}s)",
            idx + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
