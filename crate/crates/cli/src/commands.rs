use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use weyl_cdma::{
    aperiodic_c, construct_multipliers, cross_bound, db_to_linear, expected_weyl_snr,
    fzc_family_sequence, global_solution, gold_code, kkt_residual, objective, odd_theta_hat,
    optimal_weyl_sequence, periodic_theta, snr_lower_bound, van_der_corput, vdc_assignment,
    verify_optimality_by_sampling, weyl_sequence, ChipSequence, FzcParams, GammaRule, LinkBudget,
    OptimalWeylParams, WeylParams,
};

use crate::output::{num, write_csv, Header, VERSION};
use crate::params::{GammaArg, TripleArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateFamily {
    Weyl,
    Optimal,
    Fzc,
    Gold,
    Vdc,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    family: GenerateFamily,
    /// Sequence length N (fixed at 31 for gold; pool size for vdc).
    #[arg(long, default_value_t = 31)]
    n: usize,
    /// Weyl increment rho in [0,1).
    #[arg(long)]
    rho: Option<f64>,
    /// Weyl offset delta in [0,1).
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// FZC index M.
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, default_value = "1,1,1.275")]
    triple: TripleArg,
    /// Optimal-Weyl slot sigma in 0..kmax.
    #[arg(long)]
    sigma: Option<usize>,
    /// Number of slots for optimal sequences.
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long, default_value = "half-n")]
    gamma: GammaArg,
    /// Gold code index in 0..33.
    #[arg(long)]
    index: Option<usize>,
    /// Number of users for vdc.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn required<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.with_context(|| format!("--family {family} requires {flag}"))
}

pub fn generate(a: GenerateArgs) -> Result<()> {
    let mut h = Header::new("generate");
    let seq: ChipSequence = match a.family {
        GenerateFamily::Weyl => {
            let rho = required(a.rho, "--rho", "weyl")?;
            h.push("family", "weyl")
                .push("n", a.n)
                .push("rho", rho)
                .push("delta", a.delta);
            weyl_sequence(WeylParams::new(rho, a.delta, a.n))?
        }
        GenerateFamily::Optimal => {
            let sigma = required(a.sigma, "--sigma", "optimal")?;
            let kmax = required(a.kmax, "--kmax", "optimal")?;
            let gamma = a.gamma.0.resolve(kmax, a.n);
            h.push("family", "optimal")
                .push("n", a.n)
                .push("kmax", kmax)
                .push("sigma", sigma)
                .push("gamma_rule", a.gamma.0)
                .push("gamma", gamma);
            optimal_weyl_sequence(OptimalWeylParams {
                gamma,
                sigma_k: sigma,
                k_max: kmax,
                n_chips: a.n,
            })?
        }
        GenerateFamily::Fzc => {
            let m = required(a.m, "--m", "fzc")?;
            h.push("family", "fzc")
                .push("n", a.n)
                .push("m", m)
                .push("triple", a.triple);
            fzc_family_sequence(FzcParams {
                m_k: m,
                triple: a.triple.0,
                n_chips: a.n,
            })?
        }
        GenerateFamily::Gold => {
            let index = required(a.index, "--index", "gold")?;
            ensure!(a.n == 31, "gold codes are generated for N = 31 only");
            h.push("family", "gold").push("n", 31).push("index", index);
            gold_code(5, index)?
        }
        GenerateFamily::Vdc => {
            let k = required(a.k, "--k", "vdc")?;
            let slots = vdc_assignment(k, a.n)?;
            h.push("family", "vdc").push("n", a.n).push("k", k);
            let rows = slots.iter().enumerate().map(|(i, s)| {
                let v = van_der_corput(i as u64 + 1);
                [(i + 1).to_string(), num(v), s.to_string()]
            });
            return write_csv(a.out.as_deref(), &h, &["k", "v", "sigma"], rows);
        }
    };
    let rows = seq
        .chips()
        .iter()
        .enumerate()
        .map(|(i, c)| [(i + 1).to_string(), num(c.re), num(c.im)]);
    write_csv(a.out.as_deref(), &h, &["n", "re", "im"], rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrelateFamily {
    Weyl,
    Optimal,
    Fzc,
    Gold,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long, value_enum)]
    family: CorrelateFamily,
    #[arg(long, default_value_t = 31)]
    n: usize,
    #[arg(long)]
    rho_i: Option<f64>,
    #[arg(long)]
    rho_k: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    delta_i: f64,
    #[arg(long, default_value_t = 0.0)]
    delta_k: f64,
    #[arg(long)]
    sigma_i: Option<usize>,
    #[arg(long)]
    sigma_k: Option<usize>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long, default_value = "half-n")]
    gamma: GammaArg,
    #[arg(long)]
    m_i: Option<f64>,
    #[arg(long)]
    m_k: Option<f64>,
    #[arg(long, default_value = "1,1,1.275")]
    triple: TripleArg,
    #[arg(long)]
    code_i: Option<usize>,
    #[arg(long)]
    code_k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn correlate(a: CorrelateArgs) -> Result<()> {
    let mut h = Header::new("correlate");
    let n = a.n;
    let (x, y, bound) = match a.family {
        CorrelateFamily::Weyl => {
            let ri = required(a.rho_i, "--rho-i", "weyl")?;
            let rk = required(a.rho_k, "--rho-k", "weyl")?;
            h.push("family", "weyl")
                .push("n", n)
                .push("rho_i", ri)
                .push("rho_k", rk)
                .push("delta_i", a.delta_i)
                .push("delta_k", a.delta_k);
            (
                weyl_sequence(WeylParams::new(ri, a.delta_i, n))?,
                weyl_sequence(WeylParams::new(rk, a.delta_k, n))?,
                Some(cross_bound(ri, rk)?),
            )
        }
        CorrelateFamily::Optimal => {
            let si = required(a.sigma_i, "--sigma-i", "optimal")?;
            let sk = required(a.sigma_k, "--sigma-k", "optimal")?;
            let kmax = required(a.kmax, "--kmax", "optimal")?;
            let gamma = a.gamma.0.resolve(kmax, n);
            h.push("family", "optimal")
                .push("n", n)
                .push("kmax", kmax)
                .push("sigma_i", si)
                .push("sigma_k", sk)
                .push("gamma_rule", a.gamma.0)
                .push("gamma", gamma);
            let p = |s| OptimalWeylParams {
                gamma,
                sigma_k: s,
                k_max: kmax,
                n_chips: n,
            };
            (
                optimal_weyl_sequence(p(si))?,
                optimal_weyl_sequence(p(sk))?,
                Some(cross_bound(p(si).rho(), p(sk).rho())?),
            )
        }
        CorrelateFamily::Fzc => {
            let mi = required(a.m_i, "--m-i", "fzc")?;
            let mk = required(a.m_k, "--m-k", "fzc")?;
            h.push("family", "fzc")
                .push("n", n)
                .push("m_i", mi)
                .push("m_k", mk)
                .push("triple", a.triple);
            let p = |m| FzcParams {
                m_k: m,
                triple: a.triple.0,
                n_chips: n,
            };
            (
                fzc_family_sequence(p(mi))?,
                fzc_family_sequence(p(mk))?,
                None,
            )
        }
        CorrelateFamily::Gold => {
            let ci = required(a.code_i, "--code-i", "gold")?;
            let ck = required(a.code_k, "--code-k", "gold")?;
            ensure!(n == 31, "gold codes are generated for N = 31 only");
            h.push("family", "gold")
                .push("n", 31)
                .push("code_i", ci)
                .push("code_k", ck);
            (gold_code(5, ci)?, gold_code(5, ck)?, None)
        }
    };
    let bound_text = bound.map(num).unwrap_or_default();
    let mut rows = Vec::with_capacity(n);
    for l in 0..n as i64 {
        rows.push([
            l.to_string(),
            num(aperiodic_c(&x, &y, l)?.norm()),
            num(periodic_theta(&x, &y, l)?.norm()),
            num(odd_theta_hat(&x, &y, l)?.norm()),
            bound_text.clone(),
        ]);
    }
    write_csv(
        a.out.as_deref(),
        &h,
        &["lag", "abs_c", "abs_theta", "abs_theta_hat", "bound"],
        rows,
    )
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Number of users K (at least 2).
    #[arg(long)]
    k: usize,
    /// Common phase offset added to every rho.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Random feasible points tried against the closed-form optimum.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn solve(a: SolveArgs) -> Result<()> {
    let (solution, slack) = global_solution(a.k, a.gamma)?;
    let multipliers = construct_multipliers(&solution);
    let kkt = kkt_residual(&solution, &slack, &multipliers);
    let report = verify_optimality_by_sampling(a.k, a.samples, a.seed)?;
    let rho: Vec<String> = solution.rhos.iter().map(|&r| num(r)).collect();
    let lines = [
        ("version", VERSION.to_string()),
        ("k", a.k.to_string()),
        ("gamma", num(a.gamma)),
        ("rho", rho.join(",")),
        ("objective", num(objective(&solution.rhos))),
        (
            "kkt_residual",
            num(kkt.stationarity() + kkt.complementary_slackness),
        ),
        ("kkt_stationarity", num(kkt.stationarity())),
        (
            "kkt_complementary_slackness",
            num(kkt.complementary_slackness),
        ),
        ("kkt_primal_infeasibility", num(kkt.primal_infeasibility)),
        ("kkt_dual_infeasibility", num(kkt.dual_infeasibility)),
        ("sampling_samples", report.samples.to_string()),
        ("sampling_seed", a.seed.to_string()),
        ("sampling_min_objective", num(report.min_sampled)),
        ("sampling_holds", report.holds().to_string()),
    ];
    for (k, v) in lines {
        println!("{k}={v}");
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SnrArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "half-n")]
    gamma: GammaArg,
    #[arg(long = "ebn0-db")]
    ebn0_db: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn snr(a: SnrArgs) -> Result<()> {
    if a.k > a.n {
        bail!(
            "--k {} exceeds the {} slots of the K_max = N family",
            a.k,
            a.n
        );
    }
    let e_over_n0 = db_to_linear(a.ebn0_db);
    let budget = LinkBudget::new(e_over_n0, a.n, a.k)?;
    let gamma = match a.gamma.0 {
        GammaRule::Value(g) => g,
        rule => rule.resolve(a.k, a.n),
    };
    let mut h = Header::new("snr");
    h.push("n", a.n)
        .push("k", a.k)
        .push("gamma_rule", a.gamma.0)
        .push("gamma", gamma)
        .push("ebn0_db", a.ebn0_db)
        .push("e_over_n0", e_over_n0);
    let lower = num(snr_lower_bound(&budget));
    let rows = (0..a.n)
        .map(|s| {
            Ok([
                s.to_string(),
                num(gamma),
                num(expected_weyl_snr(s, gamma, &budget)?),
                lower.clone(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(
        a.out.as_deref(),
        &h,
        &["sigma", "gamma", "snr", "lower_bound"],
        rows,
    )
}
