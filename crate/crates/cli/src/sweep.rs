use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use weyl_cdma::{
    db_to_linear, sweep, AssignmentPolicy, Family, FzcTriple, GammaRule, SigmaMode, SimConfig,
    SweepAxis, SweepRow,
};

use crate::output::{sink, write_csv_to, Header};
use crate::params::{
    enum_from_str, AxisArg, FamilyArg, GammaArg, PolicyArg, Preset, Scalar, SigmaModeArg, TripleArg,
};

/// Trials per point when neither the command line nor the config file sets `trials`.
pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Default, Args)]
pub struct SweepArgs {
    /// TOML file with the same keys as the flags (kebab-case); flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run a figure preset, writing one CSV per curve into --out-dir.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    axis: Option<AxisArg>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// A number, `half-n` for 1/(2N) or `half-k` for 1/(2K).
    #[arg(long)]
    gamma: Option<GammaArg>,
    /// Slot count for `--family weyl` (default N).
    #[arg(long)]
    kmax: Option<usize>,
    /// FZC triple `p,q,r` (default 1,1,1.275).
    #[arg(long)]
    triple: Option<TripleArg>,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "ebn0-db", allow_negative_numbers = true)]
    ebn0_db: Option<f64>,
    /// Monte-Carlo trials U per sweep point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    sigma_mode: Option<SigmaModeArg>,
    /// Comma-separated axis values (default 2..=K for users, 0..=E/N0 dB in 1 dB steps for ebn0).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    preset: Option<String>,
    out_dir: Option<PathBuf>,
    axis: Option<String>,
    family: Option<String>,
    gamma: Option<Scalar>,
    kmax: Option<usize>,
    triple: Option<String>,
    policy: Option<String>,
    n: Option<usize>,
    k: Option<usize>,
    ebn0_db: Option<f64>,
    trials: Option<u64>,
    seed: Option<u64>,
    sigma_mode: Option<String>,
    values: Option<Vec<f64>>,
    out: Option<PathBuf>,
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
}

fn parse_opt<T>(v: Option<String>, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>> {
    v.map(|s| f(&s)).transpose().map_err(|e| anyhow!(e))
}

/// Command-line values layered over the config file.
fn merge(cli: SweepArgs) -> Result<SweepArgs> {
    let file = match &cli.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };
    Ok(SweepArgs {
        config: cli.config,
        preset: cli
            .preset
            .or(parse_opt(file.preset, |s| enum_from_str(s, "preset"))?),
        out_dir: cli.out_dir.or(file.out_dir),
        axis: cli
            .axis
            .or(parse_opt(file.axis, |s| enum_from_str(s, "axis"))?),
        family: cli
            .family
            .or(parse_opt(file.family, |s| enum_from_str(s, "family"))?),
        gamma: cli
            .gamma
            .or(parse_opt(file.gamma.map(|g| g.as_text()), |s| s.parse())?),
        kmax: cli.kmax.or(file.kmax),
        triple: cli.triple.or(parse_opt(file.triple, |s| s.parse())?),
        policy: cli
            .policy
            .or(parse_opt(file.policy, |s| enum_from_str(s, "policy"))?),
        n: cli.n.or(file.n),
        k: cli.k.or(file.k),
        ebn0_db: cli.ebn0_db.or(file.ebn0_db),
        trials: cli.trials.or(file.trials),
        seed: cli.seed.or(file.seed),
        sigma_mode: cli.sigma_mode.or(parse_opt(file.sigma_mode, |s| {
            enum_from_str(s, "sigma-mode")
        })?),
        values: cli.values.or(file.values),
        out: cli.out.or(file.out),
    })
}

/// One output file: a config template swept along one axis.
#[derive(Debug, Clone)]
pub struct Curve {
    pub name: String,
    pub template: SimConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub ebn0_db: f64,
}

impl Curve {
    fn new(
        name: impl Into<String>,
        template: SimConfig,
        axis: SweepAxis,
        values: Vec<f64>,
        ebn0_db: f64,
    ) -> Self {
        Self {
            name: name.into(),
            template,
            axis,
            values,
            ebn0_db,
        }
    }

    fn header(&self, preset: Option<Preset>) -> Header {
        let c = &self.template;
        let mut h = Header::new("ber-sweep");
        h.push(
            "preset",
            preset.map_or("none".to_string(), |p| format!("{p:?}").to_lowercase()),
        )
        .push("curve", &self.name)
        .push("axis", self.axis.label())
        .push("family", c.family.label())
        .push("policy", c.policy.label())
        .push("gamma_rule", c.gamma);
        match c.family {
            Family::Weyl { k_max } => h.push("kmax", k_max),
            Family::Optimal => h.push("kmax", "K"),
            Family::Fzc { triple } => h
                .push("kmax", c.pool_size())
                .push("triple", TripleArg(triple)),
            Family::Gold => h.push("kmax", c.pool_size()),
        };
        h.push("n", c.n_chips);
        match self.axis {
            SweepAxis::Users => h
                .push("k", "swept")
                .push("ebn0_db", self.ebn0_db)
                .push("e_over_n0", c.e_over_n0),
            SweepAxis::Ebn0Db => h
                .push("k", c.n_users)
                .push("ebn0_db", "swept")
                .push("e_over_n0", "swept"),
        };
        let values: Vec<String> = self.values.iter().map(f64::to_string).collect();
        h.push("trials", c.trials)
            .push("seed", c.seed)
            .push("sigma_mode", c.sigma_mode.label())
            .push("values", values.join(","));
        h
    }

    pub fn run(&self, preset: Option<Preset>, out: Option<&Path>) -> Result<()> {
        let sink = sink(out)?;
        let rows = sweep(&self.template, self.axis, &self.values)
            .with_context(|| format!("curve {}", self.name))?;
        write_csv_to(
            sink,
            &self.header(preset),
            &SweepRow::CSV_HEADER,
            rows.iter().map(SweepRow::to_record),
        )
    }
}

fn users_range(from: usize, to: usize) -> Vec<f64> {
    (from..=to).map(|k| k as f64).collect()
}

fn ebn0_range(top_db: f64) -> Vec<f64> {
    (0..=top_db.floor().max(0.0) as i64)
        .map(|d| d as f64)
        .collect()
}

struct Base {
    trials: u64,
    seed: u64,
    sigma_mode: SigmaMode,
}

impl Base {
    fn config(
        &self,
        k: usize,
        n: usize,
        db: f64,
        family: Family,
        policy: AssignmentPolicy,
        gamma: GammaRule,
    ) -> SimConfig {
        SimConfig {
            trials: self.trials,
            seed: self.seed,
            policy,
            gamma,
            sigma_mode: self.sigma_mode,
            ..SimConfig::new(k, n, db, family)
        }
    }
}

fn gamma_tag(g: GammaRule) -> &'static str {
    match g {
        GammaRule::HalfOverK => "half-k",
        _ => "half-n",
    }
}

/// Curves of each figure preset. E/N0 sweeps run 0..=25 dB in 1 dB steps.
pub fn preset_curves(preset: Preset, trials: u64, seed: u64, sigma_mode: SigmaMode) -> Vec<Curve> {
    use AssignmentPolicy::{RandomDistinct as Random, Sequential, VanDerCorput};
    use GammaRule::{HalfOverK, HalfOverN};
    let b = Base {
        trials,
        seed,
        sigma_mode,
    };
    let users = SweepAxis::Users;
    let ebn0 = SweepAxis::Ebn0Db;
    let fzc = Family::Fzc {
        triple: FzcTriple::BASELINE_N31,
    };
    match preset {
        Preset::Fig1 => {
            let (n, db) = (31, 25.0);
            let cfg = |family, policy| b.config(2, n, db, family, policy, HalfOverN);
            vec![
                Curve::new(
                    "gold",
                    cfg(Family::Gold, Random),
                    users,
                    users_range(2, n),
                    db,
                ),
                Curve::new(
                    "weyl",
                    cfg(Family::Weyl { k_max: n }, Random),
                    users,
                    users_range(2, n),
                    db,
                ),
                Curve::new(
                    "optimal",
                    cfg(Family::Optimal, Sequential),
                    users,
                    users_range(2, n),
                    db,
                ),
                // only the 30 indices coprime to 31 are available
                Curve::new("fzc", cfg(fzc, Random), users, users_range(2, n - 1), db),
            ]
        }
        Preset::Fig2 => {
            let (k, n, top) = (7, 31, 25.0);
            let mut curves = Vec::new();
            for g in [HalfOverN, HalfOverK] {
                curves.push(Curve::new(
                    format!("weyl_{}", gamma_tag(g)),
                    b.config(k, n, top, Family::Weyl { k_max: n }, Random, g),
                    ebn0,
                    ebn0_range(top),
                    top,
                ));
                curves.push(Curve::new(
                    format!("optimal_{}", gamma_tag(g)),
                    b.config(k, n, top, Family::Optimal, Sequential, g),
                    ebn0,
                    ebn0_range(top),
                    top,
                ));
            }
            curves.push(Curve::new(
                "fzc",
                b.config(k, n, top, fzc, Random, HalfOverN),
                ebn0,
                ebn0_range(top),
                top,
            ));
            curves
        }
        Preset::Fig3 => {
            let (n, db) = (32, 25.0);
            [("random", Random), ("vdc", VanDerCorput)]
                .into_iter()
                .map(|(name, policy)| {
                    Curve::new(
                        name,
                        b.config(2, n, db, Family::Weyl { k_max: n }, policy, HalfOverN),
                        users,
                        users_range(2, n),
                        db,
                    )
                })
                .collect()
        }
        Preset::Fig4 => {
            let (k, n, top) = (7, 30, 25.0);
            let mut curves = Vec::new();
            for k_max in [30, 14] {
                for g in [HalfOverN, HalfOverK] {
                    curves.push(Curve::new(
                        format!("weyl_k{k_max}_{}", gamma_tag(g)),
                        b.config(k, n, top, Family::Weyl { k_max }, Random, g),
                        ebn0,
                        ebn0_range(top),
                        top,
                    ));
                }
            }
            for g in [HalfOverN, HalfOverK] {
                curves.push(Curve::new(
                    format!("optimal_{}", gamma_tag(g)),
                    b.config(k, n, top, Family::Optimal, Sequential, g),
                    ebn0,
                    ebn0_range(top),
                    top,
                ));
            }
            curves
        }
    }
}

fn run_preset(preset: Preset, s: &SweepArgs) -> Result<()> {
    let fixed = [
        ("axis", s.axis.is_some()),
        ("family", s.family.is_some()),
        ("gamma", s.gamma.is_some()),
        ("kmax", s.kmax.is_some()),
        ("triple", s.triple.is_some()),
        ("policy", s.policy.is_some()),
        ("n", s.n.is_some()),
        ("k", s.k.is_some()),
        ("ebn0-db", s.ebn0_db.is_some()),
        ("values", s.values.is_some()),
        ("out", s.out.is_some()),
    ];
    let clashes: Vec<&str> = fixed
        .iter()
        .filter(|(_, set)| *set)
        .map(|(k, _)| *k)
        .collect();
    if !clashes.is_empty() {
        bail!(
            "preset {} fixes its own parameters; remove: {} (only trials, seed, sigma-mode and out-dir may be set)",
            format!("{preset:?}").to_lowercase(),
            clashes.join(", ")
        );
    }
    let dir = s.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let curves = preset_curves(
        preset,
        s.trials.unwrap_or(DEFAULT_TRIALS),
        s.seed.unwrap_or(0),
        s.sigma_mode.map_or(SigmaMode::PerTrial, Into::into),
    );
    let tag = format!("{preset:?}").to_lowercase();
    for curve in &curves {
        let path = dir.join(format!("{tag}_{}.csv", curve.name));
        curve.run(Some(preset), Some(&path))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn single_curve(s: &SweepArgs) -> Result<Curve> {
    let n = s.n.unwrap_or(31);
    let k = s.k.unwrap_or(10);
    let db = s.ebn0_db.unwrap_or(25.0);
    let family_arg = s.family.unwrap_or(FamilyArg::Weyl);
    if s.kmax.is_some() && family_arg != FamilyArg::Weyl {
        bail!("--kmax only applies to --family weyl");
    }
    if s.triple.is_some() && family_arg != FamilyArg::Fzc {
        bail!("--triple only applies to --family fzc");
    }
    let family = match family_arg {
        FamilyArg::Weyl => Family::Weyl {
            k_max: s.kmax.unwrap_or(n),
        },
        FamilyArg::Optimal => Family::Optimal,
        FamilyArg::Fzc => Family::Fzc {
            triple: s.triple.map_or(FzcTriple::BASELINE_N31, |t| t.0),
        },
        FamilyArg::Gold => Family::Gold,
    };
    let axis: SweepAxis = s.axis.unwrap_or(AxisArg::Users).into();
    let values = match (&s.values, axis) {
        (Some(v), _) if v.is_empty() => bail!("--values must not be empty"),
        (Some(v), _) => v.clone(),
        (None, SweepAxis::Users) => users_range(2.min(k), k),
        (None, SweepAxis::Ebn0Db) => ebn0_range(db),
    };
    let template = SimConfig {
        n_users: k,
        n_chips: n,
        e_over_n0: db_to_linear(db),
        trials: s.trials.unwrap_or(DEFAULT_TRIALS),
        seed: s.seed.unwrap_or(0),
        family,
        policy: s.policy.unwrap_or(PolicyArg::Random).into(),
        gamma: s.gamma.map_or(GammaRule::HalfOverN, |g| g.0),
        sigma_mode: s.sigma_mode.map_or(SigmaMode::PerTrial, Into::into),
    };
    let name = format!("{}_{}", family.label(), template.policy.label());
    Ok(Curve::new(name, template, axis, values, db))
}

pub fn ber_sweep(args: SweepArgs) -> Result<()> {
    let s = merge(args)?;
    match s.preset {
        Some(p) => run_preset(p, &s),
        None => {
            if s.out_dir.is_some() {
                bail!("--out-dir only applies with --preset; use --out for a single sweep");
            }
            single_curve(&s)?.run(None, s.out.as_deref())
        }
    }
}
