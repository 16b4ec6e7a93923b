//! Value parsers and enums shared by the subcommands and the config file.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Deserialize;
use weyl_cdma::{AssignmentPolicy, Exponent, FzcTriple, GammaRule, SigmaMode, SweepAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Weyl,
    Optimal,
    Fzc,
    Gold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Random,
    Vdc,
    Sequential,
}

impl From<PolicyArg> for AssignmentPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Random => AssignmentPolicy::RandomDistinct,
            PolicyArg::Vdc => AssignmentPolicy::VanDerCorput,
            PolicyArg::Sequential => AssignmentPolicy::Sequential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Users,
    Ebn0,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Users => SweepAxis::Users,
            AxisArg::Ebn0 => SweepAxis::Ebn0Db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaModeArg {
    PerTrial,
    Fixed,
}

impl From<SigmaModeArg> for SigmaMode {
    fn from(m: SigmaModeArg) -> Self {
        match m {
            SigmaModeArg::PerTrial => SigmaMode::PerTrial,
            SigmaModeArg::Fixed => SigmaMode::Fixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

/// Parses a `ValueEnum` from a config-file string with the same spelling as the flag.
pub fn enum_from_str<T: ValueEnum>(s: &str, key: &str) -> Result<T, String> {
    T::from_str(s, true).map_err(|_| {
        let allowed: Vec<String> = T::value_variants()
            .iter()
            .filter_map(|v| v.to_possible_value().map(|p| p.get_name().to_string()))
            .collect();
        format!(
            "invalid {key} `{s}`; expected one of {}",
            allowed.join(", ")
        )
    })
}

/// `half-n`, `half-k` or a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaArg(pub GammaRule);

impl FromStr for GammaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half-n" | "1/(2n)" => Ok(GammaArg(GammaRule::HalfOverN)),
            "half-k" | "1/(2k)" => Ok(GammaArg(GammaRule::HalfOverK)),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| format!("gamma must be a number, half-n or half-k; got `{s}`"))?;
                if !v.is_finite() {
                    return Err(format!("gamma must be finite; got `{s}`"));
                }
                Ok(GammaArg(GammaRule::Value(v)))
            }
        }
    }
}

/// `p,q,r` with `r` allowed to be `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleArg(pub FzcTriple);

impl FromStr for TripleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [p, q, r] = parts.as_slice() else {
            return Err(format!("triple must be `p,q,r`; got `{s}`"));
        };
        let num = |x: &str| -> Result<f64, String> {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid triple component `{x}`"))
        };
        let r = match *r {
            "-inf" | "absent" => Exponent::Absent,
            other => Exponent::Finite(num(other)?),
        };
        Ok(TripleArg(FzcTriple {
            p: num(p)?,
            q: num(q)?,
            r,
        }))
    }
}

impl fmt::Display for TripleArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.0;
        match t.r {
            Exponent::Finite(r) => write!(f, "{},{},{}", t.p, t.q, r),
            Exponent::Absent => write!(f, "{},{},-inf", t.p, t.q),
        }
    }
}

/// Scalar that a TOML file may give either as a number or a string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Text(String),
}

impl Scalar {
    pub fn as_text(&self) -> String {
        match self {
            Scalar::Num(v) => v.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}
