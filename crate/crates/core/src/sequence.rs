//! Chip-sequence generators: Weyl, extended Frank-Zadoff-Chu, optimal Weyl,
//! and the Van der Corput slot assignment.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Chips may drift from unit modulus by at most this much.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

/// Which generator produced a [`ChipSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    Weyl,
    Fzc,
    OptimalWeyl,
    Gold,
}

/// One user's spreading code: `N` unit-modulus complex chips.
#[derive(Debug, Clone, PartialEq)]
pub struct ChipSequence {
    chips: Vec<Complex64>,
    kind: SequenceKind,
}

impl ChipSequence {
    /// Wraps raw chips, checking length and unit modulus.
    pub fn new(chips: Vec<Complex64>, kind: SequenceKind) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::EmptySequence);
        }
        if chips.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("chip"));
        }
        if let Some(c) = chips
            .iter()
            .find(|c| (c.norm() - 1.0).abs() >= UNIT_MODULUS_TOL)
        {
            return Err(Error::InvalidParameter(format!(
                "chip {c} is not unit modulus"
            )));
        }
        Ok(Self { chips, kind })
    }

    pub fn chips(&self) -> &[Complex64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }
}

impl AsRef<[Complex64]> for ChipSequence {
    fn as_ref(&self) -> &[Complex64] {
        &self.chips
    }
}

/// Parameters of a Weyl sequence `x_n = n*rho + delta mod 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylParams {
    pub rho: f64,
    pub delta: f64,
    pub n_chips: usize,
}

impl WeylParams {
    pub fn new(rho: f64, delta: f64, n_chips: usize) -> Self {
        Self {
            rho,
            delta,
            n_chips,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_chips == 0 {
            return Err(Error::EmptySequence);
        }
        if !self.rho.is_finite() {
            return Err(Error::NonFinite("rho"));
        }
        if !self.delta.is_finite() {
            return Err(Error::NonFinite("delta"));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidParameter(format!(
                "rho = {} not in [0,1)",
                self.rho
            )));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::InvalidParameter(format!(
                "delta = {} not in [0,1)",
                self.delta
            )));
        }
        Ok(())
    }
}

#[inline]
fn unit_chip(turns: f64) -> Complex64 {
    Complex64::cis(2.0 * PI * turns)
}

/// Chip `n` (1-indexed) is `exp(2*pi*j*(n*rho + delta mod 1))`.
pub fn weyl_sequence(params: WeylParams) -> Result<ChipSequence> {
    params.validate()?;
    let chips = (1..=params.n_chips)
        .map(|n| unit_chip((n as f64 * params.rho + params.delta).rem_euclid(1.0)))
        .collect();
    ChipSequence::new(chips, SequenceKind::Weyl)
}

/// An exponent of the extended FZC family; `Absent` stands for `-inf`,
/// which drops the corresponding term entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Absent,
}

impl Exponent {
    fn power(self, base: f64) -> f64 {
        match self {
            Exponent::Finite(e) => base.powf(e),
            Exponent::Absent => 0.0,
        }
    }
}

/// The `{p, q, r}` triple selecting a member of the extended FZC family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FzcTriple {
    pub p: f64,
    pub q: f64,
    pub r: Exponent,
}

impl FzcTriple {
    /// `{2, 1, -inf}`: the classic Frank-Zadoff-Chu sequence.
    pub const CLASSIC: FzcTriple = FzcTriple {
        p: 2.0,
        q: 1.0,
        r: Exponent::Absent,
    };

    /// `{1, 1, -inf}`: the triple embedding the Weyl class.
    pub const WEYL: FzcTriple = FzcTriple {
        p: 1.0,
        q: 1.0,
        r: Exponent::Absent,
    };

    /// `{1.0, 1.0, 1.275}`, the family member used as the FZC baseline at N = 31.
    pub const BASELINE_N31: FzcTriple = FzcTriple {
        p: 1.0,
        q: 1.0,
        r: Exponent::Finite(1.275),
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FzcParams {
    /// Generalised index `M_k`; any finite real is accepted.
    pub m_k: f64,
    pub triple: FzcTriple,
    pub n_chips: usize,
}

/// Chip `n` is `(-1)^(n M) exp(j pi (M^p n^q + n^r) / N)`, with `(-1)^(nM)`
/// read as `exp(j pi n M)` so that real indices are meaningful.
pub fn fzc_family_sequence(params: FzcParams) -> Result<ChipSequence> {
    if params.n_chips == 0 {
        return Err(Error::EmptySequence);
    }
    if !params.m_k.is_finite() {
        return Err(Error::NonFinite("m_k"));
    }
    let n_f = params.n_chips as f64;
    let m_pow = params.m_k.powf(params.triple.p);
    if !m_pow.is_finite() {
        return Err(Error::NonFinite("m_k^p"));
    }
    let chips = (1..=params.n_chips)
        .map(|n| {
            let n = n as f64;
            let sign_turns = 0.5 * n * params.m_k;
            let body_turns =
                (m_pow * n.powf(params.triple.q) + params.triple.r.power(n)) / (2.0 * n_f);
            unit_chip((sign_turns + body_turns).rem_euclid(1.0))
        })
        .collect::<Vec<_>>();
    ChipSequence::new(chips, SequenceKind::Fzc)
}

/// Optimal-Weyl sequence parameters: phase `gamma + sigma_k / k_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalWeylParams {
    pub gamma: f64,
    pub sigma_k: usize,
    pub k_max: usize,
    pub n_chips: usize,
}

impl OptimalWeylParams {
    /// The phase increment `(gamma + sigma_k / k_max) mod 1`.
    pub fn rho(&self) -> f64 {
        (self.gamma + self.sigma_k as f64 / self.k_max as f64).rem_euclid(1.0)
    }
}

pub fn optimal_weyl_sequence(params: OptimalWeylParams) -> Result<ChipSequence> {
    if params.k_max == 0 || params.sigma_k >= params.k_max {
        return Err(Error::InvalidSlot {
            sigma: params.sigma_k,
            k_max: params.k_max,
        });
    }
    if !params.gamma.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    let seq = weyl_sequence(WeylParams::new(params.rho(), 0.0, params.n_chips))?;
    ChipSequence::new(seq.chips, SequenceKind::OptimalWeyl)
}

/// Base-2 radical inverse of `index - 1`, so `v_1 = 0, v_2 = 1/2, v_3 = 1/4, ...`.
///
/// # Panics
///
/// Panics if `index == 0`; the sequence is 1-indexed.
pub fn van_der_corput(index: u64) -> f64 {
    assert!(index >= 1, "Van der Corput sequence is 1-indexed");
    // At most 64 significant bits, all clustered at the top after reversal; the
    // conversion is exact for any index below 2^53.
    (index - 1).reverse_bits() as f64 / 2f64.powi(64)
}

/// Slots `sigma_k = N * v_k` for users `k = 1..=K`, where `N = 2^m`, `m > 1`.
pub fn vdc_assignment(n_users: usize, n_slots: usize) -> Result<Vec<usize>> {
    if n_slots < 4 || !n_slots.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n_slots));
    }
    if n_users == 0 || n_users > n_slots {
        return Err(Error::InvalidParameter(format!(
            "user count {n_users} must lie in 1..={n_slots}"
        )));
    }
    let bits = n_slots.trailing_zeros();
    Ok((0..n_users as u64)
        .map(|k| (k.reverse_bits() >> (64 - bits)) as usize)
        .collect())
}
