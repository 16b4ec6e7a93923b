//! Weyl-class spreading sequences and an asynchronous BPSK CDMA simulator.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequence`] and [`gold`] generate chip sequences (Weyl, extended
//!   Frank-Zadoff-Chu, optimal Weyl, Gold) and the Van der Corput slot
//!   assignment.
//! * [`correlation`] evaluates aperiodic, periodic and odd correlation
//!   functions together with the closed-form Weyl specialisations.
//! * [`assignment`] encodes the phase-placement program, its closed-form
//!   optimum, the Lagrange multipliers certifying it and a KKT checker.
//! * [`snr`] holds the Pursley-form and closed-form SNR expressions.
//! * [`sim`] runs seeded, order-independent Monte-Carlo BER experiments.
//! * [`stats`] has the binomial interval and Gaussian tail helpers.

pub mod assignment;
pub mod correlation;
pub mod error;
pub mod gold;
pub mod sequence;
pub mod sim;
pub mod snr;
pub mod stats;
mod sum;

pub use assignment::{
    circle_distance, construct_multipliers, global_solution, kkt_residual, objective,
    verify_optimality_by_sampling, KktResidual, LagrangeMultipliers, PhaseAssignment,
    SamplingReport, SlackMatrix,
};
pub use correlation::{
    aperiodic_c, correlation_profile, cross_bound, odd_theta_hat, periodic_theta, r_ik,
    weyl_c_closed_form, CorrelationProfile,
};
pub use error::{Error, Result};
pub use gold::{gold_code, gold_code_with_pair, m_sequence, GoldPair};
pub use sequence::{
    fzc_family_sequence, optimal_weyl_sequence, van_der_corput, vdc_assignment, weyl_sequence,
    ChipSequence, Exponent, FzcParams, FzcTriple, OptimalWeylParams, SequenceKind, WeylParams,
};
pub use sim::{
    decision_noise_by_slot, run_ber, sweep, AssignmentPolicy, BerResult, Family, GammaRule,
    SigmaMode, SimConfig, SweepAxis, SweepRow, TrialDraw,
};
pub use snr::{
    csc2_sum, db_to_linear, expected_r_sum, expected_r_sum_by_enumeration, expected_weyl_snr,
    pursley_snr, r_ik_closed, snr_lower_bound, weyl_interference_term, ExpectedRSum, LinkBudget,
};
pub use stats::{q_function, wilson_interval, RunningStats, Z_95};

pub use num_complex::Complex64;
