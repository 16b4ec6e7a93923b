//! Binary m-sequences and Gold codes.
//!
//! Polynomials are packed as bit masks: bit `i` holds the coefficient of
//! `x^i`, so `x^5 + x^2 + 1` is `0b10_0101`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::{ChipSequence, SequenceKind};

/// A preferred pair of primitive polynomials of the same degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldPair {
    pub degree: u32,
    pub poly_a: u32,
    pub poly_b: u32,
}

impl GoldPair {
    /// Degree-5 preferred pair `x^5 + x^2 + 1` and `x^5 + x^4 + x^3 + x^2 + 1`
    /// (octal 45 and 75), giving length-31 codes.
    pub const DEGREE_5: GoldPair = GoldPair {
        degree: 5,
        poly_a: 0o45,
        poly_b: 0o75,
    };

    pub fn period(&self) -> usize {
        (1usize << self.degree) - 1
    }

    /// Number of codes in the family: both m-sequences plus `N` shifted sums.
    pub fn family_size(&self) -> usize {
        self.period() + 2
    }
}

/// One period of the m-sequence for `poly`, as bits, starting from state `0..01`.
///
/// Uses the recurrence `a[n+m] = sum_{i<m} c_i a[n+i] (mod 2)`.
pub fn m_sequence(degree: u32, poly: u32) -> Result<Vec<u8>> {
    if !(2..=24).contains(&degree) || poly >> degree != 1 || poly & 1 == 0 {
        return Err(Error::NotPrimitive { poly, degree });
    }
    let period = (1usize << degree) - 1;
    let taps = poly & ((1 << degree) - 1);
    let mask = (1u32 << degree) - 1;
    // state bit i holds a[n+i]
    let start = 1u32;
    let mut state = start;
    let mut out = Vec::with_capacity(period);
    for step in 0..period {
        if step > 0 && state == start {
            return Err(Error::NotPrimitive { poly, degree });
        }
        out.push((state & 1) as u8);
        let feedback = (state & taps).count_ones() & 1;
        state = ((state >> 1) | (feedback << (degree - 1))) & mask;
    }
    if state != start {
        return Err(Error::NotPrimitive { poly, degree });
    }
    Ok(out)
}

fn to_chips(bits: impl Iterator<Item = u8>) -> Vec<Complex64> {
    bits.map(|b| Complex64::new(if b == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect()
}

/// Family member `code_index` built from an explicit polynomial pair.
///
/// Index 0 and 1 are the two m-sequences; index `2 + s` is
/// `a XOR (b cyclically shifted by s)` for `s` in `0..N`. Bits map
/// `0 -> +1`, `1 -> -1`.
pub fn gold_code_with_pair(pair: GoldPair, code_index: usize) -> Result<ChipSequence> {
    if code_index >= pair.family_size() {
        return Err(Error::CodeIndexOutOfRange {
            index: code_index,
            family_size: pair.family_size(),
        });
    }
    let a = m_sequence(pair.degree, pair.poly_a)?;
    let b = m_sequence(pair.degree, pair.poly_b)?;
    let n = a.len();
    let chips = match code_index {
        0 => to_chips(a.into_iter()),
        1 => to_chips(b.into_iter()),
        idx => {
            let shift = idx - 2;
            to_chips((0..n).map(|i| a[i] ^ b[(i + shift) % n]))
        }
    };
    ChipSequence::new(chips, SequenceKind::Gold)
}

/// Gold code from the baked-in preferred pair for `register_degree`.
///
/// Only degree 5 (N = 31) is baked in; use [`gold_code_with_pair`] otherwise.
pub fn gold_code(register_degree: u32, code_index: usize) -> Result<ChipSequence> {
    match register_degree {
        5 => gold_code_with_pair(GoldPair::DEGREE_5, code_index),
        d => Err(Error::UnsupportedDegree(d)),
    }
}
