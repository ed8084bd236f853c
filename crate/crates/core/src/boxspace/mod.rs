//! Binary vectors, exact rationals, the `4^n`-dimensional box space and the
//! change of coordinates between probabilities and parity correlations.
//!
//! For a box `P` the correlation coordinates are
//!
//! ```text
//! A^c_s = Σ_a (-1)^{a·c} P(a|s)        (s ⊆ c)
//! ```
//!
//! and, for a non-signaling box, `A^c_s = A^c_{s∧c}` for every `s`, so the
//! `3^n` values with `s ⊆ c` determine the box completely.

pub(crate) mod table;
mod vector;

use num_bigint::BigInt;
use num_traits::Zero;

pub use table::{BoxTable, CorrelationTable};
pub use vector::{BinaryVector, Parties, DEFAULT_PARTY_LIMIT, MAX_PARTIES};
pub(crate) use vector::parity;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational.
///
/// # Panics
///
/// If `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `2^-k`.
pub(crate) fn inverse_power_of_two(k: usize) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1) << k)
}

/// In-place Walsh–Hadamard transform: `v[c] ← Σ_a (-1)^{a·c} v[a]`.
///
/// The length must be a power of two. Applying it twice multiplies by the
/// length.
pub fn walsh_hadamard(values: &mut [Rational]) {
    let len = values.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let (lo, hi) = values.split_at_mut(i + half);
                let x = std::mem::take(&mut lo[i]);
                let y = &hi[0];
                let sum = &x + y;
                hi[0] = x - y;
                lo[i] = sum;
            }
        }
        half *= 2;
    }
}

/// `A^c_s = Σ_a (-1)^{a·c} P(a|s)` for every `s ⊆ c`.
pub fn correlations_of_box(p: &BoxTable) -> CorrelationTable {
    let parties = p.parties();
    let words = parties.words();
    let n = parties.get();
    let mut full = vec![Rational::zero(); parties.events()];
    for s in 0..words {
        let mut column = p.raw()[s * words..(s + 1) * words].to_vec();
        walsh_hadamard(&mut column);
        for (c, v) in column.into_iter().enumerate() {
            full[(c << n) | s] = v;
        }
    }
    CorrelationTable::from_subset_fn(parties, |c, s| {
        std::mem::take(&mut full[((c as usize) << n) | s as usize])
    })
}

/// Inverse chart: `P(a|s) = 2^-n Σ_c (-1)^{a·c} A^c_{s∧c}`.
///
/// The result is normalized and non-signaling by construction, but it is
/// not validated: a table that is not the chart of a physical box produces
/// negative entries, which the caller is expected to check for.
pub fn box_from_correlations(table: &CorrelationTable) -> Result<BoxTable> {
    if !table.is_normalized() {
        return Err(Error::InvalidBox(format!(
            "normalization coordinate A^0_0 is {}, expected 1",
            table.at(0, 0)
        )));
    }
    let parties = table.parties();
    let words = parties.words();
    let scale = inverse_power_of_two(parties.get());
    let mut values = Vec::with_capacity(parties.events());
    for s in 0..words as u32 {
        let mut column: Vec<Rational> = (0..words as u32)
            .map(|c| table.at(c, s).clone())
            .collect();
        walsh_hadamard(&mut column);
        values.extend(column.into_iter().map(|v| v * &scale));
    }
    Ok(BoxTable::from_raw(parties, values))
}

/// Probability that observer `k` (1-based) obtains `outcome` when measuring
/// setting `setting`.
///
/// The other observers' settings are fixed to 0. With `strict` set, every
/// other completion is evaluated as well and any disagreement is reported
/// as signaling.
pub fn marginal(p: &BoxTable, k: usize, setting: u8, outcome: u8, strict: bool) -> Result<Rational> {
    let parties = p.parties();
    let n = parties.get();
    if k == 0 || k > n {
        return Err(Error::ObserverOutOfRange { index: k, n });
    }
    if setting > 1 || outcome > 1 {
        return Err(Error::MalformedBitstring(format!(
            "setting {setting} / outcome {outcome}"
        )));
    }
    let bit = 1u32 << (k - 1);
    let words = parties.words() as u32;
    let at = |s: u32| -> Rational {
        (0..words)
            .filter(|a| (a & bit != 0) == (outcome == 1))
            .map(|a| &p.raw()[((s as usize) << n) | a as usize])
            .sum()
    };
    let base = if setting == 1 { bit } else { 0 };
    let value = at(base);
    if strict {
        for rest in (0..words).filter(|r| r & bit == 0) {
            let other = at(rest | base);
            if other != value {
                return Err(Error::Signaling(crate::nsbox::SignalingWitness {
                    observer: k,
                    setting: BinaryVector::from_raw(n, rest | base),
                    outcome: None,
                    detail: format!(
                        "marginal of observer {k} is {value} at the all-zero completion \
                         but {other} at setting {}",
                        BinaryVector::from_raw(n, rest | base)
                    ),
                }));
            }
        }
    }
    Ok(value)
}
