//! Bell functionals `⟨B|P⟩ = Σ_{s,a} B(a,s) P(a|s)`, their correlation
//! coefficients, the standard form and the Hardy family.
//!
//! Two coefficient tables appear here:
//!
//! * the raw table `H^c_s = Σ_a (-1)^{a·c} B(a,s)` over all `(c, s)`, with
//!   no prefactor, so that `⟨B|P⟩ = 2^-n Σ_{c,s} H^c_s A^c_s` for any box;
//! * the reduced table `B̃^c_u = 2^-n Σ_{s : s∧c = u} H^c_s` over `u ⊆ c`,
//!   so that `⟨B|P⟩ = Σ_c Σ_{u⊆c} B̃^c_u A^c_u` for non-signaling boxes.
//!
//! For a functional already in standard form the reduced table coincides
//! with `2^-|c| H^c_u`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::bellpoly::check_inequality;
use crate::boxspace::table::{event_vector, subset_vector, EventTable, SubsetTable};
use crate::boxspace::{
    integer, inverse_power_of_two, walsh_hadamard, BinaryVector, BoxTable, CorrelationTable,
    Parties, Rational,
};
use crate::error::{Error, Result};
use crate::nsbox;

/// Coefficients `B(a, s)` of a linear functional on box space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BellFunctional(pub(crate) EventTable);

event_vector!(BellFunctional);

/// Reduced correlation coefficients `B̃^c_s`, `s ⊆ c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CorrelationFunctional(pub(crate) SubsetTable);

subset_vector!(CorrelationFunctional);

/// Raw parity transform `H^c_s` over all `4^n` pairs `(c, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCorrelations {
    parties: Parties,
    values: Vec<Rational>,
}

impl RawCorrelations {
    pub fn get(&self, c: BinaryVector, s: BinaryVector) -> Result<&Rational> {
        let n = self.parties.get();
        for v in [c, s] {
            if v.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: v.n(),
                });
            }
        }
        Ok(self.at(c.bits(), s.bits()))
    }

    fn at(&self, c: u32, s: u32) -> &Rational {
        &self.values[((c as usize) << self.parties.get()) | s as usize]
    }
}

fn check_same(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// `Σ_{s,a} B(a,s) P(a|s)`.
pub fn evaluate(functional: &BellFunctional, p: &BoxTable) -> Result<Rational> {
    check_same(functional.n(), p.n())?;
    Ok(functional
        .raw()
        .iter()
        .zip(p.raw())
        .filter(|(b, x)| !b.is_zero() && !x.is_zero())
        .map(|(b, x)| b * x)
        .sum())
}

/// `Σ_c Σ_{s⊆c} C^c_s A^c_s`; equals [`evaluate`] on non-signaling boxes.
pub fn evaluate_correlations(
    coefficients: &CorrelationFunctional,
    table: &CorrelationTable,
) -> Result<Rational> {
    check_same(coefficients.n(), table.n())?;
    Ok(coefficients
        .entries()
        .map(|(c, s, x)| x * table.at(c.bits(), s.bits()))
        .sum())
}

/// `⟨B|θ⟩`, the sum of all coefficients.
pub fn theta_value(functional: &BellFunctional) -> Rational {
    functional.raw().iter().sum()
}

/// `H^c_s = Σ_a (-1)^{a·c} B(a,s)` for every `(c, s)`.
pub fn raw_correlation_coeffs(functional: &BellFunctional) -> RawCorrelations {
    let parties = functional.parties();
    let n = parties.get();
    let words = parties.words();
    let mut values = vec![Rational::zero(); parties.events()];
    for s in 0..words {
        let mut column = functional.raw()[s * words..(s + 1) * words].to_vec();
        walsh_hadamard(&mut column);
        for (c, x) in column.into_iter().enumerate() {
            values[(c << n) | s] = x;
        }
    }
    RawCorrelations { parties, values }
}

/// Reduced coefficients `B̃^c_u = 2^-n Σ_{s∧c=u} H^c_s`, `u ⊆ c`.
///
/// No normalization by `⟨B|θ⟩` is applied; on a standardized functional
/// these are its standard correlation coefficients.
pub fn correlation_coeffs(functional: &BellFunctional) -> CorrelationFunctional {
    let parties = functional.parties();
    let raw = raw_correlation_coeffs(functional);
    let n = parties.get();
    let words = parties.words() as u32;
    let scale = inverse_power_of_two(n);
    let mut reduced = vec![Rational::zero(); parties.events()];
    for c in 0..words {
        for s in 0..words {
            let h = raw.at(c, s);
            if !h.is_zero() {
                reduced[((c as usize) << n) | (s & c) as usize] += h;
            }
        }
    }
    CorrelationFunctional::from_subset_fn(parties, |c, u| {
        std::mem::take(&mut reduced[((c as usize) << n) | u as usize]) * &scale
    })
}

/// Expansion `B(a,s) = Σ_c (-1)^{a·c} 2^{|c|-n} C^c_{s∧c}`.
///
/// The result always satisfies the setting-independence condition of the
/// standard form; it is the inverse of [`correlation_coeffs`] on standard
/// functionals.
pub fn functional_from_correlation_coeffs(coefficients: &CorrelationFunctional) -> BellFunctional {
    let parties = coefficients.parties();
    let n = parties.get();
    let words = parties.words() as u32;
    let mut values = Vec::with_capacity(parties.events());
    for s in 0..words {
        let mut column: Vec<Rational> = (0..words)
            .map(|c| coefficients.at(c, s) * inverse_power_of_two(n - c.count_ones() as usize))
            .collect();
        walsh_hadamard(&mut column);
        values.extend(column);
    }
    BellFunctional::from_raw(parties, values)
}

/// Sum of coefficients is one and, for every observer, the coefficient sum
/// over that observer's outcome does not depend on that observer's setting.
pub fn is_standard_form(functional: &BellFunctional) -> bool {
    theta_value(functional).is_one()
        && nsbox::first_signaling(functional.parties(), functional.raw()).is_none()
}

/// Rewrites a Bell inequality in standard form.
///
/// The result `B̃` satisfies `Σ B̃ = 1`, the setting-independence condition,
/// and `⟨B̃|P⟩ = ⟨B|P⟩ / ⟨B|θ⟩` for every non-signaling `P`; in particular
/// both vanish on the same deterministic vertices.
pub fn standardize(functional: &BellFunctional) -> Result<BellFunctional> {
    check_inequality(functional)?;
    let theta = theta_value(functional);
    if !theta.is_positive() {
        return Err(Error::NotNormalizable { theta });
    }
    let normalized = functional.scaled(&theta.recip());
    Ok(functional_from_correlation_coeffs(&correlation_coeffs(&normalized)))
}

/// The Bell–Hardy functional:
/// `Σ_j P(1|1_j) + P(0|1) - P(1|0) ≥ 0`.
pub fn hardy_functional(parties: Parties) -> BellFunctional {
    let ones = BinaryVector::ones(parties);
    let zeros = BinaryVector::zeros(parties);
    let mut b = BellFunctional::zero(parties);
    let mut add = |s: BinaryVector, a: BinaryVector, delta: i64| {
        let current = b.get(s, a).expect("same party count").clone();
        b.set(s, a, current + integer(delta)).expect("same party count");
    };
    for j in 1..=parties.get() {
        let unit = BinaryVector::unit(parties, j).expect("observer in range");
        add(unit, ones, 1);
    }
    add(ones, zeros, 1);
    add(zeros, ones, -1);
    b
}

/// One of the `n + 2` conditions of Hardy's test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardyCondition {
    /// `P(1|0) > 0`.
    AllOnesAtZeroSetting,
    /// `P(0|1) = 0`.
    NoZerosAtOneSetting,
    /// `P(1|1_j) = 0` for observer `j`.
    NoOnesAtUnitSetting(usize),
}

impl fmt::Display for HardyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardyCondition::AllOnesAtZeroSetting => f.write_str("P(1|0) > 0"),
            HardyCondition::NoZerosAtOneSetting => f.write_str("P(0|1) = 0"),
            HardyCondition::NoOnesAtUnitSetting(j) => write!(f, "P(1|1_{j}) = 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardyTestReport {
    /// Conditions that do not hold, in the order they are listed in the test.
    pub failed: Vec<HardyCondition>,
}

impl HardyTestReport {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }
}

pub fn hardy_test(p: &BoxTable) -> HardyTestReport {
    let parties = p.parties();
    let ones = BinaryVector::ones(parties);
    let zeros = BinaryVector::zeros(parties);
    let at = |s, a| p.get(s, a).expect("same party count");
    let mut failed = Vec::new();
    if !at(zeros, ones).is_positive() {
        failed.push(HardyCondition::AllOnesAtZeroSetting);
    }
    if !at(ones, zeros).is_zero() {
        failed.push(HardyCondition::NoZerosAtOneSetting);
    }
    for j in 1..=parties.get() {
        let unit = BinaryVector::unit(parties, j).expect("observer in range");
        if !at(unit, ones).is_zero() {
            failed.push(HardyCondition::NoOnesAtUnitSetting(j));
        }
    }
    HardyTestReport { failed }
}
