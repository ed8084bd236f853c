//! The correspondence between standard-form Bell functionals and
//! non-signaling boxes.
//!
//! A standard functional `B` defines the box
//!
//! ```text
//! P(b|t) = Σ_s B(b + s∧t, s) = ⟨B | b ; b + t⟩
//! ```
//!
//! and a non-signaling box `P` defines the standard functional
//!
//! ```text
//! B(a,s) = Σ_{t,b} 3^n P(b|t) / (8^n (-3)^{|a + b + s∧t|})
//! ```
//!
//! with `⟨B|a;b⟩ = P(a|a+b)` on every deterministic vertex. Sums of binary
//! vectors are taken modulo 2. The map sends tight inequalities to extremal
//! boxes and back; the saturating vertex `a;b` of `B` corresponds to the zero
//! `(t, b_t) = (a+b, a)` of `P`.

mod relabel;

use num_traits::Zero;

pub use relabel::{apply_relabeling, LocalRelabeling, Relabeling};

use crate::bellpoly::check_inequality;
use crate::boxspace::{
    integer, inverse_power_of_two, parity, BinaryVector, BoxTable, CorrelationTable, Parties,
    Rational,
};
use crate::error::{Error, Result};
use crate::functional::{is_standard_form, standardize, BellFunctional, CorrelationFunctional};
use crate::nsbox;

/// Result of [`box_from_functional`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBox {
    pub table: BoxTable,
    /// The input was not in standard form and was standardized first.
    pub auto_standardized: bool,
}

/// `P(b|t) = Σ_s B(b + s∧t, s)`.
///
/// The formula is only meaningful for standard functionals, so any other
/// valid inequality is standardized first and the result says so.
pub fn box_from_functional(functional: &BellFunctional) -> Result<DualBox> {
    check_inequality(functional)?;
    let (standard, auto_standardized) = if is_standard_form(functional) {
        (functional.clone(), false)
    } else {
        (standardize(functional)?, true)
    };
    let parties = standard.parties();
    let n = parties.get();
    let words = parties.words() as u32;
    let coeff = |s: u32, a: u32| &standard.raw()[((s as usize) << n) | a as usize];
    let mut values = Vec::with_capacity(parties.events());
    for t in 0..words {
        for b in 0..words {
            values.push((0..words).map(|s| coeff(s, b ^ (s & t))).sum());
        }
    }
    Ok(DualBox {
        table: BoxTable::from_raw(parties, values),
        auto_standardized,
    })
}

/// `B(a,s) = Σ_{t,b} 3^n P(b|t) / (8^n (-3)^{|a + b + s∧t|})`.
pub fn functional_from_box(p: &BoxTable) -> Result<BellFunctional> {
    if let Some(w) = nsbox::is_nonsignaling(p).violations.into_iter().next() {
        return Err(Error::Signaling(w));
    }
    let parties = p.parties();
    let n = parties.get();
    let words = parties.words() as u32;
    // kernel[w] = 3^n / (8^n (-3)^w) = (-1)^w 3^(n-w) / 8^n
    let eight_n = inverse_power_of_two(3 * n);
    let kernel: Vec<Rational> = (0..=n)
        .map(|w| {
            let sign = if w % 2 == 0 { 1 } else { -1 };
            integer(sign * 3i64.pow((n - w) as u32)) * &eight_n
        })
        .collect();
    let support: Vec<(u32, u32, &Rational)> = (0..words)
        .flat_map(|t| (0..words).map(move |b| (t, b)))
        .map(|(t, b)| (t, b, &p.raw()[((t as usize) << n) | b as usize]))
        .filter(|(_, _, x)| !x.is_zero())
        .collect();
    let mut values = Vec::with_capacity(parties.events());
    for s in 0..words {
        for a in 0..words {
            let value: Rational = support
                .iter()
                .map(|&(t, b, x)| x * &kernel[(a ^ b ^ (s & t)).count_ones() as usize])
                .sum();
            values.push(value);
        }
    }
    Ok(BellFunctional::from_raw(parties, values))
}

/// `Ã^c_t = 2^n Σ_{s⊆c} (-1)^{s·t} C^c_s`.
pub fn nscorr_from_functional(coefficients: &CorrelationFunctional) -> CorrelationTable {
    let parties = coefficients.parties();
    let scale = integer(parties.words() as i64);
    CorrelationTable::from_subset_fn(parties, |c, t| {
        subsets_of(c)
            .map(|s| signed(coefficients.at(c, s), s & t))
            .sum::<Rational>()
            * &scale
    })
}

/// `B^c_s = 2^-(n+|c|) Σ_{t⊆c} (-1)^{s·t} Ã^c_t`.
pub fn corrfunctional_from_nsbox(table: &CorrelationTable) -> CorrelationFunctional {
    let parties = table.parties();
    let n = parties.get();
    CorrelationFunctional::from_subset_fn(parties, |c, s| {
        subsets_of(c)
            .map(|t| signed(table.at(c, t), s & t))
            .sum::<Rational>()
            * inverse_power_of_two(n + c.count_ones() as usize)
    })
}

fn subsets_of(c: u32) -> impl Iterator<Item = u32> {
    // Standard submask walk, including zero.
    let mut next = Some(c);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 { None } else { Some((current - 1) & c) };
        Some(current)
    })
}

fn signed(x: &Rational, overlap: u32) -> Rational {
    if parity(overlap) {
        -x
    } else {
        x.clone()
    }
}

/// The extremal box dual to the Bell–Hardy inequality:
///
/// ```text
/// P(b|t) = (Σ_j δ(b, t_j) + δ(b, t) - δ(b, 1)) / n,    t_j = 1 + t∧1_j
/// ```
///
/// # Panics
///
/// If the closed form ever fails to be a valid non-signaling box, which
/// would be a bug.
pub fn hardy_box(parties: Parties) -> BoxTable {
    let n = parties.get();
    let ones = parties.mask();
    let inv_n = Rational::new(1.into(), (n as i64).into());
    let table = BoxTable::from_fn(parties, |t, b| {
        let (t, b) = (t.bits(), b.bits());
        let mut count: i64 = (0..n)
            .filter(|&j| b == ones ^ (t & (1 << j)))
            .count() as i64;
        if b == t {
            count += 1;
        }
        if b == ones {
            count -= 1;
        }
        integer(count) * &inv_n
    });
    assert!(
        nsbox::is_valid_nonsignaling_box(&table),
        "closed-form Hardy box must be a valid non-signaling box"
    );
    table
}

/// Bipartite reference box with uniform marginals and `b_1 + b_2 = t_1 t_2`.
pub fn pr_box() -> BoxTable {
    let parties = Parties::new(2).expect("two parties");
    let half = Rational::new(1.into(), 2.into());
    BoxTable::from_fn(parties, |t, b| {
        let product = (t.bits() & 1) & (t.bits() >> 1);
        let sum = (b.bits() & 1) ^ (b.bits() >> 1);
        if sum == product {
            half.clone()
        } else {
            Rational::zero()
        }
    })
}

/// The vertex `b ; b + t` whose value under `B` is `P(b|t)`.
pub fn vertex_of_event(t: BinaryVector, b: BinaryVector) -> Result<crate::bellpoly::DeterministicStrategy> {
    crate::bellpoly::DeterministicStrategy::new(b, b.add(t)?)
}

/// The event `(t, b) = (a + b, a)` attached to vertex `a;b`.
pub fn event_of_vertex(d: &crate::bellpoly::DeterministicStrategy) -> (BinaryVector, BinaryVector) {
    let t = d.a().add(d.b()).expect("strategy halves share n");
    (t, d.a())
}
